/* Copyright 2026 The rephrase-eval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "scoring/provider_factory.hpp"

#include <cstdlib>

#include "common/error.hpp"
#include "common/text.hpp"
#include "scoring/http_providers.hpp"
#include "scoring/stub_providers.hpp"

namespace rephrase {
namespace {

const Json& Section(const Json& config, const char* name) {
  static const Json kEmpty = Json::object();
  if (!config.is_object()) return kEmpty;
  auto it = config.find(name);
  return it == config.end() || it->is_null() ? kEmpty : *it;
}

std::string TypeOf(const Json& section, const char* fallback) {
  return section.value("type", std::string(fallback));
}

HttpProviderOptions HttpOptions(const Json& s, const char* name) {
  HttpProviderOptions o;
  o.url = s.value("url", std::string());
  if (o.url.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " provider: \"url\" is required");
  }
  o.model = s.value("model", std::string());
  o.api_key = s.value("api_key", std::string());
  if (o.api_key.empty()) {
    if (auto env = s.value("api_key_env", std::string()); !env.empty()) {
      if (const char* v = std::getenv(env.c_str())) o.api_key = v;
    }
  }
  o.timeout = std::chrono::milliseconds(s.value("timeout_ms", 30000));
  o.retry.max_retries = s.value("max_retries", 3);
  o.retry.initial_backoff = std::chrono::milliseconds(s.value("initial_backoff_ms", 500));
  return o;
}

std::map<std::string, double> LoadLexicon(const Json& s, const std::filesystem::path& base_dir) {
  if (auto it = s.find("lexicon"); it != s.end() && it->is_object()) {
    return it->get<std::map<std::string, double>>();
  }
  if (auto file = s.value("lexicon_file", std::string()); !file.empty()) {
    std::filesystem::path p(file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    try {
      return Json::parse(ReadFileToString(p)).get<std::map<std::string, double>>();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, p.string() + ": " + e.what());
    }
  }
  return LexiconToxicity::DefaultLexicon();
}

std::shared_ptr<BinaryTextClassifier> MakeClassifier(const Json& s, const char* name,
                                                     const std::string& type) {
  if (type == "constant") return std::make_shared<ConstantClassifier>(s.value("value", true));
  if (type == "http") {
    return std::make_shared<HttpClassifier>(HttpOptions(s, name),
                                            s.value("positive_label", std::string()));
  }
  return nullptr;
}

}  // namespace

std::map<std::string, std::string> Providers::Identities() const {
  std::map<std::string, std::string> out;
  if (toxicity) out["toxicity"] = toxicity->identity();
  if (embedding) out["embedding"] = embedding->identity();
  if (logprob) out["logprob"] = logprob->identity();
  if (style) out["style"] = style->identity();
  if (fluency) out["fluency"] = fluency->identity();
  return out;
}

Providers MakeProviders(const Json& config, const Corpus& corpus,
                        const std::filesystem::path& base_dir) {
  Providers p;
  try {
    const Json& tox = Section(config, "toxicity");
    const std::string tox_type = TypeOf(tox, "lexicon");
    std::shared_ptr<ToxicityProvider> lexicon_tox;
    if (tox_type == "lexicon") {
      lexicon_tox = std::make_shared<LexiconToxicity>(
          LoadLexicon(tox, base_dir), tox.value("fail_on", std::set<std::string>{}));
      p.toxicity = lexicon_tox;
    } else if (tox_type == "perspective") {
      p.toxicity = std::make_shared<PerspectiveToxicity>(HttpOptions(tox, "toxicity"));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown toxicity provider type: " + tox_type);
    }

    const Json& emb = Section(config, "embedding");
    const std::string emb_type = TypeOf(emb, "hashed-bow");
    if (emb_type == "hashed-bow") {
      p.embedding = std::make_shared<HashedBagOfWords>(emb.value("dim", std::size_t{256}));
    } else if (emb_type == "http") {
      p.embedding = std::make_shared<HttpEmbedding>(HttpOptions(emb, "embedding"));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown embedding provider type: " + emb_type);
    }

    const Json& lp = Section(config, "logprob");
    const std::string lp_type = TypeOf(lp, "unigram");
    if (lp_type == "unigram") {
      std::vector<std::string> refs;
      refs.reserve(corpus.size());
      for (const auto& r : corpus.records) refs.push_back(r.reference_text);
      p.logprob = std::make_shared<UnigramLogProb>(refs);
    } else if (lp_type == "http") {
      p.logprob = std::make_shared<HttpLogProb>(HttpOptions(lp, "logprob"));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown logprob provider type: " + lp_type);
    }

    const Json& style = Section(config, "style");
    const std::string style_type = TypeOf(style, "lexicon");
    if (style_type == "lexicon") {
      if (!lexicon_tox) {
        lexicon_tox = std::make_shared<LexiconToxicity>(LoadLexicon(style, base_dir));
      }
      p.style = std::make_shared<LexiconStyleClassifier>(lexicon_tox, style.value("threshold", 0.5));
    } else if (!(p.style = MakeClassifier(style, "style", style_type))) {
      throw Error(ErrorCode::kInvalidArgument, "unknown style classifier type: " + style_type);
    }

    const Json& flu = Section(config, "fluency");
    const std::string flu_type = TypeOf(flu, "min-tokens");
    if (flu_type == "min-tokens") {
      p.fluency = std::make_shared<MinTokensFluency>(flu.value("min_tokens", std::size_t{3}));
    } else if (!(p.fluency = MakeClassifier(flu, "fluency", flu_type))) {
      throw Error(ErrorCode::kInvalidArgument, "unknown fluency classifier type: " + flu_type);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("provider config: ") + e.what());
  }
  return p;
}

}  // namespace rephrase
