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

#include "generation/generator.hpp"

#include "common/error.hpp"
#include "common/hash.hpp"
#include "generation/extract.hpp"

namespace rephrase {

void ValidateGenerationConfig(const GenerationConfig& config) {
  if (config.model_id.empty()) throw Error(ErrorCode::kInvalidArgument, "model id is required");
  if (config.backend_id.empty()) throw Error(ErrorCode::kInvalidArgument, "backend id is required");
  if (!(config.temperature >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (config.max_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  if (config.max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
}

Json ToJson(const GenerationResult& r) {
  Json j = {
      {"record_id", r.record_id},
      {"prompt_kind", r.prompt_kind ? Json(std::string(CliName(*r.prompt_kind))) : Json(nullptr)},
      {"model_id", r.model_id},
      {"backend_id", r.backend_id},
      {"template_version", r.template_version},
      {"hate_text", r.hate_text},
      {"raw_output", r.raw_output},
      {"rephrasing", r.rephrasing},
      {"latency_ms", r.latency.count()},
      {"from_cache", r.from_cache},
  };
  if (r.token_usage) {
    j["token_usage"] = {{"prompt", r.token_usage->prompt},
                        {"completion", r.token_usage->completion}};
  } else {
    j["token_usage"] = nullptr;
  }
  return j;
}

GenerationResult GenerationResultFromJson(const Json& j) {
  try {
    GenerationResult r;
    r.record_id = j.at("record_id").get<std::string>();
    if (const auto& k = j.at("prompt_kind"); !k.is_null()) {
      r.prompt_kind = ParsePromptKind(k.get<std::string>());
      if (!r.prompt_kind) throw Error(ErrorCode::kParse, "unknown prompt kind " + k.dump());
    }
    r.model_id = j.at("model_id").get<std::string>();
    r.backend_id = j.at("backend_id").get<std::string>();
    r.template_version = j.value("template_version", std::string());
    r.hate_text = j.value("hate_text", std::string());
    r.raw_output = j.at("raw_output").get<std::string>();
    r.rephrasing = j.at("rephrasing").get<std::string>();
    r.latency = std::chrono::milliseconds(j.value("latency_ms", std::int64_t{0}));
    r.from_cache = j.value("from_cache", false);
    if (auto u = j.find("token_usage"); u != j.end() && u->is_object()) {
      r.token_usage = TokenUsage{u->value("prompt", std::int64_t{0}),
                                 u->value("completion", std::int64_t{0})};
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("generation record: ") + e.what());
  }
}

std::string GenerationCacheKey(std::string_view model_id, std::string_view backend_id,
                               PromptKind kind, std::string_view template_version,
                               std::string_view hate_text, double temperature, int max_tokens) {
  const Json parts = {model_id, backend_id, CliName(kind), template_version,
                      hate_text, temperature, max_tokens};
  return Sha256Hex(parts.dump());
}

GenerationResult GenerateCached(const CorpusRecord& record, PromptKind kind,
                                const GenerationConfig& config, const TemplateStore& templates,
                                Backend& backend, GenerationCache& cache) {
  ValidateGenerationConfig(config);
  const RenderedPrompt prompt = templates.Render(kind, record.hate_text);
  const std::string key =
      GenerationCacheKey(config.model_id, config.backend_id, kind, prompt.template_version,
                         record.hate_text, config.temperature, config.max_tokens);

  auto lookup = cache.GetOrCompute(key, [&] {
    const auto start = std::chrono::steady_clock::now();
    Completion c = backend.Complete({prompt.text, record.id}, config);
    GenerationCache::Entry e;
    e.latency = c.reported_latency.value_or(std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start));
    e.raw_output = std::move(c.text);
    e.usage = c.usage;
    return e;
  });

  GenerationResult r;
  r.record_id = record.id;
  r.prompt_kind = kind;
  r.model_id = config.model_id;
  r.backend_id = config.backend_id;
  r.template_version = prompt.template_version;
  r.hate_text = record.hate_text;
  r.raw_output = lookup.entry.raw_output;
  r.latency = lookup.entry.latency;
  r.from_cache = lookup.hit;
  r.token_usage = lookup.entry.usage;
  r.rephrasing = ExtractRephrasing(r.raw_output);
  return r;
}

}  // namespace rephrase
