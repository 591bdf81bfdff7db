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

#include "scoring/stub_providers.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/jsonl.hpp"
#include "scoring/tokenize.hpp"

namespace rephrase {
namespace {

std::size_t CountSequence(const std::vector<std::string>& tokens,
                          const std::vector<std::string>& seq) {
  if (seq.empty() || tokens.size() < seq.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + seq.size() <= tokens.size(); ++i) {
    if (std::equal(seq.begin(), seq.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

std::string FormatDouble(double v) { return Json(v).dump(); }

}  // namespace

LexiconToxicity::LexiconToxicity(std::map<std::string, double> weights,
                                 std::set<std::string> fail_on)
    : fail_on_(std::move(fail_on)) {
  Json fingerprint = Json::object();
  for (const auto& [term, w] : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "lexicon weight for '" + term + "' not in [0, 1]");
    }
    entries_.emplace_back(Tokenize(term), w);
    fingerprint[term] = w;
  }
  identity_ = "lexicon-toxicity@" + Sha256Hex(fingerprint.dump()).substr(0, 12);
}

const std::map<std::string, double>& LexiconToxicity::DefaultLexicon() {
  static const std::map<std::string, double> kLexicon = {
      {"evil", 0.7},      {"menace", 0.6},    {"cult", 0.5},      {"death", 0.5},
      {"rape", 0.8},      {"terrorism", 0.6}, {"invading", 0.4},  {"danger", 0.3},
      {"worst", 0.3},     {"slave", 0.3},     {"violence", 0.5},  {"bribery", 0.3},
      {"polygamy", 0.3},  {"stop islam", 0.6}, {"take over", 0.3}, {"go off", 0.3},
      {"threat", 0.3},    {"kill", 0.8},      {"vermin", 0.8},    {"filth", 0.7},
  };
  return kLexicon;
}

std::string LexiconToxicity::identity() const { return identity_; }

double LexiconToxicity::DoScore(std::string_view text) {
  for (const auto& needle : fail_on_) {
    if (text.find(needle) != std::string_view::npos) {
      throw Error(ErrorCode::kUnreachable, "toxicity provider unavailable");
    }
  }
  const auto tokens = Tokenize(text);
  double keep = 1.0;
  for (const auto& [seq, w] : entries_) {
    const auto hits = CountSequence(tokens, seq);
    if (hits) keep *= std::pow(1.0 - w, static_cast<double>(hits));
  }
  return 1.0 - keep;
}

HashedBagOfWords::HashedBagOfWords(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

std::string HashedBagOfWords::identity() const { return "hashed-bow:" + std::to_string(dim_); }

std::vector<double> HashedBagOfWords::DoEmbed(std::string_view text) {
  std::vector<double> v(dim_, 0.0);
  for (const auto& tok : Tokenize(text)) v[Fnv1a64(tok) % dim_] += 1.0;
  return v;
}

UnigramLogProb::UnigramLogProb(const std::vector<std::string>& training_texts) {
  std::string all;
  for (const auto& text : training_texts) {
    for (auto& tok : Tokenize(text)) {
      ++total_;
      auto it = counts_.find(tok);
      if (it == counts_.end()) {
        counts_.emplace(std::move(tok), 1);
      } else {
        ++it->second;
      }
    }
    all += text;
    all += '\n';
  }
  fingerprint_ = Sha256Hex(all).substr(0, 12);
}

std::string UnigramLogProb::identity() const { return "unigram-add-one@" + fingerprint_; }

std::vector<double> UnigramLogProb::DoTokenLogProbs(std::string_view text) {
  const double denom = static_cast<double>(total_ + counts_.size() + 1);
  std::vector<double> out;
  for (const auto& tok : Tokenize(text)) {
    const auto it = counts_.find(tok);
    const double count = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
    out.push_back(std::log((count + 1.0) / denom));
  }
  return out;
}

LexiconStyleClassifier::LexiconStyleClassifier(std::shared_ptr<ToxicityProvider> toxicity,
                                               double threshold)
    : toxicity_(std::move(toxicity)), threshold_(threshold) {}

std::string LexiconStyleClassifier::identity() const {
  return "lexicon-style(" + toxicity_->identity() + ",threshold=" + FormatDouble(threshold_) + ")";
}

bool LexiconStyleClassifier::DoClassify(std::string_view text) {
  return toxicity_->Score(text) < threshold_;
}

MinTokensFluency::MinTokensFluency(std::size_t min_tokens) : min_tokens_(min_tokens) {}

std::string MinTokensFluency::identity() const {
  return "min-tokens:" + std::to_string(min_tokens_);
}

bool MinTokensFluency::DoClassify(std::string_view text) {
  return Tokenize(text).size() >= min_tokens_;
}

}  // namespace rephrase
