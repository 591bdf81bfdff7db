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

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "scoring/providers.hpp"

namespace rephrase {

// Offline toxicity: noisy-or over lexicon hits. Each occurrence of an entry
// (a word or a multi-word phrase, matched on Tokenize() output) with weight w
// contributes, and the score is 1 - prod(1 - w). Texts containing any
// `fail_on` substring throw kUnreachable, which simulates an outage.
class LexiconToxicity final : public ToxicityProvider {
 public:
  explicit LexiconToxicity(std::map<std::string, double> weights,
                           std::set<std::string> fail_on = {});

  static const std::map<std::string, double>& DefaultLexicon();

  std::string identity() const override;

 protected:
  double DoScore(std::string_view text) override;

 private:
  std::vector<std::pair<std::vector<std::string>, double>> entries_;
  std::set<std::string> fail_on_;
  std::string identity_;
};

// Feature-hashed bag of words: each token adds 1 to coordinate
// Fnv1a64(token) % dim. Texts with no tokens embed to the zero vector.
class HashedBagOfWords final : public EmbeddingProvider {
 public:
  explicit HashedBagOfWords(std::size_t dim = 256);
  std::string identity() const override;

 protected:
  std::vector<double> DoEmbed(std::string_view text) override;

 private:
  std::size_t dim_;
};

// Add-one smoothed unigram model fit on a set of texts. With N training
// tokens over V types plus one unknown bucket,
//   p(w) = (count(w) + 1) / (N + V + 1).
class UnigramLogProb final : public LogProbProvider {
 public:
  explicit UnigramLogProb(const std::vector<std::string>& training_texts);

  std::size_t token_count() const { return total_; }
  std::size_t vocabulary_size() const { return counts_.size(); }
  std::string identity() const override;

 protected:
  std::vector<double> DoTokenLogProbs(std::string_view text) override;

 private:
  std::map<std::string, std::size_t, std::less<>> counts_;
  std::size_t total_ = 0;
  std::string fingerprint_;
};

// Non-toxic iff the lexicon toxicity is below `threshold`.
class LexiconStyleClassifier final : public BinaryTextClassifier {
 public:
  LexiconStyleClassifier(std::shared_ptr<ToxicityProvider> toxicity, double threshold);
  std::string identity() const override;

 protected:
  bool DoClassify(std::string_view text) override;

 private:
  std::shared_ptr<ToxicityProvider> toxicity_;
  double threshold_;
};

// Fluent iff the text has at least `min_tokens` tokens.
class MinTokensFluency final : public BinaryTextClassifier {
 public:
  explicit MinTokensFluency(std::size_t min_tokens);
  std::string identity() const override;

 protected:
  bool DoClassify(std::string_view text) override;

 private:
  std::size_t min_tokens_;
};

class ConstantClassifier final : public BinaryTextClassifier {
 public:
  explicit ConstantClassifier(bool value) : value_(value) {}
  std::string identity() const override { return value_ ? "constant:true" : "constant:false"; }

 protected:
  bool DoClassify(std::string_view) override { return value_; }

 private:
  bool value_;
};

}  // namespace rephrase
