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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace rephrase {

// Per-text response memo shared by every provider, so repeated texts score
// identically within a run and hit the underlying service once.
template <typename Value>
class TextMemo {
 public:
  template <typename Compute>
  Value Get(std::string_view text, Compute&& compute) {
    {
      std::lock_guard lock(mu_);
      if (auto it = values_.find(text); it != values_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard lock(mu_);
    return values_.emplace(std::string(text), std::move(v)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, Value, std::less<>> values_;
};

class ToxicityProvider {
 public:
  virtual ~ToxicityProvider() = default;
  // Toxicity in [0, 1].
  double Score(std::string_view text) {
    return memo_.Get(text, [&] { return DoScore(text); });
  }
  virtual std::string identity() const = 0;

 protected:
  virtual double DoScore(std::string_view text) = 0;

 private:
  TextMemo<double> memo_;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  std::vector<double> Embed(std::string_view text) {
    return memo_.Get(text, [&] { return DoEmbed(text); });
  }
  virtual std::string identity() const = 0;

 protected:
  virtual std::vector<double> DoEmbed(std::string_view text) = 0;

 private:
  TextMemo<std::vector<double>> memo_;
};

class LogProbProvider {
 public:
  virtual ~LogProbProvider() = default;
  // Natural-log probability of each token of `text`.
  std::vector<double> TokenLogProbs(std::string_view text) {
    return memo_.Get(text, [&] { return DoTokenLogProbs(text); });
  }
  virtual std::string identity() const = 0;

 protected:
  virtual std::vector<double> DoTokenLogProbs(std::string_view text) = 0;

 private:
  TextMemo<std::vector<double>> memo_;
};

class BinaryTextClassifier {
 public:
  virtual ~BinaryTextClassifier() = default;
  // True when the text carries the classifier's positive label (non-toxic for
  // the style classifier, acceptable for the fluency classifier).
  bool Classify(std::string_view text) {
    return memo_.Get(text, [&] { return DoClassify(text); });
  }
  virtual std::string identity() const = 0;

 protected:
  virtual bool DoClassify(std::string_view text) = 0;

 private:
  TextMemo<bool> memo_;
};

struct Providers {
  std::shared_ptr<ToxicityProvider> toxicity;
  std::shared_ptr<EmbeddingProvider> embedding;
  std::shared_ptr<LogProbProvider> logprob;
  std::shared_ptr<BinaryTextClassifier> style;
  std::shared_ptr<BinaryTextClassifier> fluency;

  // Name -> identity map pinned into run manifests.
  std::map<std::string, std::string> Identities() const;
};

}  // namespace rephrase
