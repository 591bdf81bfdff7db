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

#include <string>

#include "common/http.hpp"
#include "scoring/providers.hpp"

namespace rephrase {

struct HttpProviderOptions {
  std::string url;  // full endpoint URL
  std::string api_key;
  std::string model;
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
};

// Comment-analysis API: requests the TOXICITY attribute and reads
// attributeScores.TOXICITY.summaryScore.value. The key goes in the query.
class PerspectiveToxicity final : public ToxicityProvider {
 public:
  explicit PerspectiveToxicity(HttpProviderOptions options);
  std::string identity() const override { return "perspective:" + options_.url; }

  static Json BuildRequest(std::string_view text);
  static double ParseResponse(const Json& body);

 protected:
  double DoScore(std::string_view text) override;

 private:
  HttpProviderOptions options_;
  HttpJsonClient client_;
};

// Embeddings endpoint: {"model", "input"} -> data[0].embedding.
class HttpEmbedding final : public EmbeddingProvider {
 public:
  explicit HttpEmbedding(HttpProviderOptions options);
  std::string identity() const override;

 protected:
  std::vector<double> DoEmbed(std::string_view text) override;

 private:
  HttpProviderOptions options_;
  HttpJsonClient client_;
};

// Completions endpoint scored in echo mode: {"prompt", "echo": true,
// "logprobs": 0, "max_tokens": 0} -> choices[0].logprobs.token_logprobs.
// Null entries (the first token has no context) are skipped.
class HttpLogProb final : public LogProbProvider {
 public:
  explicit HttpLogProb(HttpProviderOptions options);
  std::string identity() const override;

 protected:
  std::vector<double> DoTokenLogProbs(std::string_view text) override;

 private:
  HttpProviderOptions options_;
  HttpJsonClient client_;
};

// Text-classification endpoint: {"inputs": text} -> [{label, score}, ...]
// (optionally nested one level). True iff the top label equals
// `positive_label`.
class HttpClassifier final : public BinaryTextClassifier {
 public:
  HttpClassifier(HttpProviderOptions options, std::string positive_label);
  std::string identity() const override;

  static std::string TopLabel(const Json& body);

 protected:
  bool DoClassify(std::string_view text) override;

 private:
  HttpProviderOptions options_;
  std::string positive_label_;
  HttpJsonClient client_;
};

}  // namespace rephrase
