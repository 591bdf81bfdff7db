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

#include "scoring/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/text.hpp"

namespace rephrase {

double Perplexity(std::span<const double> log_probs) {
  if (log_probs.empty()) throw Error(ErrorCode::kInvalidArgument, "perplexity of empty sequence");
  double sum = 0.0;
  for (double lp : log_probs) sum += lp;
  return std::exp(-sum / static_cast<double>(log_probs.size()));
}

double Perplexity(std::string_view text, LogProbProvider& provider) {
  if (Trim(text).empty()) throw Error(ErrorCode::kInvalidArgument, "perplexity of empty text");
  const auto lps = provider.TokenLogProbs(text);
  if (lps.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "log-prob provider returned no tokens");
  }
  return Perplexity(lps);
}

double CosineSimilarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimensions differ: " +
                                                 std::to_string(u.size()) + " vs " +
                                                 std::to_string(v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::kValidation, "degenerate embedding");
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

double CosineSimilarity(std::string_view a, std::string_view b, EmbeddingProvider& provider) {
  const auto u = provider.Embed(a);
  const auto v = provider.Embed(b);
  return CosineSimilarity(u, v);
}

double HateIntensityReduction(std::string_view original, std::string_view generated,
                              ToxicityProvider& provider) {
  return provider.Score(original) - provider.Score(generated);
}

}  // namespace rephrase
