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

#include <span>
#include <string_view>

#include "scoring/providers.hpp"

namespace rephrase {

// exp(-mean(log_probs)). Throws kInvalidArgument on an empty list.
double Perplexity(std::span<const double> log_probs);
// Throws kInvalidArgument for empty text or when the provider yields nothing.
double Perplexity(std::string_view text, LogProbProvider& provider);

// Throws kValidation("degenerate embedding") if either vector has zero norm,
// kInvalidArgument on a dimension mismatch.
double CosineSimilarity(std::span<const double> u, std::span<const double> v);
double CosineSimilarity(std::string_view a, std::string_view b, EmbeddingProvider& provider);

// Hate intensity reduction: toxicity(original) - toxicity(generated).
double HateIntensityReduction(std::string_view original, std::string_view generated,
                              ToxicityProvider& provider);

// Zero when hir <= threshold, otherwise the mean of cosine and hir.
constexpr double HybridScore(double cosine, double hir, double threshold) {
  return hir <= threshold ? 0.0 : (cosine + hir) / 2.0;
}

// Failed instances reduce intensity by strictly less than the threshold.
// At hir == threshold the hybrid score is zeroed but the instance does not
// count as failed; both rules are kept as stated.
constexpr bool IsFailure(double hir, double threshold) { return hir < threshold; }

}  // namespace rephrase
