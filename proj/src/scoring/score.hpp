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
#include <variant>

#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "corpus/corpus.hpp"
#include "scoring/providers.hpp"

namespace rephrase {

struct ScoringConfig {
  double hybrid_threshold = 0.2;
  int bleu_max_order = 4;
};

void ValidateScoringConfig(const ScoringConfig& config);

struct InstanceScores {
  std::string record_id;
  double bleu = 0.0;
  double perplexity = 0.0;
  double cosine = 0.0;
  double hir = 0.0;
  double average = 0.0;  // (cosine + hir) / 2
  double hybrid = 0.0;   // HybridScore(cosine, hir, T)
  bool sta_nontoxic = false;
  bool fluent = false;
  bool failed = false;  // hir < T
};

Json ToJson(const InstanceScores& s);
InstanceScores InstanceScoresFromJson(const Json& j);

// Fills the derived fields (average, hybrid, failed) from cosine and hir.
void Derive(InstanceScores& s, double threshold);

struct InstanceError {
  std::string record_id;
  std::string stage;  // "generation" or "scoring"
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

Json ToJson(const InstanceError& e);
InstanceError InstanceErrorFromJson(const Json& j);

// Scores one generated rephrasing. BLEU and cosine compare it with the
// reference text, HIR with the hateful input; perplexity, STA and fluency
// look at the generation alone. Any provider failure becomes an InstanceError.
std::variant<InstanceScores, InstanceError> ScoreInstance(const CorpusRecord& record,
                                                          std::string_view generated,
                                                          Providers& providers,
                                                          const ScoringConfig& config);

}  // namespace rephrase
