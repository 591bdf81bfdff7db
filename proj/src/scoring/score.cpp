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

#include "scoring/score.hpp"

#include "common/text.hpp"
#include "scoring/bleu.hpp"
#include "scoring/metrics.hpp"

namespace rephrase {
namespace {

ErrorCode ErrorCodeFromName(std::string_view name) {
  for (auto c : {ErrorCode::kInvalidArgument, ErrorCode::kIo, ErrorCode::kParse,
                 ErrorCode::kValidation, ErrorCode::kBackend, ErrorCode::kUnreachable,
                 ErrorCode::kState}) {
    if (ErrorCodeName(c) == name) return c;
  }
  return ErrorCode::kInternal;
}

}  // namespace

void ValidateScoringConfig(const ScoringConfig& config) {
  if (!(config.hybrid_threshold >= 0.0 && config.hybrid_threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "hybrid threshold must be in [0, 1)");
  }
  if (config.bleu_max_order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bleu max order must be >= 1");
  }
}

void Derive(InstanceScores& s, double threshold) {
  s.average = (s.cosine + s.hir) / 2.0;
  s.hybrid = HybridScore(s.cosine, s.hir, threshold);
  s.failed = IsFailure(s.hir, threshold);
}

Json ToJson(const InstanceScores& s) {
  return {{"record_id", s.record_id}, {"bleu", s.bleu},       {"perplexity", s.perplexity},
          {"cosine", s.cosine},       {"hir", s.hir},         {"average", s.average},
          {"hybrid", s.hybrid},       {"sta_nontoxic", s.sta_nontoxic},
          {"fluent", s.fluent},       {"failed", s.failed}};
}

InstanceScores InstanceScoresFromJson(const Json& j) {
  try {
    InstanceScores s;
    s.record_id = j.at("record_id").get<std::string>();
    s.bleu = j.at("bleu").get<double>();
    s.perplexity = j.at("perplexity").get<double>();
    s.cosine = j.at("cosine").get<double>();
    s.hir = j.at("hir").get<double>();
    s.average = j.at("average").get<double>();
    s.hybrid = j.at("hybrid").get<double>();
    s.sta_nontoxic = j.at("sta_nontoxic").get<bool>();
    s.fluent = j.at("fluent").get<bool>();
    s.failed = j.at("failed").get<bool>();
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("scores record: ") + e.what());
  }
}

Json ToJson(const InstanceError& e) {
  return {{"record_id", e.record_id},
          {"stage", e.stage},
          {"code", ErrorCodeName(e.code)},
          {"message", e.message}};
}

InstanceError InstanceErrorFromJson(const Json& j) {
  try {
    return {j.at("record_id").get<std::string>(), j.at("stage").get<std::string>(),
            ErrorCodeFromName(j.value("code", std::string())), j.value("message", std::string())};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("error record: ") + e.what());
  }
}

std::variant<InstanceScores, InstanceError> ScoreInstance(const CorpusRecord& record,
                                                          std::string_view generated,
                                                          Providers& providers,
                                                          const ScoringConfig& config) {
  try {
    if (Trim(generated).empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty generation");
    }
    InstanceScores s;
    s.record_id = record.id;
    s.bleu = Bleu(generated, record.reference_text, config.bleu_max_order);
    s.perplexity = Perplexity(generated, *providers.logprob);
    s.cosine = CosineSimilarity(generated, record.reference_text, *providers.embedding);
    s.hir = HateIntensityReduction(record.hate_text, generated, *providers.toxicity);
    s.sta_nontoxic = providers.style->Classify(generated);
    s.fluent = providers.fluency->Classify(generated);
    Derive(s, config.hybrid_threshold);
    return s;
  } catch (const Error& e) {
    return InstanceError{record.id, "scoring", e.code(), e.what()};
  } catch (const std::exception& e) {
    return InstanceError{record.id, "scoring", ErrorCode::kInternal, e.what()};
  }
}

}  // namespace rephrase
