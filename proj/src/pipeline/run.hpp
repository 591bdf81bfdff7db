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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "common/jsonl.hpp"
#include "generation/backend.hpp"
#include "prompts/prompts.hpp"
#include "scoring/score.hpp"

namespace rephrase {

// Run directory layout.
struct RunPaths {
  std::filesystem::path dir;
  std::filesystem::path manifest() const { return dir / "manifest.json"; }
  std::filesystem::path generations() const { return dir / "generations.jsonl"; }
  std::filesystem::path scores() const { return dir / "scores.jsonl"; }
  std::filesystem::path errors() const { return dir / "errors.jsonl"; }
  std::filesystem::path cache() const { return dir / "cache" / "generations.jsonl"; }
};

struct ScoringSetup {
  ScoringConfig config;
  Json providers = Json::object();     // see MakeProviders
  std::filesystem::path providers_dir;  // base for relative paths in `providers`
};

struct RunConfig {
  std::filesystem::path corpus_path;
  std::string system_id;  // defaults to "<model_id>/<prompt kind>"
  PromptKind prompt_kind = PromptKind::kTaskDescription;
  GenerationConfig generation;
  ScoringSetup scoring;
  std::filesystem::path out_dir;
  int max_concurrency = 4;
  bool resume = false;
  // Desk-scale runs: score a seeded subset of the corpus.
  std::optional<std::size_t> sample_size;
  std::uint64_t seed = 0;
};

struct ImportConfig {
  std::filesystem::path generations_path;  // JSONL of {"id", "text"}
  std::string system_id;
  std::filesystem::path corpus_path;
  ScoringSetup scoring;
  std::filesystem::path out_dir;
  int max_concurrency = 4;
};

enum class RunStatus { kComplete, kPartial, kUnreachable };

std::string_view RunStatusName(RunStatus status);

struct Coverage {
  std::size_t total = 0;
  std::size_t generated = 0;
  std::size_t generation_errors = 0;
  std::size_t scored = 0;
  std::size_t scoring_errors = 0;
};

struct RunSummary {
  std::filesystem::path dir;
  Coverage coverage;
  std::uint64_t backend_calls = 0;
  std::size_t cache_hits = 0;
  RunStatus status = RunStatus::kComplete;
};

Json ToJson(const RunSummary& summary);

// render -> generate (cached) -> extract -> score for every record, with a
// bounded worker pool. Artifacts are written in corpus order. Corpus and
// configuration problems throw; per-record failures land in errors.jsonl.
// A fresh run refuses an existing non-empty directory unless resume is set.
RunSummary RunPipeline(const RunConfig& config, const TemplateStore& templates, Backend& backend);

// Scores externally produced outputs (baselines, human references) exactly
// like generated ones. Unknown, duplicate or textless ids throw.
RunSummary ImportExternalGenerations(const ImportConfig& config);

// Re-scores an existing run directory's generations with new providers.
RunSummary RescoreRun(const std::filesystem::path& run_dir, const ScoringSetup& scoring,
                      int max_concurrency);

struct FailureReport {
  std::vector<std::string> failed_ids;
  std::size_t scored = 0;
  double rate = 0.0;  // failed / scored; 0 when nothing was scored
};

FailureReport FlagFailures(const std::filesystem::path& scores_file);

}  // namespace rephrase
