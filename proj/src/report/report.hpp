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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common/jsonl.hpp"
#include "scoring/score.hpp"

namespace rephrase {

struct RunReport {
  std::string system_id;
  std::string model_id;
  std::optional<std::string> prompt_kind;  // cli name; absent for imports
  std::size_t n_scored = 0;
  double bleu = 0.0;
  double perplexity = 0.0;
  double cosine = 0.0;
  double hir = 0.0;
  double average = 0.0;
  double hybrid = 0.0;
  double sta = 0.0;
  double fluency = 0.0;
  double failure_rate = 0.0;
  double hybrid_threshold = 0.2;
  std::map<std::string, std::string> providers;  // from the run manifest
};

Json ToJson(const RunReport& report);

// Means over instances; STA, fluency and failure rate are flag fractions.
// Throws kValidation on an empty input.
RunReport Aggregate(const std::vector<InstanceScores>& scores, std::string system_id = {});

RunReport AggregateScoresFile(const std::filesystem::path& scores_file);

// Aggregates a run directory and attaches its manifest metadata.
RunReport LoadRunReport(const std::filesystem::path& run_dir);

// Throws kState when the reports were scored by different providers.
void CheckComparable(const std::vector<RunReport>& reports);

enum class TableFormat { kMarkdown, kCsv };

struct TableOptions {
  TableFormat format = TableFormat::kMarkdown;
  bool with_failure_rate = false;  // extra column after Fluency
};

// One row per report, values at 4 decimals. Markdown bolds the best cell per
// column: lowest perplexity, highest everything else.
std::string EmitTable(const std::vector<RunReport>& reports, const TableOptions& options = {});

// Unrounded aggregates, keyed by system id in input order.
Json ReportsSidecar(const std::vector<RunReport>& reports);

struct ConsistencyRow {
  std::string label;
  double cosine = 0.0;
  double hir = 0.0;
  double average = 0.0;
};

struct Violation {
  std::size_t index = 0;
  std::string label;
  double expected = 0.0;  // (cosine + hir) / 2
  double actual = 0.0;
  double delta = 0.0;
};

inline constexpr double kTableTolerance = 5e-4;

std::vector<Violation> CheckTableConsistency(const std::vector<ConsistencyRow>& rows,
                                             double tolerance = kTableTolerance);

// Reads cosine/HIR/Average columns from a CSV table. Header names are matched
// loosely ("Cosine sim." or "cosine", "HIR", "Average"); the first one or two
// non-numeric columns label the row.
std::vector<ConsistencyRow> LoadConsistencyRows(const std::filesystem::path& csv_path);

}  // namespace rephrase
