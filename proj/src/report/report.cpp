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

#include "report/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "prompts/prompts.hpp"

namespace rephrase {
namespace {

std::string Fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Column {
  std::string header;
  std::function<double(const RunReport&)> value;
  bool lower_is_better = false;
};

std::vector<Column> Columns(const std::vector<RunReport>& reports, bool with_failure_rate) {
  const double t = reports.empty() ? 0.2 : reports.front().hybrid_threshold;
  char hybrid[48];
  std::snprintf(hybrid, sizeof hybrid, "Hybrid (T=%g)", t);
  std::vector<Column> cols = {
      {"BLEU", [](const RunReport& r) { return r.bleu; }},
      {"Perplexity", [](const RunReport& r) { return r.perplexity; }, true},
      {"Cosine sim.", [](const RunReport& r) { return r.cosine; }},
      {"HIR", [](const RunReport& r) { return r.hir; }},
      {"Average", [](const RunReport& r) { return r.average; }},
      {hybrid, [](const RunReport& r) { return r.hybrid; }},
      {"STA", [](const RunReport& r) { return r.sta; }},
      {"Fluency", [](const RunReport& r) { return r.fluency; }},
  };
  if (with_failure_rate) {
    cols.push_back({"Failure rate", [](const RunReport& r) { return r.failure_rate; }, true});
  }
  return cols;
}

std::string PromptTypeCell(const RunReport& r) {
  if (!r.prompt_kind) return "--";
  const auto kind = ParsePromptKind(*r.prompt_kind);
  return kind ? std::string(DisplayName(*kind)) : *r.prompt_kind;
}

std::string LlmCell(const RunReport& r) {
  return r.model_id.empty() ? r.system_id : r.model_id;
}

std::string Normalize(std::string_view header) {
  std::string out;
  for (char c : header) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

std::optional<double> ParseNumber(std::string_view s) {
  const std::string text(Trim(s));
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Json ToJson(const RunReport& r) {
  Json providers = Json::object();
  for (const auto& [k, v] : r.providers) providers[k] = v;
  return {{"system_id", r.system_id},
          {"model_id", r.model_id},
          {"prompt_kind", r.prompt_kind ? Json(*r.prompt_kind) : Json(nullptr)},
          {"n_scored", r.n_scored},
          {"bleu", r.bleu},
          {"perplexity", r.perplexity},
          {"cosine", r.cosine},
          {"hir", r.hir},
          {"average", r.average},
          {"hybrid", r.hybrid},
          {"sta", r.sta},
          {"fluency", r.fluency},
          {"failure_rate", r.failure_rate},
          {"hybrid_threshold", r.hybrid_threshold},
          {"providers", providers}};
}

RunReport Aggregate(const std::vector<InstanceScores>& scores, std::string system_id) {
  if (scores.empty()) throw Error(ErrorCode::kValidation, "no scored instances to aggregate");
  RunReport r;
  r.system_id = std::move(system_id);
  r.n_scored = scores.size();
  std::size_t sta = 0, fluent = 0, failed = 0;
  for (const auto& s : scores) {
    r.bleu += s.bleu;
    r.perplexity += s.perplexity;
    r.cosine += s.cosine;
    r.hir += s.hir;
    r.hybrid += s.hybrid;
    sta += s.sta_nontoxic;
    fluent += s.fluent;
    failed += s.failed;
  }
  const double n = static_cast<double>(scores.size());
  r.bleu /= n;
  r.perplexity /= n;
  r.cosine /= n;
  r.hir /= n;
  r.hybrid /= n;
  r.average = (r.cosine + r.hir) / 2.0;
  r.sta = static_cast<double>(sta) / n;
  r.fluency = static_cast<double>(fluent) / n;
  r.failure_rate = static_cast<double>(failed) / n;
  return r;
}

RunReport AggregateScoresFile(const std::filesystem::path& scores_file) {
  std::vector<InstanceScores> scores;
  for (const auto& line : ReadJsonLines(scores_file)) {
    try {
      scores.push_back(InstanceScoresFromJson(line.value));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, scores_file.string() + ": line " +
                                         std::to_string(line.line_number) + ": " + e.what());
    }
  }
  if (scores.empty()) throw Error(ErrorCode::kValidation, scores_file.string() + ": no scored instances");
  return Aggregate(scores, scores_file.parent_path().filename().string());
}

RunReport LoadRunReport(const std::filesystem::path& run_dir) {
  const auto manifest_path = run_dir / "manifest.json";
  Json manifest;
  try {
    manifest = Json::parse(ReadFileToString(manifest_path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, manifest_path.string() + ": " + e.what());
  }
  RunReport r = AggregateScoresFile(run_dir / "scores.jsonl");
  r.system_id = manifest.value("system_id", r.system_id);
  r.model_id = manifest.value("model_id", std::string());
  if (auto it = manifest.find("prompt_kind"); it != manifest.end() && it->is_string()) {
    r.prompt_kind = it->get<std::string>();
  }
  if (auto it = manifest.find("scoring"); it != manifest.end()) {
    r.hybrid_threshold = it->value("hybrid_threshold", r.hybrid_threshold);
  }
  if (auto it = manifest.find("providers"); it != manifest.end() && it->is_object()) {
    for (const auto& [k, v] : it->items()) r.providers[k] = v.get<std::string>();
  }
  return r;
}

void CheckComparable(const std::vector<RunReport>& reports) {
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].providers != reports[0].providers) {
      throw Error(ErrorCode::kState, "runs '" + reports[0].system_id + "' and '" +
                                         reports[i].system_id +
                                         "' were scored by different providers");
    }
    if (reports[i].hybrid_threshold != reports[0].hybrid_threshold) {
      throw Error(ErrorCode::kState, "runs '" + reports[0].system_id + "' and '" +
                                         reports[i].system_id + "' use different hybrid thresholds");
    }
  }
}

std::string EmitTable(const std::vector<RunReport>& reports, const TableOptions& options) {
  if (reports.empty()) throw Error(ErrorCode::kInvalidArgument, "no reports to tabulate");
  const auto cols = Columns(reports, options.with_failure_rate);

  std::vector<std::string> header = {"LLM", "Prompt Type"};
  for (const auto& c : cols) header.push_back(c.header);

  // Best per column, compared at display precision so ties bold together.
  std::vector<std::string> best(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    double b = cols[c].value(reports[0]);
    for (const auto& r : reports) {
      const double v = cols[c].value(r);
      b = cols[c].lower_is_better ? std::min(b, v) : std::max(b, v);
    }
    best[c] = Fixed4(b);
  }

  std::string out;
  if (options.format == TableFormat::kCsv) {
    out += CsvLine(header);
    for (const auto& r : reports) {
      std::vector<std::string> row = {LlmCell(r), PromptTypeCell(r)};
      for (const auto& c : cols) row.push_back(Fixed4(c.value(r)));
      out += CsvLine(row);
    }
    return out;
  }

  auto md_row = [](const std::vector<std::string>& cells) {
    std::string line = "|";
    for (const auto& cell : cells) line += " " + cell + " |";
    return line + "\n";
  };
  out += md_row(header);
  out += "|";
  for (std::size_t i = 0; i < header.size(); ++i) out += i < 2 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& r : reports) {
    std::vector<std::string> row = {LlmCell(r), PromptTypeCell(r)};
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto cell = Fixed4(cols[c].value(r));
      row.push_back(cell == best[c] ? "**" + cell + "**" : cell);
    }
    out += md_row(row);
  }
  return out;
}

Json ReportsSidecar(const std::vector<RunReport>& reports) {
  Json runs = Json::array();
  for (const auto& r : reports) runs.push_back(ToJson(r));
  return {{"runs", runs}};
}

std::vector<Violation> CheckTableConsistency(const std::vector<ConsistencyRow>& rows, double tolerance) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double expected = (row.cosine + row.hir) / 2.0;
    const double delta = std::abs(row.average - expected);
    if (!(delta <= tolerance)) out.push_back({i, row.label, expected, row.average, delta});
  }
  return out;
}

std::vector<ConsistencyRow> LoadConsistencyRows(const std::filesystem::path& csv_path) {
  const auto rows = ParseCsv(ReadFileToString(csv_path));
  if (rows.empty()) throw Error(ErrorCode::kParse, csv_path.string() + ": empty table");
  const auto& header = rows.front().fields;
  std::optional<std::size_t> cos, hir, avg;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = Normalize(header[i]);
    if (!cos && h.starts_with("cosine")) cos = i;
    if (!hir && h == "hir") hir = i;
    if (!avg && (h == "average" || h == "avg")) avg = i;
  }
  if (!cos || !hir || !avg) {
    throw Error(ErrorCode::kParse, csv_path.string() + ": header needs cosine, HIR and Average columns");
  }
  std::vector<ConsistencyRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() == 1 && Trim(f[0]).empty()) continue;
    auto field = [&](std::size_t i, const char* name) {
      auto v = i < f.size() ? ParseNumber(f[i]) : std::nullopt;
      if (!v) {
        throw Error(ErrorCode::kParse, csv_path.string() + ": line " +
                                           std::to_string(rows[r].line_number) + ": bad " + name);
      }
      return *v;
    };
    ConsistencyRow row;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, f.size()); ++i) {
      if (ParseNumber(f[i])) break;
      if (!row.label.empty()) row.label += " / ";
      row.label += f[i];
    }
    row.cosine = field(*cos, "cosine");
    row.hir = field(*hir, "HIR");
    row.average = field(*avg, "Average");
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace rephrase
