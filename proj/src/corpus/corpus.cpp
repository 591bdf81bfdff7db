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

#include "corpus/corpus.hpp"

#include <unordered_set>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"

namespace rephrase {
namespace {

constexpr const char* kCsvHeader[] = {"id", "hate_text", "reference_text", "hate_spans",
                                      "intensity"};

[[noreturn]] void RowError(std::size_t row, std::string_view field, std::string_view what) {
  throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ", field '" +
                                     std::string(field) + "': " + std::string(what));
}

std::vector<Span> SpansFromJson(const Json& j, std::size_t row) {
  if (!j.is_array()) RowError(row, "hate_spans", "expected a list of [start, end] pairs");
  std::vector<Span> spans;
  for (const auto& s : j) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() ||
        !s[1].is_number_unsigned()) {
      RowError(row, "hate_spans", "expected a list of [start, end] pairs");
    }
    spans.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>()});
  }
  return spans;
}

Json SpansToJson(const std::vector<Span>& spans) {
  Json out = Json::array();
  for (const auto& s : spans) out.push_back({s.start, s.end});
  return out;
}

std::string RequiredText(const Json& obj, const char* key, std::size_t row) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) RowError(row, key, "missing");
  if (!it->is_string()) RowError(row, key, "expected a string");
  return std::string(Trim(it->get<std::string>()));
}

CorpusRecord RecordFromJson(const Json& obj, std::size_t row) {
  if (!obj.is_object()) RowError(row, "<row>", "expected a JSON object");
  CorpusRecord r;
  r.id = RequiredText(obj, "id", row);
  r.hate_text = RequiredText(obj, "hate_text", row);
  r.reference_text = RequiredText(obj, "reference_text", row);
  if (auto it = obj.find("hate_spans"); it != obj.end() && !it->is_null()) {
    r.hate_spans = SpansFromJson(*it, row);
  }
  if (auto it = obj.find("intensity"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) RowError(row, "intensity", "expected a number");
    r.intensity = it->get<double>();
  }
  return r;
}

Json RecordToJson(const CorpusRecord& r) {
  Json j = {{"id", r.id}, {"hate_text", r.hate_text}, {"reference_text", r.reference_text}};
  if (r.hate_spans) j["hate_spans"] = SpansToJson(*r.hate_spans);
  if (r.intensity) j["intensity"] = *r.intensity;
  return j;
}

std::vector<std::pair<std::size_t, CorpusRecord>> ParseJsonlRows(const std::filesystem::path& path) {
  std::vector<std::pair<std::size_t, CorpusRecord>> out;
  for (auto& line : ReadJsonLines(path)) {
    out.emplace_back(line.line_number, RecordFromJson(line.value, line.line_number));
  }
  return out;
}

std::vector<std::pair<std::size_t, CorpusRecord>> ParseCsvRows(const std::filesystem::path& path) {
  const auto rows = ParseCsv(ReadFileToString(path));
  std::vector<std::pair<std::size_t, CorpusRecord>> out;
  if (rows.empty()) return out;

  std::vector<int> column(std::size(kCsvHeader), -1);
  const auto& header = rows.front().fields;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = Trim(header[i]);
    for (std::size_t k = 0; k < std::size(kCsvHeader); ++k) {
      if (name == kCsvHeader[k]) column[k] = static_cast<int>(i);
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (column[k] < 0) RowError(1, kCsvHeader[k], "required column missing from header");
  }

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r].fields;
    const std::size_t row_no = rows[r].line_number;
    Json obj = Json::object();
    for (std::size_t k = 0; k < std::size(kCsvHeader); ++k) {
      if (column[k] < 0) continue;
      const auto idx = static_cast<std::size_t>(column[k]);
      if (idx >= fields.size()) {
        if (k < 3) RowError(row_no, kCsvHeader[k], "missing");
        continue;
      }
      const std::string& cell = fields[idx];
      if (k < 3) {
        obj[kCsvHeader[k]] = cell;
      } else if (!Trim(cell).empty()) {
        try {
          obj[kCsvHeader[k]] = Json::parse(cell);
        } catch (const Json::parse_error&) {
          RowError(row_no, kCsvHeader[k], "not valid JSON");
        }
      }
    }
    out.emplace_back(row_no, RecordFromJson(obj, row_no));
  }
  return out;
}

}  // namespace

const CorpusRecord* Corpus::Find(std::string_view id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

CorpusFormat CorpusFormatForPath(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

std::vector<std::string> ValidateRecord(const CorpusRecord& record) {
  std::vector<std::string> violations;
  if (Trim(record.id).empty()) violations.emplace_back("empty id");
  if (Trim(record.hate_text).empty()) violations.emplace_back("empty hate text");
  if (Trim(record.reference_text).empty()) violations.emplace_back("empty reference");
  if (record.hate_spans) {
    const std::size_t len = CodepointLength(record.hate_text);
    for (const auto& s : *record.hate_spans) {
      if (s.start >= s.end) {
        violations.push_back("empty or inverted span [" + std::to_string(s.start) + ", " +
                             std::to_string(s.end) + ")");
      } else if (s.end > len) {
        violations.push_back("span out of bounds [" + std::to_string(s.start) + ", " +
                             std::to_string(s.end) + ") for text of length " +
                             std::to_string(len));
      }
    }
  }
  return violations;
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format) {
  auto rows = format == CorpusFormat::kCsv ? ParseCsvRows(path) : ParseJsonlRows(path);
  if (rows.empty()) throw Error(ErrorCode::kValidation, path.string() + ": no records");

  Corpus corpus;
  corpus.source_path = path.string();
  std::unordered_set<std::string> seen;
  for (auto& [row, record] : rows) {
    if (auto v = ValidateRecord(record); !v.empty()) {
      std::string msg = "row " + std::to_string(row) + " (id '" + record.id + "'): ";
      for (std::size_t i = 0; i < v.size(); ++i) msg += (i ? "; " : "") + v[i];
      throw Error(ErrorCode::kValidation, msg);
    }
    if (!seen.insert(record.id).second) {
      throw Error(ErrorCode::kValidation,
                  "row " + std::to_string(row) + ", field 'id': duplicate id '" + record.id + "'");
    }
    corpus.records.push_back(std::move(record));
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  return LoadCorpus(path, CorpusFormatForPath(path));
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  if (format == CorpusFormat::kJsonl) {
    std::vector<Json> rows;
    rows.reserve(corpus.size());
    for (const auto& r : corpus.records) rows.push_back(RecordToJson(r));
    WriteJsonLines(path, rows);
    return;
  }
  std::string out = CsvLine(std::vector<std::string>(std::begin(kCsvHeader), std::end(kCsvHeader)));
  for (const auto& r : corpus.records) {
    out += CsvLine({r.id, r.hate_text, r.reference_text,
                    r.hate_spans ? SpansToJson(*r.hate_spans).dump() : "",
                    r.intensity ? Json(*r.intensity).dump() : ""});
  }
  WriteFileAtomic(path, out);
}

Corpus SampleSubset(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "sample size must be positive");
  if (n > corpus.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sample size " + std::to_string(n) +
                                                 " exceeds corpus size " +
                                                 std::to_string(corpus.size()));
  }
  Corpus out;
  out.source_path = corpus.source_path;
  for (std::size_t i : SampleIndices(corpus.size(), n, seed)) out.records.push_back(corpus.records[i]);
  return out;
}

}  // namespace rephrase
