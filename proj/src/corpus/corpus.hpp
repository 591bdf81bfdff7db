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

namespace rephrase {

// Half-open code-point range [start, end) into a record's hate_text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

// One row of the parallel corpus: a hateful post and its human rephrasing.
struct CorpusRecord {
  std::string id;
  std::string hate_text;
  std::string reference_text;
  std::optional<std::vector<Span>> hate_spans;
  // Carried as provided by the source dataset; no metric reads it.
  std::optional<double> intensity;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  std::string source_path;

  std::size_t size() const { return records.size(); }
  const CorpusRecord* Find(std::string_view id) const;
};

enum class CorpusFormat { kJsonl, kCsv };

// Picks the format from the file extension (".csv" or anything else = jsonl).
CorpusFormat CorpusFormatForPath(const std::filesystem::path& path);

// Loads every record in file order. Texts are trimmed; nothing else is
// normalised. Throws on unreadable files, malformed rows (naming the row and
// field), invariant violations, duplicate ids, and empty files.
Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format);
Corpus LoadCorpus(const std::filesystem::path& path);

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

// Every invariant violation of a single record; empty means valid.
std::vector<std::string> ValidateRecord(const CorpusRecord& record);

// n records drawn uniformly without replacement, kept in corpus order.
// Throws kInvalidArgument when n exceeds the corpus size or is zero.
Corpus SampleSubset(const Corpus& corpus, std::size_t n, std::uint64_t seed);

}  // namespace rephrase
