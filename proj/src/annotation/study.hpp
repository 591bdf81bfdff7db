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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "annotation/kappa.hpp"
#include "common/jsonl.hpp"

namespace rephrase {

struct StudySystem {
  std::string system_id;
  std::filesystem::path run_dir;
};

struct StudyConfig {
  std::vector<StudySystem> systems;
  std::size_t per_system = 30;
  std::vector<std::string> annotators = {"annotator-1", "annotator-2"};
  std::uint64_t seed = 0;
};

// What an annotator sees. Carries no system identity or run provenance.
struct AnnotationTask {
  std::string item_id;
  std::string original_text;
  std::string rephrased_text;
  std::size_t display_index = 0;
};

Json ToJson(const AnnotationTask& task);

struct AnnotationRecord {
  std::string annotator_id;
  std::string item_id;
  int hir_rating = 0;
  int hallucination_rating = 0;
  int relevance_rating = 0;
  std::string submitted_at;
};

Json ToJson(const AnnotationRecord& record);
// Throws kValidation naming the offending field.
AnnotationRecord AnnotationRecordFromJson(const Json& j);

struct AnnotatorProgress {
  std::string annotator_id;
  std::size_t done = 0;
  std::size_t total = 0;
};

struct StudyProgress {
  std::vector<AnnotatorProgress> annotators;
  std::size_t records = 0;
  std::size_t expected = 0;
  bool complete() const { return records == expected; }
};

Json ToJson(const StudyProgress& progress);

struct SystemMeans {
  std::string system_id;
  std::size_t n_records = 0;
  double hir = 0.0;
  double hallucination = 0.0;
  double relevance = 0.0;
};

struct StudyResults {
  std::vector<SystemMeans> systems;  // study order
  // "hir", "hallucination", "relevance" and "pooled"; empty when the first
  // two annotators share no rated item.
  std::map<std::string, AgreementResult> agreement;
  std::size_t records = 0;
  std::size_t expected = 0;
};

Json ToJson(const StudyResults& results);

// A blind study on disk:
//   study.json        configuration
//   tasks.json        the blind task list (what the API serves)
//   assignments.json  item_id -> system and record (server-side only)
//   journal.jsonl     append-only ratings, last record per (annotator, item) wins
class Study {
 public:
  // Samples per_system scored instances from each run, shuffles the union
  // into one order shared by all annotators and writes the study directory.
  static std::unique_ptr<Study> Create(const StudyConfig& config, const std::filesystem::path& dir);
  // Loads a study directory and replays its journal.
  static std::unique_ptr<Study> Open(const std::filesystem::path& dir);

  Study(const Study&) = delete;
  Study& operator=(const Study&) = delete;

  const std::vector<AnnotationTask>& tasks() const { return tasks_; }
  const std::vector<std::string>& annotators() const { return annotators_; }
  std::size_t expected_records() const { return tasks_.size() * annotators_.size(); }

  // Lowest-index task the annotator has not rated, or nullopt when done.
  std::optional<AnnotationTask> NextTask(const std::string& annotator_id) const;

  // Validates, appends to the journal (fsync) and only then updates state.
  void Submit(AnnotationRecord record);

  StudyProgress Progress() const;

  // Unblinds. Throws kState while incomplete unless partial is set.
  StudyResults Results(bool partial = false) const;

 private:
  Study() = default;
  void Apply(AnnotationRecord record);
  void CheckAnnotator(const std::string& annotator_id) const;

  std::filesystem::path dir_;
  std::vector<AnnotationTask> tasks_;
  std::vector<std::string> annotators_;
  std::map<std::string, std::size_t> item_index_;
  std::map<std::string, std::string> item_system_;  // hidden
  std::vector<std::string> systems_;

  mutable std::mutex mu_;
  // (annotator, item) -> latest record
  std::map<std::pair<std::string, std::string>, AnnotationRecord> ratings_;
};

// Appends records to an existing journal file, as the service would. Used to
// seed studies from files.
void AppendJournal(const std::filesystem::path& journal, const AnnotationRecord& record);

}  // namespace rephrase
