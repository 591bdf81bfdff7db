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

#include "annotation/study.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>
#include <unordered_set>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"

namespace rephrase {
namespace {

constexpr const char* kStudyFile = "study.json";
constexpr const char* kTasksFile = "tasks.json";
constexpr const char* kAssignmentsFile = "assignments.json";
constexpr const char* kJournalFile = "journal.jsonl";

Json ReadJsonFile(const std::filesystem::path& path) {
  try {
    return Json::parse(ReadFileToString(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

struct Candidate {
  std::string record_id;
  std::string original;
  std::string rephrased;
};

// Scored instances of a run, in generation-file order.
std::vector<Candidate> LoadCandidates(const std::filesystem::path& run_dir) {
  std::unordered_set<std::string> scored;
  for (const auto& line : ReadJsonLines(run_dir / "scores.jsonl")) {
    scored.insert(line.value.at("record_id").get<std::string>());
  }
  std::vector<Candidate> out;
  for (const auto& line : ReadJsonLines(run_dir / "generations.jsonl")) {
    const auto& j = line.value;
    auto id = j.at("record_id").get<std::string>();
    if (!scored.contains(id)) continue;
    out.push_back({std::move(id), j.at("hate_text").get<std::string>(),
                   j.at("rephrasing").get<std::string>()});
  }
  return out;
}

int RatingField(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw Error(ErrorCode::kValidation, std::string("missing field '") + field + "'");
  if (!it->is_number_integer()) {
    throw Error(ErrorCode::kValidation, std::string("field '") + field + "' must be an integer 1-5");
  }
  const auto v = it->get<long long>();
  if (v < kMinRating || v > kMaxRating) {
    throw Error(ErrorCode::kValidation,
                std::string("field '") + field + "' is " + std::to_string(v) + ", expected 1-5");
  }
  return static_cast<int>(v);
}

void ValidateRating(int v, const char* field) {
  if (v < kMinRating || v > kMaxRating) {
    throw Error(ErrorCode::kValidation,
                std::string("field '") + field + "' is " + std::to_string(v) + ", expected 1-5");
  }
}

}  // namespace

Json ToJson(const AnnotationTask& t) {
  return {{"item_id", t.item_id},
          {"original_text", t.original_text},
          {"rephrased_text", t.rephrased_text},
          {"display_index", t.display_index}};
}

Json ToJson(const AnnotationRecord& r) {
  return {{"annotator_id", r.annotator_id},
          {"item_id", r.item_id},
          {"hir_rating", r.hir_rating},
          {"hallucination_rating", r.hallucination_rating},
          {"relevance_rating", r.relevance_rating},
          {"submitted_at", r.submitted_at}};
}

AnnotationRecord AnnotationRecordFromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "annotation must be a JSON object");
  auto text = [&](const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
      throw Error(ErrorCode::kValidation, std::string("missing field '") + field + "'");
    }
    return it->get<std::string>();
  };
  AnnotationRecord r;
  r.annotator_id = text("annotator_id");
  r.item_id = text("item_id");
  r.hir_rating = RatingField(j, "hir_rating");
  r.hallucination_rating = RatingField(j, "hallucination_rating");
  r.relevance_rating = RatingField(j, "relevance_rating");
  if (auto it = j.find("submitted_at"); it != j.end() && it->is_string()) {
    r.submitted_at = it->get<std::string>();
  }
  return r;
}

Json ToJson(const StudyProgress& p) {
  Json annotators = Json::array();
  for (const auto& a : p.annotators) {
    annotators.push_back({{"annotator_id", a.annotator_id}, {"done", a.done}, {"total", a.total}});
  }
  return {{"annotators", annotators},
          {"records", p.records},
          {"expected", p.expected},
          {"complete", p.complete()}};
}

Json ToJson(const StudyResults& r) {
  Json systems = Json::array();
  for (const auto& s : r.systems) {
    systems.push_back({{"system_id", s.system_id},
                       {"n_records", s.n_records},
                       {"hir", s.hir},
                       {"hallucination", s.hallucination},
                       {"relevance", s.relevance}});
  }
  Json agreement = Json::object();
  for (const auto& [k, v] : r.agreement) agreement[k] = ToJson(v);
  return {{"systems", systems},
          {"agreement", agreement},
          {"records", r.records},
          {"expected", r.expected},
          {"complete", r.records == r.expected}};
}

void AppendJournal(const std::filesystem::path& journal, const AnnotationRecord& record) {
  const std::string line = ToJson(record).dump() + "\n";
  const int fd = ::open(journal.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIo, "cannot open " + journal.string() + ": " + std::strerror(errno));
  }
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw Error(ErrorCode::kIo, "cannot write " + journal.string() + ": " + std::strerror(err));
    }
    written += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw Error(ErrorCode::kIo, "cannot sync " + journal.string());
}

std::unique_ptr<Study> Study::Create(const StudyConfig& config, const std::filesystem::path& dir) {
  if (config.systems.empty()) throw Error(ErrorCode::kInvalidArgument, "a study needs at least one system");
  if (config.per_system == 0) throw Error(ErrorCode::kInvalidArgument, "per_system must be positive");
  if (config.annotators.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "agreement needs at least two annotators");
  }
  std::set<std::string> names;
  for (const auto& a : config.annotators) {
    if (a.empty() || !names.insert(a).second) {
      throw Error(ErrorCode::kInvalidArgument, "annotator ids must be unique and non-empty");
    }
  }
  names.clear();
  for (const auto& s : config.systems) {
    if (s.system_id.empty() || !names.insert(s.system_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "system ids must be unique and non-empty");
    }
  }
  if (std::filesystem::exists(dir) && !std::filesystem::is_empty(dir)) {
    throw Error(ErrorCode::kState, "study directory " + dir.string() + " already exists");
  }

  struct Item {
    std::string system_id;
    Candidate candidate;
  };
  std::vector<Item> items;
  for (const auto& system : config.systems) {
    auto candidates = LoadCandidates(system.run_dir);
    if (config.per_system > candidates.size()) {
      throw Error(ErrorCode::kValidation, "system '" + system.system_id + "' has " +
                                              std::to_string(candidates.size()) +
                                              " scored instances, fewer than per_system=" +
                                              std::to_string(config.per_system));
    }
    const auto seed = MixSeed(config.seed, Fnv1a64(system.system_id));
    for (auto i : SampleIndices(candidates.size(), config.per_system, seed)) {
      items.push_back({system.system_id, candidates[i]});
    }
  }

  SeededRng rng(MixSeed(config.seed, Fnv1a64("study-order")));
  rng.Shuffle(items);

  Json tasks = Json::array();
  Json assignments = Json::object();
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string id;
    do {
      char buf[24];
      std::snprintf(buf, sizeof buf, "item-%012llx",
                    static_cast<unsigned long long>(rng.Next() & 0xffffffffffffULL));
      id = buf;
    } while (!ids.insert(id).second);
    tasks.push_back(ToJson(AnnotationTask{id, items[i].candidate.original,
                                          items[i].candidate.rephrased, i}));
    assignments[id] = {{"system_id", items[i].system_id}, {"record_id", items[i].candidate.record_id}};
  }

  Json systems = Json::array();
  for (const auto& s : config.systems) {
    systems.push_back({{"system_id", s.system_id}, {"run_dir", s.run_dir.string()}});
  }
  const Json study = {{"format", "rephrase-study/1"},
                      {"seed", config.seed},
                      {"per_system", config.per_system},
                      {"annotators", config.annotators},
                      {"systems", systems},
                      {"n_tasks", items.size()},
                      {"created_at", UtcTimestamp()}};

  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / kStudyFile, study.dump(2) + "\n");
  WriteFileAtomic(dir / kTasksFile, tasks.dump(2) + "\n");
  WriteFileAtomic(dir / kAssignmentsFile, assignments.dump(2) + "\n");
  WriteFileAtomic(dir / kJournalFile, "");
  return Open(dir);
}

std::unique_ptr<Study> Study::Open(const std::filesystem::path& dir) {
  std::unique_ptr<Study> s(new Study());
  s->dir_ = dir;
  const Json study = ReadJsonFile(dir / kStudyFile);
  s->annotators_ = study.at("annotators").get<std::vector<std::string>>();
  for (const auto& sys : study.at("systems")) s->systems_.push_back(sys.at("system_id").get<std::string>());

  for (const auto& t : ReadJsonFile(dir / kTasksFile)) {
    AnnotationTask task{t.at("item_id").get<std::string>(), t.at("original_text").get<std::string>(),
                        t.at("rephrased_text").get<std::string>(),
                        t.at("display_index").get<std::size_t>()};
    s->item_index_[task.item_id] = s->tasks_.size();
    s->tasks_.push_back(std::move(task));
  }
  const Json assignments = ReadJsonFile(dir / kAssignmentsFile);
  for (const auto& [item, a] : assignments.items()) {
    s->item_system_[item] = a.at("system_id").get<std::string>();
  }
  for (const auto& t : s->tasks_) {
    if (!s->item_system_.contains(t.item_id)) {
      throw Error(ErrorCode::kValidation, "item " + t.item_id + " has no assignment");
    }
  }

  // Replay. A torn final line (crash mid-append) is ignored; damage anywhere
  // else is an error.
  const auto journal = dir / kJournalFile;
  if (std::filesystem::exists(journal)) {
    std::istringstream in(ReadFileToString(journal));
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      if (!Trim(line).empty()) lines.push_back(line);
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Json j;
      try {
        j = Json::parse(lines[i]);
      } catch (const Json::parse_error& e) {
        if (i + 1 == lines.size()) break;
        throw Error(ErrorCode::kParse, journal.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
      }
      auto record = AnnotationRecordFromJson(j);
      s->CheckAnnotator(record.annotator_id);
      if (!s->item_index_.contains(record.item_id)) {
        throw Error(ErrorCode::kValidation, journal.string() + ": unknown item " + record.item_id);
      }
      s->Apply(std::move(record));
    }
  }
  return s;
}

void Study::CheckAnnotator(const std::string& annotator_id) const {
  for (const auto& a : annotators_) {
    if (a == annotator_id) return;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown annotator '" + annotator_id + "'");
}

void Study::Apply(AnnotationRecord record) {
  auto key = std::make_pair(record.annotator_id, record.item_id);
  ratings_[std::move(key)] = std::move(record);
}

std::optional<AnnotationTask> Study::NextTask(const std::string& annotator_id) const {
  CheckAnnotator(annotator_id);
  std::lock_guard lock(mu_);
  for (const auto& t : tasks_) {
    if (!ratings_.contains({annotator_id, t.item_id})) return t;
  }
  return std::nullopt;
}

void Study::Submit(AnnotationRecord record) {
  CheckAnnotator(record.annotator_id);
  if (!item_index_.contains(record.item_id)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown item '" + record.item_id + "'");
  }
  ValidateRating(record.hir_rating, "hir_rating");
  ValidateRating(record.hallucination_rating, "hallucination_rating");
  ValidateRating(record.relevance_rating, "relevance_rating");
  if (record.submitted_at.empty()) record.submitted_at = UtcTimestamp();
  std::lock_guard lock(mu_);
  AppendJournal(dir_ / kJournalFile, record);
  Apply(std::move(record));
}

StudyProgress Study::Progress() const {
  std::lock_guard lock(mu_);
  StudyProgress p;
  p.expected = expected_records();
  p.records = ratings_.size();
  for (const auto& a : annotators_) {
    AnnotatorProgress ap{a, 0, tasks_.size()};
    for (const auto& t : tasks_) ap.done += ratings_.contains({a, t.item_id});
    p.annotators.push_back(ap);
  }
  return p;
}

StudyResults Study::Results(bool partial) const {
  std::lock_guard lock(mu_);
  StudyResults r;
  r.records = ratings_.size();
  r.expected = expected_records();
  if (!partial && r.records != r.expected) {
    throw Error(ErrorCode::kState, "study incomplete: " + std::to_string(r.records) + " of " +
                                       std::to_string(r.expected) + " annotations");
  }

  std::map<std::string, SystemMeans> means;
  for (const auto& [key, rec] : ratings_) {
    auto& m = means[item_system_.at(rec.item_id)];
    ++m.n_records;
    m.hir += rec.hir_rating;
    m.hallucination += rec.hallucination_rating;
    m.relevance += rec.relevance_rating;
  }
  for (const auto& id : systems_) {
    SystemMeans m = means[id];
    m.system_id = id;
    if (m.n_records) {
      const double n = static_cast<double>(m.n_records);
      m.hir /= n;
      m.hallucination /= n;
      m.relevance /= n;
    }
    r.systems.push_back(m);
  }

  // Agreement between the first two annotators over items both rated, in
  // display order.
  std::vector<int> ha, hb, la, lb, ra, rb;
  for (const auto& t : tasks_) {
    auto a = ratings_.find({annotators_[0], t.item_id});
    auto b = ratings_.find({annotators_[1], t.item_id});
    if (a == ratings_.end() || b == ratings_.end()) continue;
    ha.push_back(a->second.hir_rating);
    hb.push_back(b->second.hir_rating);
    la.push_back(a->second.hallucination_rating);
    lb.push_back(b->second.hallucination_rating);
    ra.push_back(a->second.relevance_rating);
    rb.push_back(b->second.relevance_rating);
  }
  if (!ha.empty()) {
    r.agreement["hir"] = CohenKappa(ha, hb);
    r.agreement["hallucination"] = CohenKappa(la, lb);
    r.agreement["relevance"] = CohenKappa(ra, rb);
    std::vector<int> pa, pb;
    for (const auto* v : {&ha, &la, &ra}) pa.insert(pa.end(), v->begin(), v->end());
    for (const auto* v : {&hb, &lb, &rb}) pb.insert(pb.end(), v->begin(), v->end());
    r.agreement["pooled"] = CohenKappa(pa, pb);
  }
  return r;
}

}  // namespace rephrase
