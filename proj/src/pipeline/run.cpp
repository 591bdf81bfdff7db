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

#include "pipeline/run.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/text.hpp"
#include "corpus/corpus.hpp"
#include "generation/cache.hpp"
#include "generation/generator.hpp"
#include "scoring/provider_factory.hpp"

namespace rephrase {
namespace {

void ParallelFor(std::size_t n, int concurrency, const std::function<void(std::size_t)>& fn) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, concurrency)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

// One record's progress through the pipeline.
struct Slot {
  std::optional<GenerationResult> generation;
  std::optional<InstanceScores> scores;
  std::optional<InstanceError> error;
};

InstanceError ToInstanceError(const std::string& record_id, std::string stage,
                              const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return {record_id, std::move(stage), err ? err->code() : ErrorCode::kInternal, e.what()};
}

void PrepareOutputDir(const std::filesystem::path& dir, bool resume) {
  if (dir.empty()) throw Error(ErrorCode::kInvalidArgument, "output directory is required");
  if (std::filesystem::exists(dir)) {
    if (!std::filesystem::is_directory(dir)) {
      throw Error(ErrorCode::kInvalidArgument, dir.string() + " is not a directory");
    }
    if (!resume && !std::filesystem::is_empty(dir)) {
      throw Error(ErrorCode::kState,
                  "output directory " + dir.string() + " already exists; pass resume to reuse it");
    }
  }
  std::filesystem::create_directories(dir);
}

struct ManifestBase {
  std::string system_id;
  std::string model_id;
  Json prompt_kind;  // cli name or null
  std::string backend_id;
  Json corpus;
  Json generation;
  Json sample;
  Json template_versions;
};

void ScoreSlots(const Corpus& corpus, std::vector<Slot>& slots, Providers& providers,
                const ScoringConfig& config, int concurrency) {
  ParallelFor(slots.size(), concurrency, [&](std::size_t i) {
    Slot& slot = slots[i];
    if (!slot.generation) return;
    const CorpusRecord* record = corpus.Find(slot.generation->record_id);
    auto result = ScoreInstance(*record, slot.generation->rephrasing, providers, config);
    if (auto* s = std::get_if<InstanceScores>(&result)) {
      slot.scores = std::move(*s);
    } else {
      slot.error = std::get<InstanceError>(std::move(result));
    }
  });
}

RunSummary WriteArtifacts(const RunPaths& paths, const ManifestBase& base,
                          const std::vector<Slot>& slots, const Providers& providers,
                          const ScoringConfig& scoring) {
  std::vector<Json> gens, scores, errors;
  RunSummary summary;
  summary.dir = paths.dir;
  summary.coverage.total = slots.size();
  bool all_unreachable = true;
  for (const auto& slot : slots) {
    if (slot.generation) gens.push_back(ToJson(*slot.generation));
    if (slot.scores) scores.push_back(ToJson(*slot.scores));
    if (slot.error) {
      errors.push_back(ToJson(*slot.error));
      all_unreachable = all_unreachable && slot.error->code == ErrorCode::kUnreachable;
      if (slot.error->stage == "generation") {
        ++summary.coverage.generation_errors;
      } else {
        ++summary.coverage.scoring_errors;
      }
    }
  }
  summary.coverage.generated = gens.size();
  summary.coverage.scored = scores.size();

  WriteJsonLines(paths.generations(), gens);
  WriteJsonLines(paths.scores(), scores);
  WriteJsonLines(paths.errors(), errors);

  const auto gen_hash = Sha256HexOfFile(paths.generations());
  const auto scores_hash = Sha256HexOfFile(paths.scores());
  const auto& c = summary.coverage;

  Json providers_json = Json::object();
  for (const auto& [name, id] : providers.Identities()) providers_json[name] = id;

  Json manifest = {
      {"format", "rephrase-run/1"},
      {"system_id", base.system_id},
      {"model_id", base.model_id},
      {"prompt_kind", base.prompt_kind},
      {"backend_id", base.backend_id},
      {"created_at", UtcTimestamp()},
      {"corpus", base.corpus},
      {"generation", base.generation},
      {"sample", base.sample},
      {"scoring",
       {{"hybrid_threshold", scoring.hybrid_threshold}, {"bleu_max_order", scoring.bleu_max_order}}},
      {"template_versions", base.template_versions},
      {"providers", providers_json},
      {"coverage",
       {{"total", c.total},
        {"generated", c.generated},
        {"generation_errors", c.generation_errors},
        {"scored", c.scored},
        {"scoring_errors", c.scoring_errors}}},
      {"files",
       {{"generations.jsonl", gen_hash},
        {"scores.jsonl", scores_hash},
        {"errors.jsonl", Sha256HexOfFile(paths.errors())}}},
      {"artifact_hash", Sha256Hex(gen_hash + scores_hash)},
  };
  WriteFileAtomic(paths.manifest(), manifest.dump(2) + "\n");

  if (errors.empty()) {
    summary.status = RunStatus::kComplete;
  } else if (c.scored == 0 && all_unreachable) {
    summary.status = RunStatus::kUnreachable;
  } else {
    summary.status = RunStatus::kPartial;
  }
  return summary;
}

Json CorpusInfo(const std::filesystem::path& path, const Corpus& corpus) {
  return {{"path", path.string()}, {"records", corpus.size()}, {"sha256", Sha256HexOfFile(path)}};
}

// from_cache as recorded when each line was first written, so that a resumed
// run reproduces the artifact byte for byte.
std::unordered_map<std::string, bool> PreviousFromCache(const RunPaths& paths) {
  std::unordered_map<std::string, bool> out;
  if (!std::filesystem::exists(paths.generations())) return out;
  for (const auto& line : ReadJsonLines(paths.generations())) {
    out[line.value.value("record_id", std::string())] = line.value.value("from_cache", false);
  }
  return out;
}

}  // namespace

std::string_view RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kComplete: return "complete";
    case RunStatus::kPartial: return "partial";
    case RunStatus::kUnreachable: return "unreachable";
  }
  return "partial";
}

Json ToJson(const RunSummary& s) {
  return {{"dir", s.dir.string()},
          {"status", RunStatusName(s.status)},
          {"total", s.coverage.total},
          {"generated", s.coverage.generated},
          {"generation_errors", s.coverage.generation_errors},
          {"scored", s.coverage.scored},
          {"scoring_errors", s.coverage.scoring_errors},
          {"backend_calls", s.backend_calls},
          {"cache_hits", s.cache_hits}};
}

RunSummary RunPipeline(const RunConfig& config, const TemplateStore& templates, Backend& backend) {
  ValidateGenerationConfig(config.generation);
  ValidateScoringConfig(config.scoring.config);
  if (config.max_concurrency < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_concurrency must be >= 1");
  }

  Corpus corpus = LoadCorpus(config.corpus_path);
  if (config.sample_size) corpus = SampleSubset(corpus, *config.sample_size, config.seed);

  const RunPaths paths{config.out_dir};
  PrepareOutputDir(paths.dir, config.resume);
  const auto previous = config.resume ? PreviousFromCache(paths)
                                      : std::unordered_map<std::string, bool>{};

  GenerationCache cache(paths.cache());
  Providers providers =
      MakeProviders(config.scoring.providers, corpus, config.scoring.providers_dir);

  const auto calls_before = backend.call_count();
  std::atomic<std::size_t> hits{0};
  std::vector<Slot> slots(corpus.size());
  ParallelFor(corpus.size(), config.max_concurrency, [&](std::size_t i) {
    const CorpusRecord& record = corpus.records[i];
    try {
      auto g = GenerateCached(record, config.prompt_kind, config.generation, templates, backend, cache);
      if (g.from_cache) hits.fetch_add(1);
      if (auto it = previous.find(record.id); it != previous.end()) g.from_cache = it->second;
      slots[i].generation = std::move(g);
    } catch (const std::exception& e) {
      slots[i].error = ToInstanceError(record.id, "generation", e);
    }
  });
  ScoreSlots(corpus, slots, providers, config.scoring.config, config.max_concurrency);
  cache.Compact();

  ManifestBase base;
  base.model_id = config.generation.model_id;
  base.system_id = config.system_id.empty()
                       ? config.generation.model_id + "/" + std::string(CliName(config.prompt_kind))
                       : config.system_id;
  base.prompt_kind = std::string(CliName(config.prompt_kind));
  base.backend_id = config.generation.backend_id;
  base.corpus = CorpusInfo(config.corpus_path, corpus);
  base.generation = {
      {"temperature", config.generation.temperature},
      {"max_tokens", config.generation.max_tokens},
      {"max_retries", config.generation.max_retries},
      {"request_timeout_ms", config.generation.request_timeout.count()},
      {"seed", config.generation.seed ? Json(*config.generation.seed) : Json(nullptr)},
  };
  base.sample = config.sample_size
                    ? Json{{"n", *config.sample_size}, {"seed", config.seed}}
                    : Json(nullptr);
  base.template_versions = Json::object();
  for (auto k : kAllPromptKinds) base.template_versions[std::string(CliName(k))] = templates.Version(k);

  RunSummary summary = WriteArtifacts(paths, base, slots, providers, config.scoring.config);
  summary.backend_calls = backend.call_count() - calls_before;
  summary.cache_hits = hits.load();
  return summary;
}

RunSummary ImportExternalGenerations(const ImportConfig& config) {
  ValidateScoringConfig(config.scoring.config);
  if (config.system_id.empty()) throw Error(ErrorCode::kInvalidArgument, "system id is required");
  const Corpus corpus = LoadCorpus(config.corpus_path);

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < corpus.size(); ++i) position[corpus.records[i].id] = i;

  std::vector<std::optional<GenerationResult>> by_position(corpus.size());
  std::unordered_set<std::string> seen;
  for (const auto& line : ReadJsonLines(config.generations_path)) {
    const auto where = config.generations_path.string() + ": line " + std::to_string(line.line_number);
    const auto& j = line.value;
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw Error(ErrorCode::kParse, where + ": missing id");
    }
    const auto id = j["id"].get<std::string>();
    auto pos = position.find(id);
    if (pos == position.end()) throw Error(ErrorCode::kValidation, where + ": unknown record id '" + id + "'");
    if (!seen.insert(id).second) throw Error(ErrorCode::kValidation, where + ": duplicate id '" + id + "'");
    if (!j.contains("text") || !j["text"].is_string() || Trim(j["text"].get<std::string>()).empty()) {
      throw Error(ErrorCode::kValidation, where + ": missing text for id '" + id + "'");
    }
    GenerationResult g;
    g.record_id = id;
    g.model_id = config.system_id;
    g.backend_id = std::string(kExternalBackend);
    g.hate_text = corpus.records[pos->second].hate_text;
    g.raw_output = j["text"].get<std::string>();
    g.rephrasing = g.raw_output;  // imports are scored verbatim
    by_position[pos->second] = std::move(g);
  }
  if (seen.empty()) throw Error(ErrorCode::kValidation, config.generations_path.string() + ": no records");

  const RunPaths paths{config.out_dir};
  PrepareOutputDir(paths.dir, false);

  std::vector<Slot> slots;
  for (auto& g : by_position) {
    if (g) slots.push_back({std::move(g), std::nullopt, std::nullopt});
  }
  Providers providers = MakeProviders(config.scoring.providers, corpus, config.scoring.providers_dir);
  ScoreSlots(corpus, slots, providers, config.scoring.config, config.max_concurrency);

  ManifestBase base;
  base.system_id = config.system_id;
  base.model_id = config.system_id;
  base.prompt_kind = nullptr;
  base.backend_id = std::string(kExternalBackend);
  base.corpus = CorpusInfo(config.corpus_path, corpus);
  base.generation = nullptr;
  base.sample = nullptr;
  base.template_versions = Json::object();
  base.corpus["imported_from"] = config.generations_path.string();
  return WriteArtifacts(paths, base, slots, providers, config.scoring.config);
}

RunSummary RescoreRun(const std::filesystem::path& run_dir, const ScoringSetup& scoring,
                      int max_concurrency) {
  ValidateScoringConfig(scoring.config);
  const RunPaths paths{run_dir};
  Json manifest;
  try {
    manifest = Json::parse(ReadFileToString(paths.manifest()));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, paths.manifest().string() + ": " + e.what());
  }
  const auto corpus_path = std::filesystem::path(manifest.at("corpus").at("path").get<std::string>());
  Corpus corpus = LoadCorpus(corpus_path);

  std::vector<Slot> slots;
  for (const auto& line : ReadJsonLines(paths.generations())) {
    auto g = GenerationResultFromJson(line.value);
    if (!corpus.Find(g.record_id)) {
      throw Error(ErrorCode::kValidation, "generation for unknown record '" + g.record_id + "'");
    }
    slots.push_back({std::move(g), std::nullopt, std::nullopt});
  }
  if (std::filesystem::exists(paths.errors())) {
    for (const auto& line : ReadJsonLines(paths.errors())) {
      auto e = InstanceErrorFromJson(line.value);
      if (e.stage == "generation") slots.push_back({std::nullopt, std::nullopt, std::move(e)});
    }
  }
  Providers providers = MakeProviders(scoring.providers, corpus, scoring.providers_dir);
  ScoreSlots(corpus, slots, providers, scoring.config, max_concurrency);

  // Restore corpus order (generation errors were appended at the end).
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < corpus.size(); ++i) position[corpus.records[i].id] = i;
  auto id_of = [](const Slot& s) { return s.generation ? s.generation->record_id : s.error->record_id; };
  std::stable_sort(slots.begin(), slots.end(), [&](const Slot& a, const Slot& b) {
    return position[id_of(a)] < position[id_of(b)];
  });

  ManifestBase base;
  base.system_id = manifest.value("system_id", std::string());
  base.model_id = manifest.value("model_id", std::string());
  base.prompt_kind = manifest.value("prompt_kind", Json(nullptr));
  base.backend_id = manifest.value("backend_id", std::string());
  base.corpus = manifest.at("corpus");
  base.generation = manifest.value("generation", Json(nullptr));
  base.sample = manifest.value("sample", Json(nullptr));
  base.template_versions = manifest.value("template_versions", Json::object());
  return WriteArtifacts(paths, base, slots, providers, scoring.config);
}

FailureReport FlagFailures(const std::filesystem::path& scores_file) {
  FailureReport report;
  for (const auto& line : ReadJsonLines(scores_file)) {
    const auto s = InstanceScoresFromJson(line.value);
    ++report.scored;
    if (s.failed) report.failed_ids.push_back(s.record_id);
  }
  report.rate = report.scored ? static_cast<double>(report.failed_ids.size()) /
                                    static_cast<double>(report.scored)
                              : 0.0;
  return report;
}

}  // namespace rephrase
