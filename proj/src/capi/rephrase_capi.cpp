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

#include "rephrase/rephrase.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <set>
#include <string>
#include <thread>

#include "annotation/kappa.hpp"
#include "annotation/server.hpp"
#include "annotation/study.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "common/text.hpp"
#include "corpus/corpus.hpp"
#include "generation/chat_backend.hpp"
#include "generation/extract.hpp"
#include "generation/mock_backend.hpp"
#include "pipeline/run.hpp"
#include "prompts/prompts.hpp"
#include "report/report.hpp"

#ifndef RP_VERSION
#define RP_VERSION "0.0.0"
#endif

using rephrase::Error;
using rephrase::ErrorCode;
using rephrase::Json;

struct rp_context {
  rephrase::TemplateStore templates;
};

struct rp_corpus {
  rephrase::Corpus corpus;
};

struct rp_server {
  std::unique_ptr<rephrase::Study> study;
  std::unique_ptr<rephrase::AnnotationServer> server;
};

namespace {

thread_local std::string g_last_error;

rp_status StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return RP_INVALID_ARGUMENT;
    case ErrorCode::kIo: return RP_IO_ERROR;
    case ErrorCode::kParse: return RP_PARSE_ERROR;
    case ErrorCode::kValidation: return RP_VALIDATION_ERROR;
    case ErrorCode::kBackend: return RP_BACKEND_ERROR;
    case ErrorCode::kUnreachable: return RP_UNREACHABLE;
    case ErrorCode::kState: return RP_STATE_ERROR;
    case ErrorCode::kInternal: return RP_INTERNAL_ERROR;
  }
  return RP_INTERNAL_ERROR;
}

template <typename F>
rp_status Call(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const Error& e) {
    g_last_error = e.what();
    return StatusFor(e.code());
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return RP_PARSE_ERROR;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return RP_IO_ERROR;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RP_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RP_INTERNAL_ERROR;
  }
}

void Require(const void* p, const char* name) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL");
}

char* Dup(std::string_view s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void SetOut(char** out, std::string_view s) {
  if (out) *out = Dup(s);
}

Json ParseConfig(const char* text, const char* what) {
  Require(text, what);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be a JSON object");
  return j;
}

void CheckKeys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.contains(k)) throw Error(ErrorCode::kInvalidArgument, "unknown key '" + k + "' in " + where);
  }
}

template <typename T>
T Get(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad value for '") + key + "'");
  }
}

std::string RequireString(const Json& j, const char* key, const std::string& where) {
  auto s = Get<std::string>(j, key, "");
  if (s.empty()) throw Error(ErrorCode::kInvalidArgument, std::string("'") + key + "' is required in " + where);
  return s;
}

int Concurrency(const Json& j) {
  const int n = Get<int>(j, "max_concurrency", 4);
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "max_concurrency must be >= 1");
  return n;
}

rephrase::ScoringSetup ParseScoring(const Json& j) {
  rephrase::ScoringSetup s;
  if (j.is_null()) return s;
  CheckKeys(j, {"hybrid_threshold", "bleu_max_order", "providers", "providers_file"}, "scoring");
  s.config.hybrid_threshold = Get<double>(j, "hybrid_threshold", s.config.hybrid_threshold);
  s.config.bleu_max_order = Get<int>(j, "bleu_max_order", s.config.bleu_max_order);
  if (auto file = Get<std::string>(j, "providers_file", ""); !file.empty()) {
    try {
      s.providers = Json::parse(rephrase::ReadFileToString(file));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kParse, file + ": " + e.what());
    }
    s.providers_dir = std::filesystem::path(file).parent_path();
  }
  if (auto it = j.find("providers"); it != j.end() && !it->is_null()) s.providers = *it;
  return s;
}

struct BackendSetup {
  rephrase::GenerationConfig config;
  std::unique_ptr<rephrase::Backend> backend;
};

BackendSetup ParseBackend(const Json& j) {
  CheckKeys(j, {"backend", "model", "temperature", "max_tokens", "timeout_ms", "max_retries", "seed",
                "base_url", "api_key", "mock_rules"},
            "generation");
  BackendSetup out;
  auto& c = out.config;
  std::string backend = Get<std::string>(j, "backend", "mock");
  if (backend == "openai") backend = "http";
  c.backend_id = backend;
  c.model_id = Get<std::string>(j, "model", backend == "mock" ? "mock" : "");
  c.temperature = Get<double>(j, "temperature", c.temperature);
  c.max_tokens = Get<int>(j, "max_tokens", c.max_tokens);
  c.request_timeout = std::chrono::milliseconds(Get<std::int64_t>(j, "timeout_ms", c.request_timeout.count()));
  c.max_retries = Get<int>(j, "max_retries", c.max_retries);
  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) c.seed = it->get<std::int64_t>();
  rephrase::ValidateGenerationConfig(c);

  if (backend == "mock") {
    const auto rules = Get<std::string>(j, "mock_rules", "");
    out.backend = std::make_unique<rephrase::MockBackend>(
        rules.empty() ? rephrase::MockBackend::Options{} : rephrase::MockBackend::LoadOptions(rules));
  } else if (backend == "http") {
    rephrase::ChatBackendOptions opts;
    opts.base_url = Get<std::string>(j, "base_url", opts.base_url);
    opts.api_key = Get<std::string>(j, "api_key", "");
    out.backend = std::make_unique<rephrase::HttpChatBackend>(opts);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + backend + "' (expected mock or http)");
  }
  return out;
}

rp_status SummaryStatus(const rephrase::RunSummary& s) {
  switch (s.status) {
    case rephrase::RunStatus::kComplete: return RP_OK;
    case rephrase::RunStatus::kPartial: return RP_PARTIAL;
    case rephrase::RunStatus::kUnreachable: return RP_RUN_UNREACHABLE;
  }
  return RP_PARTIAL;
}

rephrase::PromptKind PromptKindArg(const std::string& name) {
  auto kind = rephrase::ParsePromptKind(name);
  if (!kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown prompt kind '" + name + "' (expected task, definition, demonstrations or cot)");
  }
  return *kind;
}

rephrase::ProbeKind ProbeKindArg(const std::string& name) {
  auto kind = rephrase::ParseProbeKind(name);
  if (!kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown probe '" + name + "' (expected detection, spans or rephrasing)");
  }
  return *kind;
}

Json RecordJson(const rephrase::CorpusRecord& r) {
  Json j = {{"id", r.id}, {"hate_text", r.hate_text}, {"reference_text", r.reference_text}};
  if (r.hate_spans) {
    Json spans = Json::array();
    for (const auto& s : *r.hate_spans) spans.push_back({s.start, s.end});
    j["hate_spans"] = spans;
  }
  if (r.intensity) j["intensity"] = *r.intensity;
  return j;
}

// item_id -> ratings per metric, from one annotator's file.
std::map<std::string, std::map<std::string, int>> LoadRatings(const std::filesystem::path& path) {
  static const char* kMetrics[] = {"hir_rating", "hallucination_rating", "relevance_rating", "rating"};
  std::map<std::string, std::map<std::string, int>> out;
  for (const auto& line : rephrase::ReadJsonLines(path)) {
    const auto& j = line.value;
    const auto where = path.string() + ": line " + std::to_string(line.line_number);
    if (!j.is_object() || !j.contains("item_id") || !j["item_id"].is_string()) {
      throw Error(ErrorCode::kParse, where + ": missing item_id");
    }
    auto& row = out[j["item_id"].get<std::string>()];
    row.clear();  // last record wins
    for (const char* m : kMetrics) {
      if (auto it = j.find(m); it != j.end()) {
        if (!it->is_number_integer()) throw Error(ErrorCode::kValidation, where + ": '" + m + "' must be an integer");
        row[m] = it->get<int>();
      }
    }
    if (row.empty()) throw Error(ErrorCode::kParse, where + ": no ratings");
  }
  return out;
}

}  // namespace

extern "C" {

const char* rp_version(void) { return RP_VERSION; }

const char* rp_status_name(rp_status status) {
  switch (status) {
    case RP_OK: return "ok";
    case RP_INVALID_ARGUMENT: return "invalid_argument";
    case RP_IO_ERROR: return "io";
    case RP_PARSE_ERROR: return "parse";
    case RP_VALIDATION_ERROR: return "validation";
    case RP_BACKEND_ERROR: return "backend";
    case RP_UNREACHABLE: return "unreachable";
    case RP_STATE_ERROR: return "state";
    case RP_INTERNAL_ERROR: return "internal";
    case RP_PARTIAL: return "partial";
    case RP_RUN_UNREACHABLE: return "run_unreachable";
  }
  return "unknown";
}

const char* rp_last_error(void) { return g_last_error.c_str(); }

void rp_string_free(char* s) { std::free(s); }

rp_status rp_context_create(const char* templates_dir, rp_context** out) {
  return Call([&] {
    Require(out, "out");
    *out = nullptr;
    auto store = templates_dir && *templates_dir ? rephrase::TemplateStore::FromDirectory(templates_dir)
                                                 : rephrase::TemplateStore::Builtin();
    *out = new rp_context{std::move(store)};
    return RP_OK;
  });
}

void rp_context_free(rp_context* ctx) { delete ctx; }

rp_status rp_corpus_load(const char* path, rp_corpus** out) {
  return Call([&] {
    Require(path, "path");
    Require(out, "out");
    *out = nullptr;
    *out = new rp_corpus{rephrase::LoadCorpus(path)};
    return RP_OK;
  });
}

size_t rp_corpus_size(const rp_corpus* corpus) { return corpus ? corpus->corpus.size() : 0; }

rp_status rp_corpus_record(const rp_corpus* corpus, size_t index, char** out_json) {
  return Call([&] {
    Require(corpus, "corpus");
    Require(out_json, "out_json");
    if (index >= corpus->corpus.size()) throw Error(ErrorCode::kInvalidArgument, "record index out of range");
    SetOut(out_json, RecordJson(corpus->corpus.records[index]).dump());
    return RP_OK;
  });
}

rp_status rp_corpus_sample(const rp_corpus* corpus, size_t n, uint64_t seed, rp_corpus** out) {
  return Call([&] {
    Require(corpus, "corpus");
    Require(out, "out");
    *out = nullptr;
    *out = new rp_corpus{rephrase::SampleSubset(corpus->corpus, n, seed)};
    return RP_OK;
  });
}

rp_status rp_corpus_write(const rp_corpus* corpus, const char* path, const char* format) {
  return Call([&] {
    Require(corpus, "corpus");
    Require(path, "path");
    rephrase::CorpusFormat f = rephrase::CorpusFormatForPath(path);
    if (format && *format) {
      const std::string name = format;
      if (name == "jsonl") {
        f = rephrase::CorpusFormat::kJsonl;
      } else if (name == "csv") {
        f = rephrase::CorpusFormat::kCsv;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown corpus format '" + name + "'");
      }
    }
    rephrase::WriteCorpus(corpus->corpus, path, f);
    return RP_OK;
  });
}

void rp_corpus_free(rp_corpus* corpus) { delete corpus; }

rp_status rp_prompts_list(const rp_context* ctx, char** out_json) {
  return Call([&] {
    Require(ctx, "ctx");
    Require(out_json, "out_json");
    Json list = Json::array();
    for (const auto& entry : ctx->templates.List()) {
      list.push_back({{"kind", entry.kind}, {"version", entry.version}, {"length", entry.length}});
    }
    SetOut(out_json, list.dump());
    return RP_OK;
  });
}

rp_status rp_prompt_render(const rp_context* ctx, const char* kind, const char* text, char** out_prompt) {
  return Call([&] {
    Require(ctx, "ctx");
    Require(kind, "kind");
    Require(text, "text");
    Require(out_prompt, "out_prompt");
    SetOut(out_prompt, ctx->templates.Render(PromptKindArg(kind), text).text);
    return RP_OK;
  });
}

rp_status rp_probe_render(const rp_context* ctx, const char* probe, const char* text, char** out_prompt) {
  return Call([&] {
    Require(ctx, "ctx");
    Require(probe, "probe");
    Require(text, "text");
    Require(out_prompt, "out_prompt");
    SetOut(out_prompt, ctx->templates.RenderProbe(ProbeKindArg(probe), text).text);
    return RP_OK;
  });
}

rp_status rp_probe_run(const rp_context* ctx, const char* backend_json, const char* text, char** out_json) {
  return Call([&] {
    Require(ctx, "ctx");
    Require(text, "text");
    Require(out_json, "out_json");
    auto setup = ParseBackend(ParseConfig(backend_json ? backend_json : "{}", "backend config"));
    Json responses = Json::array();
    for (auto probe : rephrase::kAllProbeKinds) {
      const auto prompt = ctx->templates.RenderProbe(probe, text);
      const std::string record_id = "probe:" + std::string(rephrase::CliName(probe));
      auto completion = setup.backend->Complete({prompt.text, record_id}, setup.config);
      Json r = {{"probe", rephrase::CliName(probe)}, {"prompt", prompt.text}, {"response", completion.text}};
      if (probe == rephrase::ProbeKind::kHateRephrasing) {
        try {
          r["rephrasing"] = rephrase::ExtractRephrasing(completion.text);
        } catch (const Error&) {
          r["rephrasing"] = nullptr;
        }
      }
      responses.push_back(r);
    }
    SetOut(out_json, responses.dump());
    return RP_OK;
  });
}

rp_status rp_run(const rp_context* ctx, const char* config_json, char** out_summary) {
  return Call([&] {
    Require(ctx, "ctx");
    const Json j = ParseConfig(config_json, "run config");
    CheckKeys(j, {"corpus", "out", "prompt", "system_id", "max_concurrency", "resume", "sample", "seed",
                  "generation", "scoring"},
              "run config");
    rephrase::RunConfig config;
    config.corpus_path = RequireString(j, "corpus", "run config");
    config.out_dir = RequireString(j, "out", "run config");
    config.prompt_kind = PromptKindArg(Get<std::string>(j, "prompt", "task"));
    config.system_id = Get<std::string>(j, "system_id", "");
    config.max_concurrency = Concurrency(j);
    config.resume = Get<bool>(j, "resume", false);
    if (auto it = j.find("sample"); it != j.end() && !it->is_null()) config.sample_size = it->get<std::size_t>();
    config.seed = Get<std::uint64_t>(j, "seed", 0);
    auto setup = ParseBackend(j.value("generation", Json::object()));
    config.generation = setup.config;
    config.scoring = ParseScoring(j.value("scoring", Json()));
    const auto summary = rephrase::RunPipeline(config, ctx->templates, *setup.backend);
    SetOut(out_summary, ToJson(summary).dump());
    return SummaryStatus(summary);
  });
}

rp_status rp_import(const char* config_json, char** out_summary) {
  return Call([&] {
    const Json j = ParseConfig(config_json, "import config");
    CheckKeys(j, {"generations", "system_id", "corpus", "out", "max_concurrency", "scoring"}, "import config");
    rephrase::ImportConfig config;
    config.generations_path = RequireString(j, "generations", "import config");
    config.system_id = RequireString(j, "system_id", "import config");
    config.corpus_path = RequireString(j, "corpus", "import config");
    config.out_dir = RequireString(j, "out", "import config");
    config.max_concurrency = Concurrency(j);
    config.scoring = ParseScoring(j.value("scoring", Json()));
    const auto summary = rephrase::ImportExternalGenerations(config);
    SetOut(out_summary, ToJson(summary).dump());
    return SummaryStatus(summary);
  });
}

rp_status rp_score(const char* config_json, char** out_summary) {
  return Call([&] {
    const Json j = ParseConfig(config_json, "score config");
    CheckKeys(j, {"run", "max_concurrency", "scoring"}, "score config");
    const auto summary = rephrase::RescoreRun(RequireString(j, "run", "score config"),
                                              ParseScoring(j.value("scoring", Json())), Concurrency(j));
    SetOut(out_summary, ToJson(summary).dump());
    return SummaryStatus(summary);
  });
}

rp_status rp_report(const char* config_json, char** out_table, char** out_sidecar) {
  return Call([&] {
    const Json j = ParseConfig(config_json, "report config");
    CheckKeys(j, {"runs", "format", "with_failure_rate", "force"}, "report config");
    const auto runs = Get<std::vector<std::string>>(j, "runs", {});
    if (runs.empty()) throw Error(ErrorCode::kInvalidArgument, "no runs given");
    std::vector<rephrase::RunReport> reports;
    for (const auto& dir : runs) reports.push_back(rephrase::LoadRunReport(dir));
    if (!Get<bool>(j, "force", false)) rephrase::CheckComparable(reports);
    rephrase::TableOptions options;
    const auto format = Get<std::string>(j, "format", "markdown");
    if (format == "csv") {
      options.format = rephrase::TableFormat::kCsv;
    } else if (format != "markdown" && format != "md") {
      throw Error(ErrorCode::kInvalidArgument, "unknown table format '" + format + "'");
    }
    options.with_failure_rate = Get<bool>(j, "with_failure_rate", false);
    SetOut(out_table, rephrase::EmitTable(reports, options));
    SetOut(out_sidecar, rephrase::ReportsSidecar(reports).dump(2));
    return RP_OK;
  });
}

rp_status rp_failures(const char* scores_path, char** out_json) {
  return Call([&] {
    Require(scores_path, "scores_path");
    const auto r = rephrase::FlagFailures(scores_path);
    SetOut(out_json, Json({{"failed_ids", r.failed_ids}, {"scored", r.scored}, {"rate", r.rate}}).dump());
    return RP_OK;
  });
}

rp_status rp_check_table(const char* csv_path, double tolerance, char** out_json) {
  return Call([&] {
    Require(csv_path, "csv_path");
    if (!(tolerance >= 0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
    const auto rows = rephrase::LoadConsistencyRows(csv_path);
    Json violations = Json::array();
    for (const auto& v : rephrase::CheckTableConsistency(rows, tolerance)) {
      violations.push_back({{"index", v.index},
                            {"label", v.label},
                            {"expected", v.expected},
                            {"actual", v.actual},
                            {"delta", v.delta}});
    }
    SetOut(out_json, Json({{"rows", rows.size()}, {"tolerance", tolerance}, {"violations", violations}}).dump());
    return RP_OK;
  });
}

rp_status rp_kappa(const int* a, const int* b, size_t n, rp_agreement* out) {
  return Call([&] {
    Require(out, "out");
    if (n > 0) {
      Require(a, "a");
      Require(b, "b");
    }
    const auto r = rephrase::CohenKappa({a, n}, {b, n});
    out->kappa = r.kappa;
    out->observed_agreement = r.observed;
    out->expected_agreement = r.expected;
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t k = 0; k < 5; ++k) out->confusion[i][k] = r.confusion[i][k];
    }
    out->n_items = r.n_items;
    return RP_OK;
  });
}

rp_status rp_kappa_files(const char* path_a, const char* path_b, char** out_json) {
  return Call([&] {
    Require(path_a, "path_a");
    Require(path_b, "path_b");
    Require(out_json, "out_json");
    const auto ra = LoadRatings(path_a);
    const auto rb = LoadRatings(path_b);
    std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> metrics;
    std::vector<int> pa, pb;
    for (const auto& [item, a] : ra) {
      auto it = rb.find(item);
      if (it == rb.end()) continue;
      for (const auto& [metric, va] : a) {
        auto vb = it->second.find(metric);
        if (vb == it->second.end()) continue;
        metrics[metric].first.push_back(va);
        metrics[metric].second.push_back(vb->second);
        pa.push_back(va);
        pb.push_back(vb->second);
      }
    }
    if (pa.empty()) throw Error(ErrorCode::kValidation, "the two files share no rated item");
    Json result = Json::object();
    for (const auto& [metric, v] : metrics) {
      std::string name = metric;
      if (name.ends_with("_rating")) name.resize(name.size() - 7);
      result[name] = rephrase::ToJson(rephrase::CohenKappa(v.first, v.second));
    }
    if (metrics.size() > 1) result["pooled"] = rephrase::ToJson(rephrase::CohenKappa(pa, pb));
    SetOut(out_json, result.dump());
    return RP_OK;
  });
}

rp_status rp_study_create(const char* study_dir, const char* config_json, char** out_json) {
  return Call([&] {
    Require(study_dir, "study_dir");
    const Json j = ParseConfig(config_json, "study config");
    CheckKeys(j, {"systems", "per_system", "annotators", "seed"}, "study config");
    rephrase::StudyConfig config;
    for (const auto& s : j.value("systems", Json::array())) {
      CheckKeys(s, {"system_id", "run"}, "study system");
      std::string run = RequireString(s, "run", "study system");
      std::string id = Get<std::string>(s, "system_id", "");
      if (id.empty()) {
        // Fall back to the run's own system id.
        const auto manifest = Json::parse(rephrase::ReadFileToString(std::filesystem::path(run) / "manifest.json"));
        id = manifest.value("system_id", std::filesystem::path(run).filename().string());
      }
      config.systems.push_back({id, run});
    }
    config.per_system = Get<std::size_t>(j, "per_system", config.per_system);
    config.annotators = Get<std::vector<std::string>>(j, "annotators", config.annotators);
    config.seed = Get<std::uint64_t>(j, "seed", 0);
    auto study = rephrase::Study::Create(config, study_dir);
    SetOut(out_json, Json({{"tasks", study->tasks().size()},
                           {"annotators", study->annotators()},
                           {"expected_records", study->expected_records()}})
                         .dump());
    return RP_OK;
  });
}

rp_status rp_study_progress(const char* study_dir, char** out_json) {
  return Call([&] {
    Require(study_dir, "study_dir");
    SetOut(out_json, ToJson(rephrase::Study::Open(study_dir)->Progress()).dump());
    return RP_OK;
  });
}

rp_status rp_study_results(const char* study_dir, int partial, char** out_json) {
  return Call([&] {
    Require(study_dir, "study_dir");
    SetOut(out_json, ToJson(rephrase::Study::Open(study_dir)->Results(partial != 0)).dump());
    return RP_OK;
  });
}

rp_status rp_server_create(const char* study_dir, const char* static_dir, rp_server** out) {
  return Call([&] {
    Require(study_dir, "study_dir");
    Require(out, "out");
    *out = nullptr;
    auto s = std::make_unique<rp_server>();
    s->study = rephrase::Study::Open(study_dir);
    std::optional<std::filesystem::path> dir;
    if (static_dir && *static_dir) dir = static_dir;
    s->server = std::make_unique<rephrase::AnnotationServer>(*s->study, dir);
    *out = s.release();
    return RP_OK;
  });
}

rp_status rp_server_bind(rp_server* server, const char* host, int port, int* out_port) {
  return Call([&] {
    Require(server, "server");
    const std::string h = host && *host ? host : "127.0.0.1";
    int bound = port;
    if (port == 0) {
      bound = server->server->BindAnyPort(h);
    } else {
      server->server->Bind(h, port);
    }
    if (out_port) *out_port = bound;
    return RP_OK;
  });
}

rp_status rp_server_listen(rp_server* server) {
  return Call([&] {
    Require(server, "server");
    server->server->Listen();
    return RP_OK;
  });
}

void rp_server_stop(rp_server* server) {
  if (server && server->server) server->server->Stop();
}

void rp_server_destroy(rp_server* server) { delete server; }

}  // extern "C"
