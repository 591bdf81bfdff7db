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

// rephrase: command-line front end over the librephrase C API.

#include <rephrase/rephrase.h>

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using Json = nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kPartial = 2, kUnreachable = 3 };

int ExitFor(rp_status s) {
  switch (s) {
    case RP_OK: return kOk;
    case RP_PARTIAL: return kPartial;
    case RP_RUN_UNREACHABLE:
    case RP_UNREACHABLE:
    case RP_BACKEND_ERROR:
      return kUnreachable;
    default: return kUsage;
  }
}

int Fail(rp_status s, const std::string& what) {
  std::cerr << "rephrase: " << what << ": " << rp_last_error() << " (" << rp_status_name(s) << ")\n";
  return ExitFor(s);
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { rp_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Settings resolved as flag > environment > config file.
class Settings {
 public:
  void LoadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      const auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const auto key = trim(line.substr(0, eq));
      if (!kKnown.contains(key)) throw UsageError(path + ":" + std::to_string(n) + ": unknown key '" + key + "'");
      file_[key] = trim(line.substr(eq + 1));
    }
  }

  std::optional<std::string> Get(const std::string& key, const std::optional<std::string>& flag,
                                 std::initializer_list<const char*> env = {}) const {
    if (flag) return flag;
    for (const char* name : env) {
      if (const char* v = std::getenv(name); v && *v) return std::string(v);
    }
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    return std::nullopt;
  }

  inline static const std::set<std::string> kKnown = {
      "backend", "model",       "base_url",        "api_key",          "temperature",
      "max_tokens", "timeout_ms", "max_retries",   "max_concurrency",  "mock_rules",
      "providers", "hybrid_threshold", "templates_dir", "seed"};

 private:
  std::map<std::string, std::string> file_;
};

template <typename T>
T Parse(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof()) throw UsageError("bad value for " + key + ": '" + v + "'");
  return out;
}

std::string ReadTextArg(const std::string& text, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (text.empty()) throw UsageError("--text or --text-file is required");
  return text;
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) throw UsageError("cannot write " + path);
}

// Options shared by commands that talk to a generation backend.
struct BackendFlags {
  std::optional<std::string> backend, model, base_url, api_key, mock_rules, temperature, max_tokens,
      timeout_ms, max_retries, gen_seed;

  void Add(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "mock or http (OpenAI-compatible chat completions)");
    cmd->add_option("--model", model, "Model id sent to the backend");
    cmd->add_option("--base-url", base_url, "Backend base URL");
    cmd->add_option("--api-key", api_key, "Backend API key (prefer REPHRASE_API_KEY)");
    cmd->add_option("--mock-rules", mock_rules, "Mock backend rule file");
    cmd->add_option("--temperature", temperature, "Sampling temperature");
    cmd->add_option("--max-tokens", max_tokens, "Completion token limit");
    cmd->add_option("--timeout-ms", timeout_ms, "Per-request timeout");
    cmd->add_option("--retries", max_retries, "Retries after the first attempt");
    cmd->add_option("--generation-seed", gen_seed, "Seed forwarded to backends that accept one");
  }

  Json Resolve(const Settings& s) const {
    Json g = Json::object();
    if (auto v = s.Get("backend", backend, {"REPHRASE_BACKEND"})) g["backend"] = *v;
    if (auto v = s.Get("model", model, {"REPHRASE_MODEL"})) g["model"] = *v;
    if (auto v = s.Get("base_url", base_url, {"REPHRASE_BASE_URL"})) g["base_url"] = *v;
    if (auto v = s.Get("api_key", api_key, {"REPHRASE_API_KEY", "OPENAI_API_KEY"})) g["api_key"] = *v;
    if (auto v = s.Get("mock_rules", mock_rules, {"REPHRASE_MOCK_RULES"})) g["mock_rules"] = *v;
    if (auto v = s.Get("temperature", temperature)) g["temperature"] = Parse<double>("temperature", *v);
    if (auto v = s.Get("max_tokens", max_tokens)) g["max_tokens"] = Parse<int>("max_tokens", *v);
    if (auto v = s.Get("timeout_ms", timeout_ms)) g["timeout_ms"] = Parse<long long>("timeout_ms", *v);
    if (auto v = s.Get("max_retries", max_retries)) g["max_retries"] = Parse<int>("max_retries", *v);
    if (gen_seed) g["seed"] = Parse<long long>("generation seed", *gen_seed);
    return g;
  }
};

struct ScoringFlags {
  std::optional<std::string> providers, hybrid_threshold;

  void Add(CLI::App* cmd) {
    cmd->add_option("--providers", providers, "Scoring provider config (JSON); offline stubs by default");
    cmd->add_option("--hybrid-threshold", hybrid_threshold, "Hybrid score HIR threshold");
  }

  Json Resolve(const Settings& s) const {
    Json j = Json::object();
    if (auto v = s.Get("providers", providers, {"REPHRASE_PROVIDERS"})) j["providers_file"] = *v;
    if (auto v = s.Get("hybrid_threshold", hybrid_threshold)) {
      j["hybrid_threshold"] = Parse<double>("hybrid_threshold", *v);
    }
    return j;
  }
};

std::optional<int> ConcurrencyFrom(const Settings& s, const std::optional<std::string>& flag) {
  if (auto v = s.Get("max_concurrency", flag)) return Parse<int>("max_concurrency", *v);
  return std::nullopt;
}

struct Context {
  rp_context* ctx = nullptr;
  ~Context() { rp_context_free(ctx); }
};

rp_status MakeContext(const Settings& s, const std::optional<std::string>& flag, Context& out) {
  const auto dir = s.Get("templates_dir", flag, {"REPHRASE_TEMPLATES_DIR"});
  return rp_context_create(dir ? dir->c_str() : nullptr, &out.ctx);
}

void PrintSummary(const std::string& json) {
  const auto j = Json::parse(json);
  std::cout << j.dump(2) << "\n";
  std::cerr << "status " << j.value("status", "") << ": " << j.value("scored", 0) << " of "
            << j.value("total", 0) << " scored, " << j.value("generation_errors", 0)
            << " generation errors, " << j.value("scoring_errors", 0) << " scoring errors\n";
}

int RunSummaryCommand(rp_status s, const Owned& summary, const char* what) {
  if (summary.p) PrintSummary(summary.str());
  if (s != RP_OK && s != RP_PARTIAL && s != RP_RUN_UNREACHABLE) return Fail(s, what);
  return ExitFor(s);
}

int ServeUntilSignal(rp_server* server) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::thread([server, set] {
    int sig = 0;
    sigwait(&set, &sig);
    rp_server_stop(server);
  }).detach();
  const auto s = rp_server_listen(server);
  if (s != RP_OK) return Fail(s, "serve");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rephrase hateful posts with prompted LLMs and evaluate the results"};
  app.set_version_flag("--version", std::string(rp_version()));
  app.require_subcommand(1);
  std::optional<std::string> config_file, templates_dir;
  app.add_option("--config", config_file, "key=value config file (also REPHRASE_CONFIG)");
  app.add_option("--templates", templates_dir, "Directory overriding the built-in prompt templates");

  // run
  auto* run = app.add_subcommand("run", "Generate and score rephrasings for one model and prompt kind");
  std::string run_corpus, run_out, run_prompt = "task", run_system;
  std::optional<std::string> run_conc;
  std::optional<std::size_t> run_sample;
  std::uint64_t run_seed = 0;
  bool run_resume = false;
  BackendFlags run_backend;
  ScoringFlags run_scoring;
  run->add_option("--corpus", run_corpus, "Corpus file (.jsonl or .csv)")->required();
  run->add_option("--out", run_out, "Run directory")->required();
  run->add_option("--prompt", run_prompt, "task, definition, demonstrations or cot")->capture_default_str();
  run->add_option("--system-id", run_system, "Label for this system (default model/prompt)");
  run->add_option("--concurrency", run_conc, "Worker threads");
  run->add_option("--sample", run_sample, "Score a seeded subset of this many records");
  run->add_option("--seed", run_seed, "Seed for sampling")->capture_default_str();
  run->add_flag("--resume", run_resume, "Reuse an existing run directory and its cache");
  run_backend.Add(run);
  run_scoring.Add(run);

  // import
  auto* imp = app.add_subcommand("import", "Score externally produced outputs as a system");
  std::string imp_file, imp_system, imp_corpus, imp_out;
  std::optional<std::string> imp_conc;
  ScoringFlags imp_scoring;
  imp->add_option("--generations", imp_file, "JSONL of {id, text}")->required();
  imp->add_option("--system-id", imp_system, "System label")->required();
  imp->add_option("--corpus", imp_corpus, "Corpus file")->required();
  imp->add_option("--out", imp_out, "Run directory")->required();
  imp->add_option("--concurrency", imp_conc, "Worker threads");
  imp_scoring.Add(imp);

  // score
  auto* score = app.add_subcommand("score", "Re-score an existing run with the given providers");
  std::string score_run;
  std::optional<std::string> score_conc;
  ScoringFlags score_scoring;
  score->add_option("--run", score_run, "Run directory")->required();
  score->add_option("--concurrency", score_conc, "Worker threads");
  score_scoring.Add(score);

  // report
  auto* report = app.add_subcommand("report", "Tabulate runs in the layout of the results table");
  std::vector<std::string> report_runs;
  std::string report_format = "markdown", report_out, report_sidecar;
  bool report_failures = false, report_force = false;
  report->add_option("--runs", report_runs, "Run directories")->required()->expected(1, -1);
  report->add_option("--format", report_format, "markdown or csv")->capture_default_str();
  report->add_option("--out", report_out, "Write the table here instead of stdout");
  report->add_option("--sidecar", report_sidecar, "Write unrounded aggregates (JSON) here");
  report->add_flag("--with-failure-rate", report_failures, "Append a failure-rate column");
  report->add_flag("--force", report_force, "Tabulate runs scored by different providers");

  // failures
  auto* failures = app.add_subcommand("failures", "List failed instances (HIR below the threshold)");
  std::string fail_run, fail_scores;
  auto* fail_run_opt = failures->add_option("--run", fail_run, "Run directory");
  failures->add_option("--scores", fail_scores, "scores.jsonl file")->excludes(fail_run_opt);

  // prompts
  auto* prompts = app.add_subcommand("prompts", "Inspect prompt templates");
  prompts->require_subcommand(1);
  auto* plist = prompts->add_subcommand("list", "List templates and their versions");
  auto* prender = prompts->add_subcommand("render", "Render a template for one input");
  std::string render_kind, render_text, render_file;
  prender->add_option("--kind", render_kind, "task, definition, demonstrations, cot, detection, spans or rephrasing")
      ->required();
  prender->add_option("--text", render_text, "Input text");
  prender->add_option("--text-file", render_file, "Read the input text from a file");

  // probe
  auto* probe = app.add_subcommand("probe", "Run detection, span identification and rephrasing on one input");
  std::string probe_text, probe_file;
  bool probe_json = false;
  BackendFlags probe_backend;
  probe->add_option("--text", probe_text, "Input text");
  probe->add_option("--text-file", probe_file, "Read the input text from a file");
  probe->add_flag("--json", probe_json, "Print the responses as JSON");
  probe_backend.Add(probe);

  // annotate
  auto* annotate = app.add_subcommand("annotate", "Blind human-evaluation study");
  annotate->require_subcommand(1);
  auto* acreate = annotate->add_subcommand("create", "Sample instances from runs into a study");
  std::string study_dir;
  std::vector<std::string> study_systems, study_annotators = {"annotator-1", "annotator-2"};
  std::size_t per_system = 30;
  std::uint64_t study_seed = 0;
  acreate->add_option("--study", study_dir, "Study directory")->required();
  acreate->add_option("--system", study_systems, "Run directory, or id=run_dir; repeatable")
      ->required()->expected(1, -1);
  acreate->add_option("--per-system", per_system, "Instances per system")->capture_default_str();
  acreate->add_option("--annotators", study_annotators, "Annotator ids")->delimiter(',')->expected(2, -1);
  acreate->add_option("--seed", study_seed, "Sampling and ordering seed")->capture_default_str();
  auto* aserve = annotate->add_subcommand("serve", "Serve the annotation API for a study");
  std::string serve_host = "127.0.0.1", serve_static;
  int serve_port = 8080;
  aserve->add_option("--study", study_dir, "Study directory")->required();
  aserve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  aserve->add_option("--port", serve_port, "Port (0 picks a free one)")->capture_default_str();
  aserve->add_option("--static", serve_static, "Directory of UI assets to serve at /");
  auto* aresults = annotate->add_subcommand("results", "Unblind and summarise a study");
  bool results_partial = false, results_json = false;
  aresults->add_option("--study", study_dir, "Study directory")->required();
  aresults->add_flag("--partial", results_partial, "Allow an incomplete study");
  aresults->add_flag("--json", results_json, "Print JSON instead of a table");

  // kappa
  auto* kappa = app.add_subcommand("kappa", "Cohen's kappa between two annotators' rating files");
  std::string kappa_a, kappa_b;
  kappa->add_option("--a", kappa_a, "First annotator's JSONL")->required();
  kappa->add_option("--b", kappa_b, "Second annotator's JSONL")->required();

  // check-table
  auto* check = app.add_subcommand("check-table", "Check Average = (cosine + HIR) / 2 on a CSV table");
  std::string check_table;
  double check_tol = 5e-4;
  check->add_option("--table", check_table, "CSV with cosine, HIR and Average columns")->required();
  check->add_option("--tolerance", check_tol, "Allowed absolute difference")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return kUsage;
  }

  try {
    Settings settings;
    if (auto path = config_file ? config_file : (std::getenv("REPHRASE_CONFIG") && *std::getenv("REPHRASE_CONFIG")
                                                     ? std::optional<std::string>(std::getenv("REPHRASE_CONFIG"))
                                                     : std::nullopt)) {
      settings.LoadFile(*path);
    }

    if (*run) {
      Context ctx;
      if (auto s = MakeContext(settings, templates_dir, ctx); s != RP_OK) return Fail(s, "templates");
      Json cfg = {{"corpus", run_corpus},
                  {"out", run_out},
                  {"prompt", run_prompt},
                  {"resume", run_resume},
                  {"seed", run_seed},
                  {"generation", run_backend.Resolve(settings)},
                  {"scoring", run_scoring.Resolve(settings)}};
      if (!run_system.empty()) cfg["system_id"] = run_system;
      if (run_sample) cfg["sample"] = *run_sample;
      if (auto c = ConcurrencyFrom(settings, run_conc)) cfg["max_concurrency"] = *c;
      Owned summary;
      const auto s = rp_run(ctx.ctx, cfg.dump().c_str(), &summary.p);
      return RunSummaryCommand(s, summary, "run");
    }

    if (*imp) {
      Json cfg = {{"generations", imp_file}, {"system_id", imp_system}, {"corpus", imp_corpus},
                  {"out", imp_out}, {"scoring", imp_scoring.Resolve(settings)}};
      if (auto c = ConcurrencyFrom(settings, imp_conc)) cfg["max_concurrency"] = *c;
      Owned summary;
      const auto s = rp_import(cfg.dump().c_str(), &summary.p);
      return RunSummaryCommand(s, summary, "import");
    }

    if (*score) {
      Json cfg = {{"run", score_run}, {"scoring", score_scoring.Resolve(settings)}};
      if (auto c = ConcurrencyFrom(settings, score_conc)) cfg["max_concurrency"] = *c;
      Owned summary;
      const auto s = rp_score(cfg.dump().c_str(), &summary.p);
      return RunSummaryCommand(s, summary, "score");
    }

    if (*report) {
      Json cfg = {{"runs", report_runs}, {"format", report_format},
                  {"with_failure_rate", report_failures}, {"force", report_force}};
      Owned table, sidecar;
      if (auto s = rp_report(cfg.dump().c_str(), &table.p, &sidecar.p); s != RP_OK) return Fail(s, "report");
      if (report_out.empty()) {
        std::cout << table.str();
      } else {
        WriteFile(report_out, table.str());
      }
      if (!report_sidecar.empty()) WriteFile(report_sidecar, sidecar.str() + "\n");
      return kOk;
    }

    if (*failures) {
      if (fail_run.empty() && fail_scores.empty()) throw UsageError("--run or --scores is required");
      const auto path = fail_scores.empty() ? fail_run + "/scores.jsonl" : fail_scores;
      Owned out;
      if (auto s = rp_failures(path.c_str(), &out.p); s != RP_OK) return Fail(s, "failures");
      const auto j = Json::parse(out.str());
      for (const auto& id : j["failed_ids"]) std::cout << id.get<std::string>() << "\n";
      char line[128];
      std::snprintf(line, sizeof line, "%zu of %zu failed (rate %.4f)\n", j["failed_ids"].size(),
                    j["scored"].get<std::size_t>(), j["rate"].get<double>());
      std::cerr << line;
      return kOk;
    }

    if (*prompts) {
      Context ctx;
      if (auto s = MakeContext(settings, templates_dir, ctx); s != RP_OK) return Fail(s, "templates");
      if (*plist) {
        Owned out;
        if (auto s = rp_prompts_list(ctx.ctx, &out.p); s != RP_OK) return Fail(s, "prompts list");
        for (const auto& t : Json::parse(out.str())) {
          std::cout << t["kind"].get<std::string>() << "\t" << t["version"].get<std::string>() << "\t"
                    << t["length"].get<std::size_t>() << "\n";
        }
        return kOk;
      }
      const auto text = ReadTextArg(render_text, render_file);
      Owned out;
      const bool is_probe = render_kind == "detection" || render_kind == "spans" || render_kind == "rephrasing";
      const auto s = is_probe ? rp_probe_render(ctx.ctx, render_kind.c_str(), text.c_str(), &out.p)
                              : rp_prompt_render(ctx.ctx, render_kind.c_str(), text.c_str(), &out.p);
      if (s != RP_OK) return Fail(s, "prompts render");
      std::cout << out.str() << "\n";
      return kOk;
    }

    if (*probe) {
      Context ctx;
      if (auto s = MakeContext(settings, templates_dir, ctx); s != RP_OK) return Fail(s, "templates");
      const auto text = ReadTextArg(probe_text, probe_file);
      Owned out;
      const auto cfg = probe_backend.Resolve(settings).dump();
      if (auto s = rp_probe_run(ctx.ctx, cfg.c_str(), text.c_str(), &out.p); s != RP_OK) return Fail(s, "probe");
      const auto responses = Json::parse(out.str());
      if (probe_json) {
        std::cout << responses.dump(2) << "\n";
        return kOk;
      }
      static const std::map<std::string, std::string> kTitles = {
          {"detection", "Hate speech detection"},
          {"spans", "Hate span identification"},
          {"rephrasing", "Hate speech rephrasing"}};
      for (const auto& r : responses) {
        std::cout << "## " << kTitles.at(r["probe"].get<std::string>()) << "\n"
                  << r["response"].get<std::string>() << "\n\n";
      }
      return kOk;
    }

    if (*annotate) {
      if (*acreate) {
        Json systems = Json::array();
        for (const auto& spec : study_systems) {
          const auto eq = spec.find('=');
          if (eq == std::string::npos) {
            systems.push_back({{"run", spec}});
          } else {
            systems.push_back({{"system_id", spec.substr(0, eq)}, {"run", spec.substr(eq + 1)}});
          }
        }
        const Json cfg = {{"systems", systems}, {"per_system", per_system},
                          {"annotators", study_annotators}, {"seed", study_seed}};
        Owned out;
        if (auto s = rp_study_create(study_dir.c_str(), cfg.dump().c_str(), &out.p); s != RP_OK) {
          return Fail(s, "annotate create");
        }
        const auto j = Json::parse(out.str());
        std::cout << j["tasks"].get<std::size_t>() << " tasks, " << j["expected_records"].get<std::size_t>()
                  << " expected annotations\n";
        return kOk;
      }
      if (*aserve) {
        rp_server* server = nullptr;
        if (auto s = rp_server_create(study_dir.c_str(), serve_static.empty() ? nullptr : serve_static.c_str(),
                                      &server);
            s != RP_OK) {
          return Fail(s, "annotate serve");
        }
        int port = 0;
        if (auto s = rp_server_bind(server, serve_host.c_str(), serve_port, &port); s != RP_OK) {
          rp_server_destroy(server);
          return Fail(s, "annotate serve");
        }
        std::cout << "listening on http://" << serve_host << ":" << port << std::endl;
        const int code = ServeUntilSignal(server);
        rp_server_destroy(server);
        return code;
      }
      Owned out;
      if (auto s = rp_study_results(study_dir.c_str(), results_partial ? 1 : 0, &out.p); s != RP_OK) {
        return Fail(s, "annotate results");
      }
      const auto j = Json::parse(out.str());
      if (results_json) {
        std::cout << j.dump(2) << "\n";
        return kOk;
      }
      std::cout << "| System | HIR | Hallucination | Relevance | Records |\n| --- | ---: | ---: | ---: | ---: |\n";
      char buf[256];
      for (const auto& s : j["systems"]) {
        std::snprintf(buf, sizeof buf, "| %s | %.2f | %.2f | %.2f | %zu |\n",
                      s["system_id"].get<std::string>().c_str(), s["hir"].get<double>(),
                      s["hallucination"].get<double>(), s["relevance"].get<double>(),
                      s["n_records"].get<std::size_t>());
        std::cout << buf;
      }
      for (const auto& [metric, a] : j["agreement"].items()) {
        std::snprintf(buf, sizeof buf, "kappa %-13s %.4f (n=%zu)\n", metric.c_str(), a["kappa"].get<double>(),
                      a["n_items"].get<std::size_t>());
        std::cout << buf;
      }
      return kOk;
    }

    if (*kappa) {
      Owned out;
      if (auto s = rp_kappa_files(kappa_a.c_str(), kappa_b.c_str(), &out.p); s != RP_OK) return Fail(s, "kappa");
      const auto j = Json::parse(out.str());
      char buf[128];
      for (const auto& [metric, a] : j.items()) {
        std::snprintf(buf, sizeof buf, "%-13s %.4f  p_o=%.4f p_e=%.4f n=%zu\n", metric.c_str(),
                      a["kappa"].get<double>(), a["observed_agreement"].get<double>(),
                      a["expected_agreement"].get<double>(), a["n_items"].get<std::size_t>());
        std::cout << buf;
      }
      return kOk;
    }

    if (*check) {
      Owned out;
      if (auto s = rp_check_table(check_table.c_str(), check_tol, &out.p); s != RP_OK) return Fail(s, "check-table");
      const auto j = Json::parse(out.str());
      char buf[256];
      for (const auto& v : j["violations"]) {
        std::snprintf(buf, sizeof buf, "row %zu (%s): average %.4f, expected %.5f (off by %.5f)\n",
                      v["index"].get<std::size_t>() + 1, v["label"].get<std::string>().c_str(),
                      v["actual"].get<double>(), v["expected"].get<double>(), v["delta"].get<double>());
        std::cout << buf;
      }
      std::cout << j["rows"].get<std::size_t>() << " rows, " << j["violations"].size() << " violations\n";
      return j["violations"].empty() ? kOk : kPartial;
    }
  } catch (const UsageError& e) {
    std::cerr << "rephrase: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "rephrase: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
