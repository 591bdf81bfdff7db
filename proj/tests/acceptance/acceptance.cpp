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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// criterion fails. Uses the mock backend and offline stub providers only.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "annotation/kappa.hpp"
#include "annotation/study.hpp"
#include "common/jsonl.hpp"
#include "common/text.hpp"
#include "generation/mock_backend.hpp"
#include "oracles/oracles.hpp"
#include "pipeline/run.hpp"
#include "report/report.hpp"
#include "scoring/bleu.hpp"
#include "scoring/metrics.hpp"
#include "scoring/score.hpp"
#include "unit/test_util.hpp"

using namespace rephrase;
using rephrase::testing::DataDir;
using rephrase::testing::TempDir;

namespace {

// Tolerances and budgets.
constexpr double kTableTol = 5e-4;
constexpr double kBleuTol = 1e-9;
constexpr double kExactTol = 1e-12;
constexpr double kPplTol = 1e-9;
constexpr double kKappaTol = 1e-12;
constexpr double kHybridTol = 1e-12;
constexpr double kTableBudgetS = 1.0;
constexpr double kBleuBudgetS = 5.0;
constexpr double kKappaBudgetS = 5.0;
constexpr double kEndToEndBudgetS = 10.0;

struct Outcome {
  bool ok = true;
  std::string detail;
  void Expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void Criterion(int n, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs >= budget_s) {
    o.Expect(false, "took " + std::to_string(secs) + " s, budget " + std::to_string(budget_s) + " s");
  }
  std::printf("%s %d %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", n, name, secs, o.ok ? "" : ": ",
              o.detail.c_str());
  if (!o.ok) ++failures;
}

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<std::string> RandomTokens(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab = {"islam", "is", "a", "religion", "of", "peace",
                                                 "some", "people", "the", "they", ".", ","};
  std::uniform_int_distribution<std::size_t> len(1, 10), word(0, vocab.size() - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = vocab[word(rng)];
  return out;
}

InstanceScores Instance(double cosine, double hir, double threshold = 0.2) {
  InstanceScores s;
  s.cosine = cosine;
  s.hir = hir;
  Derive(s, threshold);
  return s;
}

RunConfig MockRun(const std::filesystem::path& out, int concurrency) {
  RunConfig c;
  c.corpus_path = DataDir() / "sample_corpus_20.jsonl";
  c.prompt_kind = PromptKind::kFewShotDemonstrations;
  c.generation.model_id = "mock-model";
  c.out_dir = out;
  c.max_concurrency = concurrency;
  return c;
}

std::vector<StudySystem> SyntheticRuns(const std::filesystem::path& root, std::size_t n,
                                       const std::vector<std::string>& systems) {
  std::vector<Json> corpus;
  for (std::size_t i = 0; i < n; ++i) {
    corpus.push_back({{"id", "post-" + std::to_string(i)},
                      {"hate_text", "post " + std::to_string(i) + " calls them a menace"},
                      {"reference_text", "post " + std::to_string(i) + " disagrees with them"}});
  }
  WriteJsonLines(root / "corpus.jsonl", corpus);
  std::vector<StudySystem> out;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    std::vector<Json> gens;
    for (std::size_t i = 0; i < n; ++i) {
      gens.push_back({{"id", "post-" + std::to_string(i)},
                      {"text", "variant " + std::to_string(k) + " of post " + std::to_string(i)}});
    }
    const auto gen_path = root / ("gen-" + std::to_string(k) + ".jsonl");
    WriteJsonLines(gen_path, gens);
    ImportConfig ic;
    ic.generations_path = gen_path;
    ic.system_id = systems[k];
    ic.corpus_path = root / "corpus.jsonl";
    ic.out_dir = root / ("run-" + std::to_string(k));
    ImportExternalGenerations(ic);
    out.push_back({systems[k], ic.out_dir});
  }
  return out;
}

}  // namespace

int main() {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);

  Criterion(1, "results table average identity", kTableBudgetS, [](Outcome& o) {
    const auto rows = LoadConsistencyRows(DataDir() / "results_table.csv");
    o.Expect(rows.size() == 17, "expected 17 rows, got " + std::to_string(rows.size()));
    const auto v = CheckTableConsistency(rows, kTableTol);
    o.Expect(v.empty(), std::to_string(v.size()) + " violations, first: " + (v.empty() ? "" : v[0].label));
    o.Expect(CheckTableConsistency({{"bart", 0.7675, 0.2493, 0.5084}, {"gpt", 0.6518, 0.4147, 0.5333}}, kTableTol).empty(),
             "worked rows");
    o.Expect(CheckTableConsistency({{"edited", 0.7675, 0.2493, 0.5104}}, kTableTol).size() == 1,
             "an edited average is not flagged");
  });

  Criterion(2, "hybrid semantics", 0, [](Outcome& o) {
    const auto a = Instance(0.9, 0.2);
    o.Expect(a.hybrid == 0.0 && !a.failed, "(0.9, 0.2) should give hybrid 0 and not failed");
    o.Expect(Near(Instance(0.5, 0.21).hybrid, 0.355, kHybridTol), "(0.5, 0.21) should give 0.355");
    o.Expect(Near(Instance(0.7, 0.5).hybrid, 0.6, kHybridTol), "(0.7, 0.5) should give 0.6");
    // Constructed corpus: half the instances reduce intensity well, half not
    // at all. The means pass the threshold, most instances are zeroed.
    std::vector<InstanceScores> scores;
    for (int i = 0; i < 10; ++i) {
      scores.push_back(i < 3 ? Instance(0.6, 0.55) : Instance(0.85, 0.1));
      scores.back().record_id = "c" + std::to_string(i);
    }
    const auto r = Aggregate(scores);
    const double per_instance = 3 * (0.6 + 0.55) / 2 / 10;
    const double on_means = HybridScore(r.cosine, r.hir, 0.2);
    o.Expect(Near(r.hybrid, per_instance, kHybridTol), "aggregate hybrid is not the mean of instance hybrids");
    o.Expect(std::abs(r.hybrid - on_means) > 0.1, "per-instance mean should differ from formula on means");
  });

  Criterion(3, "BLEU oracle equivalence", kBleuBudgetS, [](Outcome& o) {
    std::mt19937_64 rng(424242);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const auto c = RandomTokens(rng);
      const auto r = RandomTokens(rng);
      worst = std::max(worst, std::abs(SentenceBleu(c, r) - oracle::Bleu(c, r)));
    }
    o.Expect(worst <= kBleuTol, "max deviation " + std::to_string(worst));
    for (int i = 0; i < 20; ++i) {
      const auto x = RandomTokens(rng);
      o.Expect(Near(SentenceBleu(x, x), 1.0, kExactTol), "bleu(x, x) != 1");
    }
  });

  Criterion(4, "perplexity closed forms", 0, [](Outcome& o) {
    for (double v : {2.0, 10.0, 50000.0}) {
      const std::vector<double> lp(12, -std::log(v));
      o.Expect(Near(Perplexity(lp), v, v * kExactTol), "uniform V=" + std::to_string(v));
    }
    o.Expect(Near(Perplexity(std::vector<double>{-1, -2, -3}), std::exp(2.0), kPplTol), "[-1,-2,-3]");
  });

  Criterion(5, "kappa properties", kKappaBudgetS, [](Outcome& o) {
    const std::vector<int> x = {1, 2, 3, 4, 5, 5, 4};
    o.Expect(Near(CohenKappa(x, x).kappa, 1.0, kKappaTol), "identical vectors");
    o.Expect(Near(CohenKappa(std::vector<int>{1, 2, 1, 2}, std::vector<int>{2, 1, 2, 1}).kappa, -1.0, kKappaTol),
             "perfect disagreement");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(1, 5);
    const int relabel[] = {0, 4, 1, 5, 2, 3};
    for (int t = 0; t < 1000; ++t) {
      std::vector<int> a(40), b(40), ra(40), rb(40);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = d(rng);
        b[i] = (rng() % 2) ? a[i] : d(rng);
        ra[i] = relabel[a[i]];
        rb[i] = relabel[b[i]];
      }
      const double k = CohenKappa(a, b).kappa;
      o.Expect(k >= -1.0 - kKappaTol && k <= 1.0 + kKappaTol, "out of bounds");
      o.Expect(Near(k, oracle::CohenKappa(a, b).kappa, kKappaTol), "oracle mismatch");
      o.Expect(Near(k, CohenKappa(ra, rb).kappa, kKappaTol), "relabelling changed kappa");
    }
  });

  Criterion(6, "end-to-end mock run", kEndToEndBudgetS, [](Outcome& o) {
    TempDir tmp;
    const auto templates = TemplateStore::Builtin();
    const auto opts = MockBackend::LoadOptions(DataDir() / "mock_rules.json");
    MockBackend b1(opts), b2(opts);
    const auto s1 = RunPipeline(MockRun(tmp / "a", 4), templates, b1);
    const auto s2 = RunPipeline(MockRun(tmp / "b", 1), templates, b2);
    o.Expect(s1.status == RunStatus::kComplete && s1.coverage.scored == 20, "first run incomplete");
    for (const char* f : {"manifest.json", "generations.jsonl", "scores.jsonl", "errors.jsonl"}) {
      o.Expect(ReadFileToString(tmp / "a" / f) == ReadFileToString(tmp / "b" / f), std::string(f) + " differs");
    }
    o.Expect(EmitTable({LoadRunReport(tmp / "a")}) == EmitTable({LoadRunReport(tmp / "b")}), "reports differ");
    o.Expect(b1.call_count() > 0, "no backend calls on a fresh run");

    const auto before = ReadFileToString(tmp / "a" / "scores.jsonl");
    MockBackend b3(opts);
    auto resume = MockRun(tmp / "a", 4);
    resume.resume = true;
    RunPipeline(resume, templates, b3);
    o.Expect(b3.call_count() == 0, "resume made " + std::to_string(b3.call_count()) + " backend calls");
    o.Expect(ReadFileToString(tmp / "a" / "scores.jsonl") == before, "resume changed scores");
  });

  Criterion(7, "failure flagging", 0, [](Outcome& o) {
    TempDir tmp;
    std::vector<Json> rows;
    for (double hir : {0.19, 0.20, 0.21}) {
      auto s = Instance(0.5, hir);
      s.record_id = "hir-" + std::to_string(hir);
      rows.push_back(ToJson(s));
    }
    WriteJsonLines(tmp / "scores.jsonl", rows);
    const auto r = FlagFailures(tmp / "scores.jsonl");
    o.Expect(r.failed_ids.size() == 1, std::to_string(r.failed_ids.size()) + " failures");
    o.Expect(Near(r.rate, 1.0 / 3, kExactTol), "rate " + std::to_string(r.rate));
  });

  Criterion(8, "study accounting", 0, [](Outcome& o) {
    TempDir tmp;
    const std::vector<std::string> names = {"ground-truth", "bart-paradetox", "llama-2-chat", "gpt-3.5"};
    const auto systems = SyntheticRuns(tmp.path(), 30, names);
    auto study = Study::Create({systems, 30, {"annotator-1", "annotator-2"}, 2024}, tmp / "study");
    o.Expect(study->tasks().size() == 120, "tasks " + std::to_string(study->tasks().size()));
    o.Expect(study->expected_records() == 240, "expected " + std::to_string(study->expected_records()));

    const auto tasks_file = ReadFileToString(tmp / "study" / "tasks.json");
    for (const auto& t : study->tasks()) {
      const auto serialized = ToJson(t).dump();
      for (const auto& n : names) {
        o.Expect(serialized.find(n) == std::string::npos && tasks_file.find(n) == std::string::npos,
                 "task leaks system id " + n);
      }
      o.Expect(serialized.find("run-") == std::string::npos, "task leaks a run directory");
    }

    // Ratings constructed so that the gpt-3.5 items sum to 268, 79 and 276
    // over 60 records; the other systems get constant ratings.
    const auto assignments = Json::parse(ReadFileToString(tmp / "study" / "assignments.json"));
    std::size_t g = 0;
    for (const auto& t : study->tasks()) {
      const bool gpt = assignments[t.item_id]["system_id"] == "gpt-3.5";
      for (int who = 0; who < 2; ++who) {
        AnnotationRecord r{who ? "annotator-2" : "annotator-1", t.item_id, 3, 2, 3, ""};
        if (gpt) {
          r.hir_rating = who ? (g < 28 ? 5 : 4) : 4;
          r.hallucination_rating = who && g < 19 ? 2 : 1;
          r.relevance_rating = g < 12 ? 4 : 5;
        }
        study->Submit(r);
      }
      if (gpt) ++g;
    }
    const auto results = study->Results();
    bool found = false;
    for (const auto& m : results.systems) {
      if (m.system_id != "gpt-3.5") continue;
      found = true;
      const auto r2 = [](double v) { return std::round(v * 100) / 100; };
      char buf[64];
      std::snprintf(buf, sizeof buf, "(%.2f, %.2f, %.2f)", m.hir, m.hallucination, m.relevance);
      o.Expect(m.n_records == 60, "gpt-3.5 records " + std::to_string(m.n_records));
      o.Expect(r2(m.hir) == 4.47 && r2(m.hallucination) == 1.32 && r2(m.relevance) == 4.60,
               std::string("gpt-3.5 means ") + buf);
    }
    o.Expect(found, "gpt-3.5 missing from results");
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
