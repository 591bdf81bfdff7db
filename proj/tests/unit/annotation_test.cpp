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

#include <doctest.h>
#include <httplib.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "annotation/kappa.hpp"
#include "annotation/server.hpp"
#include "annotation/study.hpp"
#include "common/error.hpp"
#include "common/jsonl.hpp"
#include "common/text.hpp"
#include "oracles/oracles.hpp"
#include "pipeline/run.hpp"
#include "test_util.hpp"

using namespace rephrase;
using rephrase::testing::TempDir;

namespace {

// A synthetic corpus of n records and one imported run per system, so that
// each run has n scored instances.
std::vector<StudySystem> MakeRuns(const std::filesystem::path& root, std::size_t n,
                                  const std::vector<std::string>& systems) {
  std::vector<Json> corpus;
  for (std::size_t i = 0; i < n; ++i) {
    corpus.push_back({{"id", "r" + std::to_string(i)},
                      {"hate_text", "record " + std::to_string(i) + " is an evil menace"},
                      {"reference_text", "record " + std::to_string(i) + " is a concern"}});
  }
  WriteJsonLines(root / "corpus.jsonl", corpus);
  std::vector<StudySystem> out;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    const auto& sys = systems[k];
    std::vector<Json> gens;
    for (std::size_t i = 0; i < n; ++i) {
      gens.push_back({{"id", "r" + std::to_string(i)}, {"text", "take " + std::to_string(k) + ": record " + std::to_string(i) + " is fine"}});
    }
    WriteJsonLines(root / (sys + ".jsonl"), gens);
    ImportConfig ic;
    ic.generations_path = root / (sys + ".jsonl");
    ic.system_id = sys;
    ic.corpus_path = root / "corpus.jsonl";
    ic.out_dir = root / ("run-" + sys);
    ic.max_concurrency = 1;
    ImportExternalGenerations(ic);
    out.push_back({sys, ic.out_dir});
  }
  return out;
}

AnnotationRecord Rating(std::string annotator, std::string item, int h, int hal, int rel) {
  return {std::move(annotator), std::move(item), h, hal, rel, ""};
}

}  // namespace

TEST_SUITE("annotation") {
  TEST_CASE("kappa closed cases") {
    const std::vector<int> a = {1, 2, 3, 4, 5, 1, 2, 3};
    auto same = CohenKappa(a, a);
    CHECK(same.kappa == doctest::Approx(1.0));
    CHECK(same.observed == doctest::Approx(1.0));
    // Everyone says 3: p_e = 1, defined as perfect agreement.
    const std::vector<int> threes(10, 3);
    CHECK(CohenKappa(threes, threes).kappa == 1.0);
    // Perfect disagreement on two balanced labels: p_o = 0, p_e = 1/2.
    CHECK(CohenKappa(std::vector<int>{1, 2, 1, 2}, std::vector<int>{2, 1, 2, 1}).kappa == doctest::Approx(-1.0));
    // Hand-computed 2x2 inside the 5-point scale:
    // a = [1,1,2,2], b = [1,2,2,2]: p_o = 3/4, p_e = (2/4)(1/4) + (2/4)(3/4) = 1/2.
    const auto r = CohenKappa(std::vector<int>{1, 1, 2, 2}, std::vector<int>{1, 2, 2, 2});
    CHECK(r.observed == doctest::Approx(0.75));
    CHECK(r.expected == doctest::Approx(0.5));
    CHECK(r.kappa == doctest::Approx(0.5));
    CHECK(r.confusion[0][1] == 1);
    CHECK(r.n_items == 4);
    CHECK_THROWS_AS(CohenKappa(std::vector<int>{1}, std::vector<int>{1, 2}), Error);
    CHECK_THROWS_AS(CohenKappa(std::vector<int>{}, std::vector<int>{}), Error);
    CHECK_THROWS_AS(CohenKappa(std::vector<int>{0}, std::vector<int>{1}), Error);
    CHECK_THROWS_AS(CohenKappa(std::vector<int>{6}, std::vector<int>{1}), Error);
  }

  TEST_CASE("kappa matches the oracle, stays bounded and ignores relabelling") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> d(1, 5);
    const std::vector<int> perm = {0, 3, 5, 1, 2, 4};  // 1->3, 2->5, ...
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> a(1000), b(1000);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = d(rng);
        b[i] = (i % 3 == 0) ? a[i] : d(rng);
      }
      const auto got = CohenKappa(a, b);
      const auto want = oracle::CohenKappa(a, b);
      CHECK(std::abs(got.kappa - want.kappa) < 1e-12);
      CHECK(std::abs(got.observed - want.p_o) < 1e-12);
      CHECK(std::abs(got.expected - want.p_e) < 1e-12);
      CHECK(got.kappa >= -1.0);
      CHECK(got.kappa <= 1.0);
      std::vector<int> pa(a.size()), pb(b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        pa[i] = perm[a[i]];
        pb[i] = perm[b[i]];
      }
      CHECK(std::abs(CohenKappa(pa, pb).kappa - got.kappa) < 1e-12);
    }
  }

  TEST_CASE("record validation names the field") {
    Json j = {{"annotator_id", "annotator-1"}, {"item_id", "x"}, {"hir_rating", 6},
              {"hallucination_rating", 1}, {"relevance_rating", 1}};
    try {
      AnnotationRecordFromJson(j);
      FAIL("expected validation error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kValidation);
      CHECK(std::string(e.what()).find("hir_rating") != std::string::npos);
    }
    j["hir_rating"] = 2.5;
    CHECK_THROWS_AS(AnnotationRecordFromJson(j), Error);
    j["hir_rating"] = 3;
    j.erase("relevance_rating");
    CHECK_THROWS_AS(AnnotationRecordFromJson(j), Error);
    j["relevance_rating"] = 5;
    CHECK(AnnotationRecordFromJson(j).relevance_rating == 5);
  }

  TEST_CASE("study creation: sizes, blindness and seed determinism") {
    TempDir tmp;
    const auto systems = MakeRuns(tmp.path(), 40, {"alpha", "beta", "gamma", "delta"});
    StudyConfig config{systems, 30, {"annotator-1", "annotator-2"}, 11};
    auto s1 = Study::Create(config, tmp.path() / "s1");
    auto s2 = Study::Create(config, tmp.path() / "s2");
    CHECK(s1->tasks().size() == 120);
    CHECK(s1->expected_records() == 240);
    CHECK(ReadFileToString(tmp.path() / "s1" / "tasks.json") == ReadFileToString(tmp.path() / "s2" / "tasks.json"));
    CHECK(ReadFileToString(tmp.path() / "s1" / "assignments.json") ==
          ReadFileToString(tmp.path() / "s2" / "assignments.json"));

    config.seed = 12;
    auto s3 = Study::Create(config, tmp.path() / "s3");
    CHECK(ReadFileToString(tmp.path() / "s1" / "tasks.json") != ReadFileToString(tmp.path() / "s3" / "tasks.json"));

    // Item ids are distinct; tasks expose no system or run identifiers.
    std::set<std::string> ids;
    for (const auto& t : s1->tasks()) ids.insert(t.item_id);
    CHECK(ids.size() == 120);
    const auto tasks_json = ReadFileToString(tmp.path() / "s1" / "tasks.json");
    for (const auto& sys : {"alpha", "beta", "gamma", "delta", "run-", "r1\""}) {
      CAPTURE(sys);
      CHECK(tasks_json.find(sys) == std::string::npos);
    }
    for (const auto& t : s1->tasks()) {
      const auto keys = ToJson(t);
      CHECK(keys.size() == 4);
      CHECK(keys.contains("item_id"));
      CHECK(keys.contains("original_text"));
      CHECK(keys.contains("rephrased_text"));
    }

    // Systems interleave: the first 30 tasks are not all one system.
    const auto assignments = Json::parse(ReadFileToString(tmp.path() / "s1" / "assignments.json"));
    std::set<std::string> first;
    for (std::size_t i = 0; i < 30; ++i) first.insert(assignments[s1->tasks()[i].item_id]["system_id"]);
    CHECK(first.size() > 1);

    config.per_system = 41;
    CHECK_THROWS_AS(Study::Create(config, tmp.path() / "s4"), Error);
  }

  TEST_CASE("submissions: validation, progress, replay and completion gate") {
    TempDir tmp;
    const auto systems = MakeRuns(tmp.path(), 6, {"alpha", "beta"});
    auto study = Study::Create({systems, 3, {"annotator-1", "annotator-2"}, 5}, tmp.path() / "study");
    REQUIRE(study->tasks().size() == 6);

    CHECK_THROWS_AS(study->Submit(Rating("nobody", study->tasks()[0].item_id, 1, 1, 1)), Error);
    CHECK_THROWS_AS(study->Submit(Rating("annotator-1", "item-unknown", 1, 1, 1)), Error);
    CHECK_THROWS_AS(study->Submit(Rating("annotator-1", study->tasks()[0].item_id, 0, 1, 1)), Error);
    CHECK(study->Progress().records == 0);

    CHECK(study->NextTask("annotator-1")->item_id == study->tasks()[0].item_id);
    for (const auto& t : study->tasks()) study->Submit(Rating("annotator-1", t.item_id, 4, 2, 5));
    CHECK_FALSE(study->NextTask("annotator-1").has_value());
    CHECK(study->NextTask("annotator-2")->display_index == 0);
    try {
      study->Results();
      FAIL("expected incomplete-study error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kState);
    }
    CHECK(study->Results(true).records == 6);

    // Resubmission replaces the previous rating.
    study->Submit(Rating("annotator-1", study->tasks()[0].item_id, 5, 2, 5));
    CHECK(study->Progress().records == 6);

    for (std::size_t i = 0; i < 3; ++i) study->Submit(Rating("annotator-2", study->tasks()[i].item_id, 4, 2, 5));
    {
      // Simulate a crash mid-write: a torn trailing line is ignored on replay.
      std::ofstream(tmp.path() / "study" / "journal.jsonl", std::ios::app) << "{\"annotator_id\": \"annot";
    }
    auto reopened = Study::Open(tmp.path() / "study");
    const auto progress = reopened->Progress();
    CHECK(progress.records == 9);
    CHECK(progress.expected == 12);
    CHECK(progress.annotators[1].done == 3);
    CHECK(reopened->NextTask("annotator-2")->display_index == 3);
  }

  TEST_CASE("results reproduce hand-computed per-system means and agreement") {
    // 30 items, two annotators, 60 records per system: column sums 268, 79
    // and 276 give means of 4.47, 1.32 and 4.60.
    TempDir tmp;
    const auto systems = MakeRuns(tmp.path(), 30, {"gpt"});
    auto study = Study::Create({systems, 30, {"annotator-1", "annotator-2"}, 3}, tmp.path() / "study");
    REQUIRE(study->tasks().size() == 30);
    // hir: 28 items at (4,5) = 252, then two items at (4,4) = 16 -> 268.
    // hallucination: all 1 (60) plus 19 items where annotator-2 says 2 -> 79.
    // relevance: all (5,5) = 300 minus 24 across twelve (4,4) items -> 276.
    std::vector<int> a_hir, b_hir;
    for (std::size_t i = 0; i < 30; ++i) {
      const auto& id = study->tasks()[i].item_id;
      const int h2 = i < 28 ? 5 : 4;
      const int hal2 = i < 19 ? 2 : 1;
      const int rel = i < 12 ? 4 : 5;
      study->Submit(Rating("annotator-1", id, 4, 1, rel));
      study->Submit(Rating("annotator-2", id, h2, hal2, rel));
      a_hir.push_back(4);
      b_hir.push_back(h2);
    }
    const auto results = study->Results();
    REQUIRE(results.systems.size() == 1);
    const auto& m = results.systems[0];
    CHECK(m.system_id == "gpt");
    CHECK(m.n_records == 60);
    CHECK(m.hir == doctest::Approx(268.0 / 60));
    CHECK(m.hallucination == doctest::Approx(79.0 / 60));
    CHECK(m.relevance == doctest::Approx(276.0 / 60));
    CHECK(std::round(m.hir * 100) / 100 == doctest::Approx(4.47));
    CHECK(std::round(m.hallucination * 100) / 100 == doctest::Approx(1.32));
    CHECK(std::round(m.relevance * 100) / 100 == doctest::Approx(4.60));
    CHECK(results.agreement.at("hir").kappa == doctest::Approx(oracle::CohenKappa(a_hir, b_hir).kappa));
    CHECK(results.agreement.at("relevance").kappa == doctest::Approx(1.0));
    CHECK(results.agreement.at("pooled").n_items == 90);
    CHECK(ToJson(results)["complete"] == true);
  }

  TEST_CASE("annotation HTTP API round trip") {
    TempDir tmp;
    const auto systems = MakeRuns(tmp.path(), 4, {"alpha"});
    auto study = Study::Create({systems, 2, {"annotator-1", "annotator-2"}, 1}, tmp.path() / "study");
    std::filesystem::create_directories(tmp.path() / "static");
    WriteFileAtomic(tmp.path() / "static" / "index.html", "<html>ui</html>");
    AnnotationServer server(*study, tmp.path() / "static");
    const int port = server.BindAnyPort();
    std::thread t([&] { server.Listen(); });
    httplib::Client cli("127.0.0.1", port);

    auto health = cli.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(Json::parse(health->body)["status"] == "ok");

    auto index = cli.Get("/index.html");
    REQUIRE(index);
    CHECK(index->body == "<html>ui</html>");

    auto next = cli.Get("/api/tasks/next?annotator=annotator-1");
    REQUIRE(next);
    const auto nj = Json::parse(next->body);
    CHECK(nj["done"] == false);
    CHECK(nj["total"] == 2);
    const std::string item = nj["task"]["item_id"];
    CHECK_FALSE(nj["task"].contains("system_id"));

    auto unknown = cli.Get("/api/tasks/next?annotator=stranger");
    REQUIRE(unknown);
    CHECK(unknown->status == 400);

    const Json bad = {{"annotator_id", "annotator-1"}, {"item_id", item}, {"hir_rating", 9},
                      {"hallucination_rating", 1}, {"relevance_rating", 1}};
    auto rejected = cli.Post("/api/annotations", bad.dump(), "application/json");
    REQUIRE(rejected);
    CHECK(rejected->status == 400);
    CHECK(Json::parse(rejected->body)["error"]["message"].get<std::string>().find("hir_rating") != std::string::npos);
    auto garbage = cli.Post("/api/annotations", "{not json", "application/json");
    REQUIRE(garbage);
    CHECK(garbage->status == 400);

    Json good = bad;
    good["hir_rating"] = 4;
    auto ok = cli.Post("/api/annotations", good.dump(), "application/json");
    REQUIRE(ok);
    CHECK(ok->status == 200);

    auto results = cli.Get("/api/results");
    REQUIRE(results);
    CHECK(results->status == 409);
    auto partial = cli.Get("/api/results?partial=1");
    REQUIRE(partial);
    CHECK(partial->status == 200);
    CHECK(Json::parse(partial->body)["records"] == 1);

    auto progress = cli.Get("/api/progress");
    REQUIRE(progress);
    CHECK(Json::parse(progress->body)["records"] == 1);

    server.Stop();
    t.join();
    CHECK_FALSE(server.running());
  }
}
