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

#include <fstream>
#include <set>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/http.hpp"
#include "common/jsonl.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "test_util.hpp"

using namespace rephrase;
using rephrase::testing::TempDir;

TEST_SUITE("common") {
  TEST_CASE("sha256 matches the published test vectors") {
    CHECK(Sha256Hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(Sha256Hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("sha256 of a file equals sha256 of its bytes") {
    TempDir dir;
    const std::string content = "line one\nline two\n";
    WriteFileAtomic(dir / "f.txt", content);
    CHECK(Sha256HexOfFile(dir / "f.txt") == Sha256Hex(content));
    CHECK_THROWS_AS(Sha256HexOfFile(dir / "missing"), Error);
  }

  TEST_CASE("trim strips unicode whitespace") {
    CHECK(Trim("  a b \t\n") == "a b");
    CHECK(Trim(" x ") == "x");
    CHECK(Trim("   ").empty());
  }

  TEST_CASE("codepoint length counts characters, not bytes") {
    CHECK(CodepointLength("abc") == 3);
    CHECK(CodepointLength("café") == 4);
    CHECK(CodepointLength("’") == 1);
  }

  TEST_CASE("UtcTimestamp honours SOURCE_DATE_EPOCH") {
    ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
    CHECK(UtcTimestamp() == "1970-01-02T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    CHECK(UtcTimestamp().size() == 20);
  }

  TEST_CASE("csv parses quoted fields, embedded newlines and CRLF") {
    const auto rows = ParseCsv("a,b\r\n\"x, y\",\"he said \"\"hi\"\"\"\n\"multi\nline\",z\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].fields == std::vector<std::string>{"a", "b"});
    CHECK(rows[1].fields == std::vector<std::string>{"x, y", "he said \"hi\""});
    CHECK(rows[2].fields == std::vector<std::string>{"multi\nline", "z"});
    CHECK(rows[2].line_number == 3);
    CHECK_THROWS_AS(ParseCsv("\"open"), Error);
  }

  TEST_CASE("csv escape round-trips") {
    const std::vector<std::string> fields = {"plain", "comma,here", "quote\"d", "new\nline", ""};
    const auto rows = ParseCsv(CsvLine(fields));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == fields);
  }

  TEST_CASE("jsonl reader reports the failing line") {
    TempDir dir;
    WriteFileAtomic(dir / "x.jsonl", "{\"a\":1}\n\n{broken\n");
    try {
      ReadJsonLines(dir / "x.jsonl");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    WriteFileAtomic(dir / "y.jsonl", "{\"a\":1}\n\n{\"a\":2}\n");
    const auto lines = ReadJsonLines(dir / "y.jsonl");
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].line_number == 3);
    CHECK(ToJsonLines({Json{{"a", 1}}, Json{{"b", 2}}}) == "{\"a\":1}\n{\"b\":2}\n");
  }

  TEST_CASE("seeded rng is reproducible and uniform-ish") {
    SeededRng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a.Next();
      CHECK(x == b.Next());
      differs = differs || x != c.Next();
    }
    CHECK(differs);
    SeededRng r(7);
    std::vector<int> counts(5);
    for (int i = 0; i < 5000; ++i) ++counts[r.Below(5)];
    for (int n : counts) CHECK(n > 850);
    for (int i = 0; i < 1000; ++i) {
      const double u = r.Unit();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("SampleIndices returns sorted distinct indices and is seed-stable") {
    const auto s = SampleIndices(100, 30, 9);
    CHECK(s.size() == 30);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 30);
    CHECK(s.back() < 100);
    CHECK(SampleIndices(100, 30, 9) == s);
    CHECK(SampleIndices(100, 30, 10) != s);
    CHECK(SampleIndices(5, 5, 1) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(MixSeed(1, 2) != MixSeed(2, 1));
  }

  TEST_CASE("retry delay grows geometrically and respects the cap") {
    RetryPolicy p;
    p.initial_backoff = std::chrono::milliseconds(100);
    p.multiplier = 2.0;
    p.max_backoff = std::chrono::milliseconds(1000);
    p.jitter = 0.0;
    CHECK(p.Delay(0, 0.5).count() == 100);
    CHECK(p.Delay(1, 0.5).count() == 200);
    CHECK(p.Delay(3, 0.5).count() == 800);
    CHECK(p.Delay(4, 0.5).count() == 1000);
    p.jitter = 0.2;
    CHECK(p.Delay(0, 0.0).count() == 80);
    CHECK(p.Delay(0, 1.0).count() == 120);
  }

  TEST_CASE("retriable statuses") {
    CHECK(IsRetriableStatus(429));
    CHECK(IsRetriableStatus(500));
    CHECK(IsRetriableStatus(503));
    CHECK_FALSE(IsRetriableStatus(400));
    CHECK_FALSE(IsRetriableStatus(401));
    CHECK_FALSE(IsRetriableStatus(404));
  }

  TEST_CASE("ParseUrl splits origin and path") {
    auto u = ParseUrl("https://api.example.com/v1/");
    CHECK(u.origin == "https://api.example.com");
    CHECK(u.path == "/v1");
    u = ParseUrl("http://127.0.0.1:8080");
    CHECK(u.origin == "http://127.0.0.1:8080");
    CHECK(u.path.empty());
    CHECK_THROWS_AS(ParseUrl("ftp://x"), Error);
    CHECK_THROWS_AS(ParseUrl("nohost"), Error);
    CHECK_THROWS_AS(ParseUrl("http://"), Error);
  }

  TEST_CASE("error carries its code") {
    const Error e(ErrorCode::kValidation, "bad");
    CHECK(e.code() == ErrorCode::kValidation);
    CHECK(std::string(e.what()) == "bad");
    CHECK(ErrorCodeName(ErrorCode::kUnreachable) == std::string_view("unreachable"));
  }
}
