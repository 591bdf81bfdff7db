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

#include <mutex>

#include "common/error.hpp"
#include "common/http.hpp"
#include "generation/chat_backend.hpp"
#include "scoring/http_providers.hpp"
#include "stub_server.hpp"

using namespace rephrase;
using rephrase::testing::StubServer;

namespace {

RetryPolicy FastRetry(int retries) {
  RetryPolicy p;
  p.max_retries = retries;
  p.initial_backoff = std::chrono::milliseconds(1);
  p.max_backoff = std::chrono::milliseconds(2);
  return p;
}

Json ChatReply(const std::string& content) {
  return {{"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}},
          {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 5}}}};
}

}  // namespace

TEST_SUITE("http") {
  TEST_CASE("chat backend sends the documented request and parses the reply") {
    StubServer stub;
    std::mutex mu;
    Json seen;
    std::string auth;
    stub.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      seen = Json::parse(req.body);
      auth = req.get_header_value("Authorization");
      res.set_content(ChatReply("Non-hate Speech: calm").dump(), "application/json");
    });
    stub.Start();

    ChatBackendOptions opts;
    opts.base_url = stub.url("/v1");
    opts.api_key = "sk-test";
    opts.retry = FastRetry(0);
    HttpChatBackend backend(opts);
    GenerationConfig cfg;
    cfg.backend_id = "http";
    cfg.model_id = "gpt-3.5-turbo";
    cfg.temperature = 0.0;
    cfg.max_tokens = 64;
    cfg.seed = 5;
    const auto c = backend.Complete({"the prompt", "r1"}, cfg);
    CHECK(c.text == "Non-hate Speech: calm");
    REQUIRE(c.usage.has_value());
    CHECK(c.usage->prompt == 11);
    CHECK(c.usage->completion == 5);
    CHECK(auth == "Bearer sk-test");
    CHECK(seen["model"] == "gpt-3.5-turbo");
    CHECK(seen["messages"][0]["role"] == "user");
    CHECK(seen["messages"][0]["content"] == "the prompt");
    CHECK(seen["temperature"] == 0.0);
    CHECK(seen["max_tokens"] == 64);
    CHECK(seen["seed"] == 5);
    CHECK(backend.call_count() == 1);
  }

  TEST_CASE("retries 5xx and 429, then succeeds") {
    StubServer stub;
    std::atomic<int> calls{0};
    stub.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
      const int n = ++calls;
      if (n == 1) {
        res.status = 503;
      } else if (n == 2) {
        res.status = 429;
      } else {
        res.set_content(ChatReply("ok").dump(), "application/json");
      }
    });
    stub.Start();
    ChatBackendOptions opts;
    opts.base_url = stub.url();
    opts.retry = FastRetry(3);
    HttpChatBackend backend(opts);
    GenerationConfig cfg;
    cfg.max_retries = 3;
    CHECK(backend.Complete({"p", ""}, cfg).text == "ok");
    CHECK(calls == 3);
  }

  TEST_CASE("a 4xx is not retried") {
    StubServer stub;
    std::atomic<int> calls{0};
    stub.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 401;
      res.set_content(R"({"error":"bad key"})", "application/json");
    });
    stub.Start();
    ChatBackendOptions opts;
    opts.base_url = stub.url();
    HttpChatBackend backend(opts);
    GenerationConfig cfg;
    cfg.max_retries = 3;
    try {
      backend.Complete({"p", ""}, cfg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBackend);
      CHECK(std::string(e.what()).find("attempts=1") != std::string::npos);
    }
    CHECK(calls == 1);
  }

  TEST_CASE("persistent 5xx exhausts exactly retries + 1 attempts") {
    StubServer stub;
    std::atomic<int> calls{0};
    stub.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 500;
    });
    stub.Start();
    ChatBackendOptions opts;
    opts.base_url = stub.url();
    opts.retry = FastRetry(0);
    HttpChatBackend backend(opts);
    GenerationConfig cfg;
    cfg.max_retries = 2;
    try {
      backend.Complete({"p", ""}, cfg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBackend);
      CHECK(std::string(e.what()).find("attempts=3") != std::string::npos);
    }
    CHECK(calls == 3);
  }

  TEST_CASE("connection failure is reported as unreachable") {
    ChatBackendOptions opts;
    opts.base_url = "http://127.0.0.1:" + std::to_string(rephrase::testing::ClosedPort());
    opts.retry = FastRetry(0);
    HttpChatBackend backend(opts);
    GenerationConfig cfg;
    cfg.max_retries = 1;
    cfg.request_timeout = std::chrono::milliseconds(500);
    try {
      backend.Complete({"p", ""}, cfg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnreachable);
      CHECK(std::string(e.what()).find("attempts=2") != std::string::npos);
    }
    CHECK(backend.call_count() == 1);
  }

  TEST_CASE("malformed chat replies are backend errors") {
    CHECK_THROWS_AS(HttpChatBackend::ParseResponse(Json::parse(R"({"choices": []})")), Error);
    CHECK_THROWS_AS(HttpChatBackend::ParseResponse(Json::parse(R"({"choices": [{"message": {}}]})")), Error);
    CHECK_FALSE(HttpChatBackend::ParseResponse(Json::parse(R"({"choices": [{"message": {"content": "x"}}]})"))
                    .usage.has_value());
  }

  TEST_CASE("toxicity client speaks the comment-analysis wire format and memoizes") {
    StubServer stub;
    std::atomic<int> calls{0};
    std::mutex mu;
    Json seen;
    std::string key;
    stub.server().Post("/v1alpha1/comments:analyze", [&](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      std::lock_guard lock(mu);
      seen = Json::parse(req.body);
      key = req.get_param_value("key");
      const double v = seen["comment"]["text"] == "nasty" ? 0.9 : 0.1;
      res.set_content(Json({{"attributeScores", {{"TOXICITY", {{"summaryScore", {{"value", v}}}}}}}}).dump(),
                      "application/json");
    });
    stub.Start();
    HttpProviderOptions opts;
    opts.url = stub.url("/v1alpha1/comments:analyze");
    opts.api_key = "k123";
    opts.retry = FastRetry(0);
    PerspectiveToxicity tox(opts);
    CHECK(tox.Score("nasty") == doctest::Approx(0.9));
    CHECK(tox.Score("nasty") == doctest::Approx(0.9));
    CHECK(tox.Score("kind") == doctest::Approx(0.1));
    CHECK(calls == 2);
    CHECK(key == "k123");
    CHECK(seen["requestedAttributes"].contains("TOXICITY"));
    CHECK(seen["comment"]["text"] == "kind");
  }

  TEST_CASE("toxicity reply validation") {
    CHECK(PerspectiveToxicity::ParseResponse(
              Json::parse(R"({"attributeScores":{"TOXICITY":{"summaryScore":{"value":0.25}}}})")) == 0.25);
    CHECK_THROWS_AS(PerspectiveToxicity::ParseResponse(Json::parse(R"({"attributeScores":{}})")), Error);
    CHECK_THROWS_AS(PerspectiveToxicity::ParseResponse(
                        Json::parse(R"({"attributeScores":{"TOXICITY":{"summaryScore":{"value":1.5}}}})")),
                    Error);
  }

  TEST_CASE("embedding, log-prob and classifier clients") {
    StubServer stub;
    stub.server().Post("/embed", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"data":[{"embedding":[0.5,0.25]}]})", "application/json");
    });
    stub.server().Post("/lp", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"choices":[{"logprobs":{"token_logprobs":[null,-1.0,-2.0]}}]})", "application/json");
    });
    stub.server().Post("/cls", [](const httplib::Request& req, httplib::Response& res) {
      const auto text = Json::parse(req.body)["inputs"].get<std::string>();
      const double accept = text == "good sentence" ? 0.8 : 0.3;
      res.set_content(Json::array({Json::array({{{"label", "LABEL_1"}, {"score", accept}},
                                                {{"label", "LABEL_0"}, {"score", 1 - accept}}})})
                          .dump(),
                      "application/json");
    });
    stub.Start();
    HttpProviderOptions opts;
    opts.retry = FastRetry(0);
    opts.url = stub.url("/embed");
    HttpEmbedding emb(opts);
    CHECK(emb.Embed("x") == std::vector<double>{0.5, 0.25});
    opts.url = stub.url("/lp");
    HttpLogProb lp(opts);
    CHECK(lp.TokenLogProbs("x") == std::vector<double>{-1.0, -2.0});
    opts.url = stub.url("/cls");
    HttpClassifier cls(opts, "LABEL_1");
    CHECK(cls.Classify("good sentence"));
    CHECK_FALSE(cls.Classify("bad"));
    CHECK(HttpClassifier::TopLabel(Json::parse(R"([{"label":"a","score":0.1},{"label":"b","score":0.9}])")) == "b");
    CHECK_THROWS_AS(HttpClassifier::TopLabel(Json::parse("[]")), Error);
  }
}
