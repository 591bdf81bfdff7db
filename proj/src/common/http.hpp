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

#include <chrono>
#include <map>
#include <string>
#include <string_view>

#include "common/jsonl.hpp"

namespace rephrase {

// Exponential backoff with multiplicative jitter. Only transport failures
// (including timeouts), HTTP 429 and HTTP 5xx are retried.
struct RetryPolicy {
  int max_retries = 3;  // retries after the first attempt
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
  double jitter = 0.2;  // delay is scaled by a factor in [1 - jitter, 1 + jitter]

  // Delay before retry number `retry` (0-based) given a uniform draw u in [0, 1).
  std::chrono::milliseconds Delay(int retry, double u) const;
};

bool IsRetriableStatus(int status);

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash; may be empty
};

// Throws kInvalidArgument for anything that is not http(s)://host[...].
Url ParseUrl(std::string_view url);

// Minimal JSON-over-HTTP client. Each call opens its own connection, so one
// instance can be shared across threads.
class HttpJsonClient {
 public:
  using Headers = std::multimap<std::string, std::string>;

  struct Response {
    Json body;
    int attempts = 0;
  };

  HttpJsonClient(std::string_view base_url, std::chrono::milliseconds timeout, RetryPolicy retry);

  // POSTs `body` to base path + `path`. Throws kUnreachable when the last
  // attempt failed at the transport level, kBackend for HTTP errors and
  // malformed bodies. The message always states how many attempts were made.
  Response PostJson(std::string_view path, const Json& body, const Headers& headers = {}) const;

  const Url& url() const { return url_; }

 private:
  Url url_;
  std::chrono::milliseconds timeout_;
  RetryPolicy retry_;
};

}  // namespace rephrase
