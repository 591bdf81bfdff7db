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

#include "common/http.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace rephrase {

std::chrono::milliseconds RetryPolicy::Delay(int retry, double u) const {
  const double base = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, retry);
  const double capped = std::min(base, static_cast<double>(max_backoff.count()));
  const double scaled = capped * (1.0 - jitter + 2.0 * jitter * u);
  return std::chrono::milliseconds(static_cast<long long>(std::max(0.0, scaled)));
}

bool IsRetriableStatus(int status) { return status == 429 || status >= 500; }

Url ParseUrl(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "not a URL: " + std::string(url));
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kInvalidArgument, "unsupported URL scheme: " + std::string(url));
  }
  const auto host_begin = scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  Url out;
  if (path_begin == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path_begin));
    out.path = std::string(url.substr(path_begin));
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  }
  if (out.origin.size() == host_begin) {
    throw Error(ErrorCode::kInvalidArgument, "URL has no host: " + std::string(url));
  }
  return out;
}

HttpJsonClient::HttpJsonClient(std::string_view base_url, std::chrono::milliseconds timeout,
                               RetryPolicy retry)
    : url_(ParseUrl(base_url)), timeout_(timeout), retry_(retry) {}

HttpJsonClient::Response HttpJsonClient::PostJson(std::string_view path, const Json& body,
                                                  const Headers& headers) const {
  const std::string full_path = url_.path + std::string(path);
  const std::string payload = body.dump();
  httplib::Headers hdrs(headers.begin(), headers.end());

  thread_local SeededRng jitter_rng(std::random_device{}());
  const int max_attempts = std::max(0, retry_.max_retries) + 1;
  std::string last_failure;
  bool last_was_transport = false;

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(retry_.Delay(attempt - 2, jitter_rng.Unit()));

    httplib::Client client(url_.origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);

    auto res = client.Post(full_path, hdrs, payload, "application/json");
    if (!res) {
      last_was_transport = true;
      last_failure = httplib::to_string(res.error());
      continue;
    }
    last_was_transport = false;
    if (res->status >= 200 && res->status < 300) {
      try {
        return {Json::parse(res->body), attempt};
      } catch (const Json::parse_error&) {
        throw Error(ErrorCode::kBackend, "malformed response body from " + url_.origin +
                                             full_path + " (attempts=" + std::to_string(attempt) +
                                             ")");
      }
    }
    last_failure = "HTTP " + std::to_string(res->status);
    if (!IsRetriableStatus(res->status)) {
      throw Error(ErrorCode::kBackend, url_.origin + full_path + ": " + last_failure +
                                           " (attempts=" + std::to_string(attempt) + ")");
    }
  }
  throw Error(last_was_transport ? ErrorCode::kUnreachable : ErrorCode::kBackend,
              url_.origin + full_path + ": " + last_failure + " (attempts=" +
                  std::to_string(max_attempts) + ")");
}

}  // namespace rephrase
