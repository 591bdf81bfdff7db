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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rephrase {

struct GenerationConfig {
  std::string backend_id = "mock";
  std::string model_id = "mock";
  double temperature = 0.7;
  int max_tokens = 256;
  std::chrono::milliseconds request_timeout{60000};
  int max_retries = 3;
  std::optional<std::int64_t> seed;  // only forwarded to backends that accept it
};

// Throws kInvalidArgument on negative temperature or non-positive max_tokens.
void ValidateGenerationConfig(const GenerationConfig& config);

struct TokenUsage {
  std::int64_t prompt = 0;
  std::int64_t completion = 0;
};

struct CompletionRequest {
  std::string_view prompt;
  std::string_view record_id;  // empty when not tied to a corpus record
};

struct Completion {
  std::string text;
  std::optional<TokenUsage> usage;
  // Backends that do no real work (mocks) report a fixed latency so that
  // their runs stay byte-identical; others leave this empty and the caller
  // measures wall time.
  std::optional<std::chrono::milliseconds> reported_latency;
};

// Text-generation backend. Implementations must tolerate concurrent calls and
// must throw (never return empty text) when a call ultimately fails.
class Backend {
 public:
  virtual ~Backend() = default;

  Completion Complete(const CompletionRequest& request, const GenerationConfig& config) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return DoComplete(request, config);
  }

  virtual std::string id() const = 0;

  // Number of Complete() invocations so far.
  std::uint64_t call_count() const { return calls_.load(std::memory_order_relaxed); }

 protected:
  virtual Completion DoComplete(const CompletionRequest& request,
                                const GenerationConfig& config) = 0;

 private:
  std::atomic<std::uint64_t> calls_{0};
};

}  // namespace rephrase
