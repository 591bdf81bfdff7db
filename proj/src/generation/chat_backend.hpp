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

#include <string>

#include "common/http.hpp"
#include "generation/backend.hpp"

namespace rephrase {

struct ChatBackendOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;  // sent as a bearer token when non-empty
  RetryPolicy retry;
};

// Chat-completions JSON client: one user message carrying the whole prompt.
class HttpChatBackend final : public Backend {
 public:
  explicit HttpChatBackend(ChatBackendOptions options);

  std::string id() const override { return "http"; }

  // Request body sent for `prompt` under `config`.
  static Json BuildRequest(std::string_view prompt, const GenerationConfig& config);
  // Extracts choices[0].message.content and usage; throws kBackend if absent.
  static Completion ParseResponse(const Json& body);

 protected:
  Completion DoComplete(const CompletionRequest& request, const GenerationConfig& config) override;

 private:
  ChatBackendOptions options_;
};

}  // namespace rephrase
