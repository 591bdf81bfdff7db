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

#include "generation/chat_backend.hpp"

#include "common/error.hpp"

namespace rephrase {

HttpChatBackend::HttpChatBackend(ChatBackendOptions options) : options_(std::move(options)) {
  ParseUrl(options_.base_url);
}

Json HttpChatBackend::BuildRequest(std::string_view prompt, const GenerationConfig& config) {
  Json body = {
      {"model", config.model_id},
      {"messages", Json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", config.temperature},
      {"max_tokens", config.max_tokens},
  };
  if (config.seed) body["seed"] = *config.seed;
  return body;
}

Completion HttpChatBackend::ParseResponse(const Json& body) {
  const Json* content = nullptr;
  if (body.is_object() && body.contains("choices") && body["choices"].is_array() &&
      !body["choices"].empty()) {
    const auto& choice = body["choices"][0];
    if (choice.is_object() && choice.contains("message") && choice["message"].is_object()) {
      auto it = choice["message"].find("content");
      if (it != choice["message"].end() && it->is_string()) content = &*it;
    }
  }
  if (!content) {
    throw Error(ErrorCode::kBackend, "malformed chat response: missing choices[0].message.content");
  }
  Completion out;
  out.text = content->get<std::string>();
  if (auto u = body.find("usage"); u != body.end() && u->is_object()) {
    TokenUsage usage;
    usage.prompt = u->value("prompt_tokens", std::int64_t{0});
    usage.completion = u->value("completion_tokens", std::int64_t{0});
    out.usage = usage;
  }
  return out;
}

Completion HttpChatBackend::DoComplete(const CompletionRequest& request,
                                       const GenerationConfig& config) {
  RetryPolicy retry = options_.retry;
  retry.max_retries = config.max_retries;
  HttpJsonClient client(options_.base_url, config.request_timeout, retry);

  HttpJsonClient::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  auto response = client.PostJson("/chat/completions", BuildRequest(request.prompt, config), headers);
  return ParseResponse(response.body);
}

}  // namespace rephrase
