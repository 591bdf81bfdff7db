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

#include "generation/mock_backend.hpp"

#include "common/error.hpp"
#include "common/text.hpp"
#include "prompts/prompts.hpp"

namespace rephrase {

MockBackend::MockBackend(Options options) : options_(std::move(options)) {
  for (const auto& rule : options_.rules) {
    auto flags = std::regex::ECMAScript;
    if (rule.icase) flags |= std::regex::icase;
    try {
      compiled_.emplace_back(rule.pattern, flags);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kParse, "mock rule /" + rule.pattern + "/: " + e.what());
    }
  }
}

MockBackend::Options MockBackend::ParseOptions(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "mock rules: expected a JSON object");
  Options o;
  try {
    for (const auto& r : j.value("rules", Json::array())) {
      o.rules.push_back({r.at("pattern").get<std::string>(), r.value("replacement", std::string()),
                         r.value("icase", false)});
    }
    const Json canned = j.value("canned", Json::object());
    for (const auto& [id, text] : canned.items()) {
      o.canned[id] = text.get<std::string>();
    }
    for (const auto& id : j.value("fail_ids", Json::array())) o.fail_ids.insert(id.get<std::string>());
    o.latency = std::chrono::milliseconds(j.value("latency_ms", 0));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("mock rules: ") + e.what());
  }
  return o;
}

MockBackend::Options MockBackend::LoadOptions(const std::filesystem::path& path) {
  try {
    return ParseOptions(Json::parse(ReadFileToString(path)));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

std::string_view MockBackend::ExtractInput(std::string_view prompt) {
  constexpr std::string_view kMarker = "Hate Speech: ";
  auto body = prompt;
  if (body.ends_with(kOutputCue)) body.remove_suffix(kOutputCue.size());
  const auto pos = body.rfind(kMarker);
  if (pos == std::string_view::npos) return Trim(prompt);
  return Trim(body.substr(pos + kMarker.size()));
}

Completion MockBackend::DoComplete(const CompletionRequest& request, const GenerationConfig&) {
  const std::string id(request.record_id);
  if (options_.fail_ids.contains(id)) {
    throw Error(ErrorCode::kBackend, "mock backend configured to fail for record '" + id + "'");
  }
  Completion out;
  out.reported_latency = options_.latency;
  if (auto it = options_.canned.find(id); it != options_.canned.end()) {
    out.text = it->second;
    return out;
  }
  std::string text(ExtractInput(request.prompt));
  for (std::size_t i = 0; i < compiled_.size(); ++i) {
    text = std::regex_replace(text, compiled_[i], options_.rules[i].replacement);
  }
  out.text = std::move(text);
  return out;
}

}  // namespace rephrase
