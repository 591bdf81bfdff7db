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
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "common/jsonl.hpp"
#include "generation/backend.hpp"

namespace rephrase {

// Offline backend driven by a rule table. For each call it recovers the
// hateful text from the rendered prompt (the text between the last
// "Hate Speech: " and the closing cue), applies the ordered regex rules and
// returns the result. Canned outputs keyed by record id take precedence;
// ids listed in fail_ids throw kBackend.
class MockBackend final : public Backend {
 public:
  struct Rule {
    std::string pattern;
    std::string replacement;
    bool icase = false;
  };

  struct Options {
    std::vector<Rule> rules;
    std::map<std::string, std::string> canned;
    std::set<std::string> fail_ids;
    std::chrono::milliseconds latency{0};
  };

  explicit MockBackend(Options options);

  // Rule file schema: {"rules": [{"pattern", "replacement", "icase"}],
  // "canned": {id: text}, "fail_ids": [id], "latency_ms": n}.
  static Options ParseOptions(const Json& j);
  static Options LoadOptions(const std::filesystem::path& path);

  std::string id() const override { return "mock"; }

  // Text between the last "Hate Speech: " marker and the trailing cue, or the
  // whole prompt when no marker is present.
  static std::string_view ExtractInput(std::string_view prompt);

 protected:
  Completion DoComplete(const CompletionRequest& request, const GenerationConfig& config) override;

 private:
  Options options_;
  std::vector<std::regex> compiled_;
};

}  // namespace rephrase
