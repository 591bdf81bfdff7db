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
#include <optional>
#include <string>

#include "common/jsonl.hpp"
#include "corpus/corpus.hpp"
#include "generation/backend.hpp"
#include "generation/cache.hpp"
#include "prompts/prompts.hpp"

namespace rephrase {

inline constexpr std::string_view kExternalBackend = "external";

struct GenerationResult {
  std::string record_id;
  std::optional<PromptKind> prompt_kind;  // empty for imported system outputs
  std::string model_id;
  std::string backend_id;
  std::string template_version;
  std::string hate_text;
  std::string raw_output;
  std::string rephrasing;  // ExtractRephrasing(raw_output)
  std::chrono::milliseconds latency{0};
  bool from_cache = false;
  std::optional<TokenUsage> token_usage;
};

Json ToJson(const GenerationResult& result);
GenerationResult GenerationResultFromJson(const Json& j);

// Cache key over everything that can change a backend response.
std::string GenerationCacheKey(std::string_view model_id, std::string_view backend_id,
                               PromptKind kind, std::string_view template_version,
                               std::string_view hate_text, double temperature, int max_tokens);

// Render, look up or call the backend, then extract. Backend errors and
// extraction errors propagate; raw responses are cached either way.
GenerationResult GenerateCached(const CorpusRecord& record, PromptKind kind,
                                const GenerationConfig& config, const TemplateStore& templates,
                                Backend& backend, GenerationCache& cache);

}  // namespace rephrase
