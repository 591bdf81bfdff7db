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

#include "common/jsonl.hpp"
#include "corpus/corpus.hpp"
#include "scoring/providers.hpp"

namespace rephrase {

// Builds the five scoring providers from a JSON config. Each section picks a
// "type"; missing sections fall back to the offline stubs:
//   toxicity:  lexicon (default; "lexicon" map or "lexicon_file", "fail_on")
//              | perspective ("url", "api_key" or "api_key_env")
//   embedding: hashed-bow (default; "dim") | http ("url", "model")
//   logprob:   unigram (default; fit on the corpus reference texts)
//              | http ("url", "model")
//   style:     lexicon (default; "threshold", reuses the toxicity lexicon)
//              | constant ("value") | http ("url", "positive_label")
//   fluency:   min-tokens (default; "min_tokens") | constant | http
// Relative file paths resolve against `base_dir`.
Providers MakeProviders(const Json& config, const Corpus& corpus,
                        const std::filesystem::path& base_dir = {});

}  // namespace rephrase
