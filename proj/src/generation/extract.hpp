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
#include <string_view>

namespace rephrase {

// Cleans a raw backend output into the rephrasing that gets scored:
//  - a leading "Thought: ..." (or echoed "Hate Speech: ...") paragraph is
//    dropped up to the first "Non-hate Speech:" cue, when such a cue follows;
//  - a leading echoed "Non-hate Speech:" is dropped (case-insensitive);
//  - the text is cut at the first later line starting with "Hate Speech:";
//  - quotation marks wrapping the whole text are removed;
//  - surrounding whitespace is trimmed.
// The steps repeat until nothing changes, so the function is idempotent.
// Throws kValidation("empty generation") if nothing is left.
std::string ExtractRephrasing(std::string_view raw_output);

}  // namespace rephrase
