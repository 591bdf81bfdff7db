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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rephrase {

// Sentence-level BLEU against a single reference, in [0, 1].
//
// Clipped n-gram precisions for n = 1..max_order. Orders >= 2 use add-one
// smoothing, p_n = (matches + 1) / (total + 1); p_1 is unsmoothed. The
// geometric mean runs over the orders with at least one candidate n-gram,
// with uniform weights. Brevity penalty min(1, exp(1 - r/c)). Zero when
// p_1 is zero or the candidate is empty.
double SentenceBleu(std::span<const std::string> candidate, std::span<const std::string> reference,
                    int max_order = 4);

// Tokenizes both sides with Tokenize() first.
double Bleu(std::string_view candidate, std::string_view reference, int max_order = 4);

}  // namespace rephrase
