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

#include <array>
#include <cstddef>
#include <span>

#include "common/jsonl.hpp"

namespace rephrase {

inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 5;
inline constexpr std::size_t kCategories = kMaxRating - kMinRating + 1;

struct AgreementResult {
  double kappa = 0.0;
  double observed = 0.0;  // p_o
  double expected = 0.0;  // p_e
  std::array<std::array<std::size_t, kCategories>, kCategories> confusion{};  // [a][b]
  std::size_t n_items = 0;
};

Json ToJson(const AgreementResult& result);

// Unweighted Cohen's kappa over ratings 1..5, aligned by position. When both
// raters use a single identical category (p_e = 1, p_o = 1) kappa is 1.
AgreementResult CohenKappa(std::span<const int> a, std::span<const int> b);

}  // namespace rephrase
