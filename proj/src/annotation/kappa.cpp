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

#include "annotation/kappa.hpp"

#include <string>

#include "common/error.hpp"

namespace rephrase {

Json ToJson(const AgreementResult& r) {
  Json matrix = Json::array();
  for (const auto& row : r.confusion) matrix.push_back(row);
  return {{"kappa", r.kappa},
          {"observed_agreement", r.observed},
          {"expected_agreement", r.expected},
          {"confusion_matrix", matrix},
          {"n_items", r.n_items}};
}

AgreementResult CohenKappa(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "rating lists differ in length (" +
                                                 std::to_string(a.size()) + " vs " +
                                                 std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "no ratings to compare");

  AgreementResult r;
  r.n_items = a.size();
  std::array<std::size_t, kCategories> ma{}, mb{};
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int v : {a[i], b[i]}) {
      if (v < kMinRating || v > kMaxRating) {
        throw Error(ErrorCode::kValidation,
                    "rating " + std::to_string(v) + " at position " + std::to_string(i) +
                        " is outside 1..5");
      }
    }
    const auto x = static_cast<std::size_t>(a[i] - kMinRating);
    const auto y = static_cast<std::size_t>(b[i] - kMinRating);
    ++r.confusion[x][y];
    ++ma[x];
    ++mb[y];
    agree += x == y;
  }
  const double n = static_cast<double>(r.n_items);
  r.observed = static_cast<double>(agree) / n;
  for (std::size_t c = 0; c < kCategories; ++c) {
    r.expected += (static_cast<double>(ma[c]) / n) * (static_cast<double>(mb[c]) / n);
  }
  if (r.expected >= 1.0) {
    // Only reachable when both raters used one identical category throughout.
    r.kappa = 1.0;
  } else {
    r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  }
  return r;
}

}  // namespace rephrase
