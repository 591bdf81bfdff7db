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

#include "scoring/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "common/error.hpp"
#include "scoring/tokenize.hpp"

namespace rephrase {
namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, int> CountNgrams(std::span<const std::string> tokens, std::size_t n) {
  std::map<Ngram, int> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

double SentenceBleu(std::span<const std::string> candidate, std::span<const std::string> reference,
                    int max_order) {
  if (max_order < 1) throw Error(ErrorCode::kInvalidArgument, "bleu max order must be >= 1");
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_order; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (candidate.size() < un) break;
    const auto total = static_cast<double>(candidate.size() - un + 1);
    const auto cand = CountNgrams(candidate, un);
    const auto ref = CountNgrams(reference, un);
    double matches = 0.0;
    for (const auto& [gram, count] : cand) {
      if (auto it = ref.find(gram); it != ref.end()) matches += std::min(count, it->second);
    }
    if (n == 1 && matches == 0.0) return 0.0;
    const double p = n == 1 ? matches / total : (matches + 1.0) / (total + 1.0);
    log_sum += std::log(p);
    ++orders;
  }

  const auto c = static_cast<double>(candidate.size());
  const auto r = static_cast<double>(reference.size());
  const double bp = std::min(1.0, std::exp(1.0 - r / c));
  return bp * std::exp(log_sum / orders);
}

double Bleu(std::string_view candidate, std::string_view reference, int max_order) {
  const auto c = Tokenize(candidate);
  const auto r = Tokenize(reference);
  return SentenceBleu(c, r, max_order);
}

}  // namespace rephrase
