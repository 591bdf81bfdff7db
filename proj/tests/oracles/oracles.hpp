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

// Reference implementations written from the metric definitions alone, kept
// deliberately naive (linear scans, no shared code with the library) so they
// can serve as independent oracles.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace rephrase::oracle {

inline bool SameGram(const std::vector<std::string>& a, std::size_t i, const std::vector<std::string>& b,
                     std::size_t j, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (a[i + k] != b[j + k]) return false;
  }
  return true;
}

// Occurrences of the n-gram starting at a[i] inside seq.
inline std::size_t CountIn(const std::vector<std::string>& a, std::size_t i, std::size_t n,
                           const std::vector<std::string>& seq) {
  std::size_t c = 0;
  for (std::size_t j = 0; j + n <= seq.size(); ++j) c += SameGram(a, i, seq, j, n);
  return c;
}

// Clipped matches: each candidate position contributes when its n-gram type
// has not yet used up its reference count.
inline std::size_t ClippedMatches(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                                  std::size_t n) {
  std::size_t matches = 0;
  for (std::size_t i = 0; i + n <= cand.size(); ++i) {
    std::size_t earlier = 0;  // same gram at earlier candidate positions
    for (std::size_t j = 0; j < i; ++j) earlier += SameGram(cand, i, cand, j, n);
    if (earlier < CountIn(cand, i, n, ref)) ++matches;
  }
  return matches;
}

inline double Bleu(const std::vector<std::string>& cand, const std::vector<std::string>& ref, int max_order = 4) {
  if (cand.empty()) return 0.0;
  double log_sum = 0.0;
  int used = 0;
  for (int n = 1; n <= max_order; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    if (cand.size() < un) continue;
    const double total = static_cast<double>(cand.size() - un + 1);
    const double m = static_cast<double>(ClippedMatches(cand, ref, un));
    double p;
    if (n == 1) {
      if (m == 0) return 0.0;
      p = m / total;
    } else {
      p = (m + 1) / (total + 1);
    }
    log_sum += std::log(p);
    ++used;
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / used);
}

struct Kappa {
  double kappa;
  double p_o;
  double p_e;
};

// Unweighted Cohen's kappa over categories 1..5 from the confusion matrix.
inline Kappa CohenKappa(const std::vector<int>& a, const std::vector<int>& b) {
  double m[5][5] = {};
  for (std::size_t i = 0; i < a.size(); ++i) m[a[i] - 1][b[i] - 1] += 1;
  const double n = static_cast<double>(a.size());
  double diag = 0, p_e = 0;
  for (int c = 0; c < 5; ++c) {
    diag += m[c][c];
    double row = 0, col = 0;
    for (int k = 0; k < 5; ++k) {
      row += m[c][k];
      col += m[k][c];
    }
    p_e += (row / n) * (col / n);
  }
  const double p_o = diag / n;
  const double k = p_e == 1.0 ? 1.0 : (p_o - p_e) / (1 - p_e);
  return {k, p_o, p_e};
}

}  // namespace rephrase::oracle
