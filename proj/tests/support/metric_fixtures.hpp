// Copyright 2026 The qscreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Hand-evaluated per-class F1 fixtures and an all-pairs AUC count.

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace qscreen::testing {

struct MacroF1Fixture {
  std::size_t tp, fp, fn, tn;
  double f1_fraud;
  double f1_non_fraud;
  double macro;
};

// F1 = 2tp / (2tp + fp + fn), the non-fraud class swaps tp<->tn and fp<->fn,
// 0/0 counts as 0. Values written as exact fractions.
inline const std::array<MacroF1Fixture, 10>& macro_f1_fixtures() {
  static const std::array<MacroF1Fixture, 10> f{{
      {2, 1, 1, 6, 4.0 / 6, 12.0 / 14, 16.0 / 21},
      {5, 0, 0, 5, 1.0, 1.0, 1.0},
      {0, 0, 5, 5, 0.0, 10.0 / 15, 1.0 / 3},  // all negative on balanced data
      {5, 5, 0, 0, 10.0 / 15, 0.0, 1.0 / 3},
      {0, 4, 6, 0, 0.0, 0.0, 0.0},
      {10, 2, 3, 85, 20.0 / 25, 170.0 / 175, 31.0 / 35},
      {1, 0, 0, 0, 1.0, 0.0, 0.5},
      {0, 0, 0, 3, 0.0, 1.0, 0.5},
      {7, 3, 1, 9, 14.0 / 18, 18.0 / 22, 79.0 / 99},
      {3, 6, 2, 4, 6.0 / 14, 8.0 / 16, 13.0 / 28},
  }};
  return f;
}

/// Fraction of (positive, negative) pairs ranked correctly, ties count 1/2.
inline double brute_force_auc(const Eigen::VectorXd& s, const Eigen::VectorXi& y) {
  double wins = 0;
  double pairs = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1;
      if (s[i] > s[j]) wins += 1;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace qscreen::testing
