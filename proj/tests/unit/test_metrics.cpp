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

#include <gtest/gtest.h>

#include <cmath>

#include "metric_fixtures.hpp"
#include "qscreen/errors.hpp"
#include "qscreen/metrics.hpp"
#include "qscreen/rng.hpp"

namespace qscreen {
namespace {

TEST(Confusion, Basic) {
  const auto c = confusion(Eigen::Vector2d(0.9, 0.1), Eigen::Vector2i(1, 0));
  EXPECT_EQ(c, (ConfusionCounts{1, 0, 1, 0}));
}

TEST(Confusion, ThresholdIsInclusive) {
  const auto c = confusion(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2i(1, 0));
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
}

TEST(Confusion, AllWrong) {
  const auto c = confusion(Eigen::Vector4d(0.1, 0.2, 0.8, 0.9), Eigen::Vector4i(1, 1, 0, 0));
  EXPECT_EQ(c.tp, 0u);
  EXPECT_EQ(c.tn, 0u);
  EXPECT_EQ(c.total(), 4u);
}

TEST(Confusion, LengthMismatch) {
  EXPECT_THROW(confusion(Eigen::Vector2d(0.1, 0.2), Eigen::Vector3i(0, 1, 0)), LengthMismatch);
  EXPECT_THROW(roc_auc(Eigen::Vector2d(0.1, 0.2), Eigen::Vector3i(0, 1, 0)), LengthMismatch);
}

TEST(MacroF1, Fixtures) {
  for (const auto& f : testing::macro_f1_fixtures()) {
    const ConfusionCounts c{f.tp, f.fp, f.tn, f.fn};
    EXPECT_NEAR(fraud_scores(c).f1, f.f1_fraud, 1e-15);
    EXPECT_NEAR(non_fraud_scores(c).f1, f.f1_non_fraud, 1e-15);
    EXPECT_NEAR(macro_f1(c), f.macro, 1e-15) << f.tp << " " << f.fp << " " << f.fn << " " << f.tn;
  }
}

TEST(MacroF1, WorkedExample) {
  EXPECT_NEAR(macro_f1({2, 1, 6, 1}), 0.7619047619047619, 1e-15);
}

TEST(MacroF1, AllNegativeIsHalfNonFraud) {
  const ConfusionCounts c{0, 0, 50, 50};
  EXPECT_EQ(fraud_scores(c).f1, 0.0);
  EXPECT_EQ(macro_f1(c), non_fraud_scores(c).f1 / 2);
}

TEST(MacroF1, Empty) { EXPECT_THROW(macro_f1({}), EmptyInput); }

TEST(MacroF1, LabelSwapSymmetry) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const ConfusionCounts c{uniform_index(rng, 20), uniform_index(rng, 20), uniform_index(rng, 20),
                            uniform_index(rng, 20) + 1};
    const ConfusionCounts swapped{c.tn, c.fn, c.tp, c.fp};
    EXPECT_EQ(macro_f1(c), macro_f1(swapped));
  }
}

TEST(Accuracy, Simple) { EXPECT_EQ(accuracy({2, 1, 6, 1}), 0.8); }

TEST(Auc, Separated) {
  EXPECT_EQ(roc_auc(Eigen::Vector4d(0.1, 0.2, 0.8, 0.9), Eigen::Vector4i(0, 0, 1, 1)), 1.0);
}

TEST(Auc, AllTied) {
  EXPECT_EQ(roc_auc(Eigen::Vector4d::Constant(0.3), Eigen::Vector4i(0, 1, 0, 1)), 0.5);
}

TEST(Auc, WorkedExample) {
  EXPECT_NEAR(roc_auc(Eigen::Vector4d(0.1, 0.4, 0.35, 0.8), Eigen::Vector4i(0, 0, 1, 1)), 0.75, 1e-15);
}

TEST(Auc, SingleClass) {
  EXPECT_THROW(roc_auc(Eigen::Vector2d(0.1, 0.2), Eigen::Vector2i(1, 1)), SingleClassInput);
}

TEST(AucProperty, MatchesBruteForce) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + uniform_index(rng, 199));
    Eigen::VectorXd s(n);
    Eigen::VectorXi y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      // coarse grid so ties are common
      s[i] = static_cast<double>(uniform_index(rng, 12)) / 11.0;
      y[i] = static_cast<int>(uniform_index(rng, 2));
    }
    y[0] = 0;
    y[1] = 1;
    EXPECT_NEAR(roc_auc(s, y), testing::brute_force_auc(s, y), 1e-12);
  }
}

TEST(AucProperty, MonotoneInvariance) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 50;
    Eigen::VectorXd s(n);
    Eigen::VectorXi y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      s[i] = static_cast<double>(uniform_index(rng, 20)) / 19.0;
      y[i] = i % 2;
    }
    const Eigen::VectorXd t = s.unaryExpr([](double v) { return std::exp(3 * v) - 7; });
    EXPECT_EQ(roc_auc(s, y), roc_auc(t, y));
  }
}

TEST(Evaluate, ReportConsistent) {
  Eigen::VectorXd p(6);
  p << 0.9, 0.2, 0.6, 0.4, 0.7, 0.1;
  Eigen::VectorXi y(6);
  y << 1, 0, 0, 1, 1, 0;
  const auto r = evaluate(p, y);
  EXPECT_EQ(r.macro_f1, (r.fraud.f1 + r.non_fraud.f1) / 2);
  EXPECT_EQ(r.threshold, 0.5);
  EXPECT_EQ(r.counts.total(), 6u);
  const nlohmann::json j = r;
  for (const char* key : {"fraud", "non_fraud", "accuracy", "macro_f1", "roc_auc", "threshold", "confusion"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Evaluate, SingleClassAucIsNull) {
  const auto r = evaluate(Eigen::Vector2d(0.2, 0.7), Eigen::Vector2i(0, 0));
  EXPECT_TRUE(std::isnan(r.roc_auc));
  EXPECT_TRUE(nlohmann::json(r)["roc_auc"].is_null());
}

}  // namespace
}  // namespace qscreen
