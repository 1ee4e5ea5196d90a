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

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qscreen/errors.hpp"
#include "qscreen/hybrid.hpp"

namespace qscreen {
namespace {

CircuitIR toy_circuit() {
  return testing::parse_marked(
      "qreg q[3]; ry(0.3) q[0]; h q[1]; cx q[0],q[2]; rz(-0.4) q[2]; rx(0.9) q[1]; cz q[1],q[2];", "toy");
}

HybridConfig small_config(bool skip) {
  HybridConfig cfg;
  cfg.num_features = 5;
  cfg.hidden1 = 6;
  cfg.hidden2 = 4;
  cfg.skip_enabled = skip;
  return cfg;
}

Eigen::VectorXd random_x(Rng& rng, Eigen::Index f) {
  Eigen::VectorXd x(f);
  for (auto& v : x) v = uniform(rng, 0, 3.14);
  return x;
}

/// Pre-NN forced to emit zeros: zero pre2 weights and biases.
HybridParams zero_encoding_params(const HybridModel& model, Rng& rng) {
  auto p = model.init_params(rng);
  p.pre2.weights.setZero();
  p.pre2.biases.setZero();
  return p;
}

TEST(HybridForward, ZeroEncodingEmptyCircuit) {
  CircuitIR empty;
  empty.num_qubits = 2;
  for (bool skip : {true, false}) {
    HybridModel model(small_config(skip), empty);
    Rng rng(1);
    const auto p = zero_encoding_params(model, rng);
    ForwardCache cache;
    model.forward(p, Eigen::VectorXd::Ones(5), cache);
    EXPECT_EQ(cache.z_quantum, Eigen::Vector2d(1, 1));
    EXPECT_EQ(cache.z_res, Eigen::Vector2d(1, 1));
    EXPECT_EQ(cache.z_classical, Eigen::Vector2d(0, 0));
  }
}

TEST(HybridForward, SingleQubitCosine) {
  CircuitIR c = testing::parse_marked("qreg q[1]; ry(0) q[0];", "one");
  HybridConfig cfg = small_config(true);
  HybridModel model(cfg, c);
  Rng rng(2);
  auto p = model.init_params(rng);
  p.pre2.weights.setZero();
  p.pre2.biases[0] = 0.77;
  ForwardCache cache;
  model.forward(p, Eigen::VectorXd::Ones(5), cache);
  EXPECT_NEAR(cache.z_quantum[0], std::cos(0.77), 1e-15);
}

TEST(HybridForward, ResidualIdentityExact) {
  Rng rng(3);
  for (bool skip : {true, false}) {
    HybridModel model(small_config(skip), toy_circuit());
    for (int trial = 0; trial < 25; ++trial) {
      auto p = model.init_params(rng);
      p.alpha = uniform(rng, -2, 2);
      ForwardCache cache;
      model.forward(p, random_x(rng, 5), cache);
      if (skip) {
        const Eigen::VectorXd recomputed = cache.z_quantum + p.alpha * cache.z_classical;
        EXPECT_EQ(cache.z_res, recomputed);
      } else {
        EXPECT_EQ(cache.z_res, cache.z_quantum);
      }
      EXPECT_LE(cache.z_quantum.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
    }
  }
}

TEST(HybridForward, Deterministic) {
  HybridModel model(small_config(true), toy_circuit());
  Rng rng(4);
  const auto p = model.init_params(rng);
  const auto x = random_x(rng, 5);
  ForwardCache a, b;
  EXPECT_EQ(model.forward(p, x, a), model.forward(p, x, b));
}

TEST(HybridForward, ShapeErrors) {
  HybridModel model(small_config(true), toy_circuit());
  Rng rng(5);
  auto p = model.init_params(rng);
  ForwardCache cache;
  EXPECT_THROW(model.forward(p, Eigen::VectorXd::Ones(4), cache), ShapeMismatch);
  p.theta.resize(5);
  EXPECT_THROW(model.forward(p, Eigen::VectorXd::Ones(5), cache), ShapeMismatch);
}

TEST(HybridBackward, AlphaGradientIsDot) {
  HybridModel model(small_config(true), toy_circuit());
  Rng rng(6);
  const auto p = model.init_params(rng);
  ForwardCache cache;
  model.forward(p, random_x(rng, 5), cache);
  const auto g = model.backward(p, cache, 1);
  ASSERT_TRUE(g.alpha.has_value());
  EXPECT_EQ(*g.alpha, g.post1.d_input.dot(cache.z_classical));
}

TEST(HybridBackward, NoAlphaWhenAblated) {
  HybridModel model(small_config(false), toy_circuit());
  Rng rng(7);
  const auto p = model.init_params(rng);
  ForwardCache cache;
  model.forward(p, random_x(rng, 5), cache);
  EXPECT_FALSE(model.backward(p, cache, 0).alpha.has_value());
}

// Whole-model gradient against central differences of the loss over the
// flat parameter vector.
TEST(HybridBackwardProperty, MatchesFiniteDifferences) {
  Rng rng(8);
  for (bool skip : {true, false}) {
    for (int trial = 0; trial < 4; ++trial) {
      HybridModel model(small_config(skip), toy_circuit());
      auto p = model.init_params(rng);
      for (auto& t : p.theta) t = uniform(rng, -1, 1);
      p.pre1.biases.setConstant(0.05);
      const auto x = random_x(rng, 5);
      const int label = trial % 2;
      ForwardCache cache;
      model.forward(p, x, cache);
      const auto analytic = model.backward(p, cache, label).flatten();

      auto loss = [&](const Eigen::VectorXd& flat) {
        HybridParams q = p;
        q.unflatten(flat);
        ForwardCache c;
        return bce_with_logits(model.forward(q, x, c), label).loss;
      };
      const auto numeric = testing::numeric_gradient(loss, p.flatten(), 1e-6);
      ASSERT_EQ(analytic.size(), numeric.size());
      for (Eigen::Index i = 0; i < analytic.size(); ++i)
        EXPECT_TRUE(testing::close(analytic[i], numeric[i], 1e-4, 1e-8))
            << "param " << i << ": " << analytic[i] << " vs " << numeric[i];
    }
  }
}

TEST(HybridParams, FlattenRoundTrip) {
  HybridModel model(small_config(true), toy_circuit());
  Rng rng(9);
  const auto p = model.init_params(rng);
  const auto flat = p.flatten();
  EXPECT_EQ(flat.size(), 5 * 6 + 6 + 6 * 3 + 3 + 2 + 1 + 3 * 4 + 4 + 4 + 1);
  HybridParams q = model.init_params(rng);
  q.unflatten(flat);
  EXPECT_EQ(q.flatten(), flat);
  // row-major: second entry is pre1.W(0, 1)
  EXPECT_EQ(flat[1], p.pre1.weights(0, 1));
  EXPECT_EQ(flat[30 + 6 + 18 + 3 + 2], p.alpha);
  EXPECT_THROW(q.unflatten(Eigen::VectorXd::Zero(3)), ShapeMismatch);
}

TEST(HybridInit, AlphaAndThetaDefaults) {
  HybridModel model(small_config(true), toy_circuit());
  Rng rng(10);
  const auto p = model.init_params(rng);
  EXPECT_EQ(p.alpha, 0.1);
  EXPECT_EQ(p.theta, Eigen::VectorXd::Zero(2));
  HybridConfig warm = small_config(true);
  warm.warm_start = true;
  const auto w = HybridModel(warm, toy_circuit()).init_params(rng);
  EXPECT_EQ(w.theta, Eigen::Vector2d(0.3, -0.4));
}

TEST(PredictProba, Range) {
  HybridModel model(small_config(true), toy_circuit());
  Rng rng(11);
  auto p = model.init_params(rng);
  p.post2.weights.setZero();
  p.post2.biases[0] = 0.0;
  EXPECT_EQ(model.predict_proba(p, random_x(rng, 5)), 0.5);
  p.post2.biases[0] = 10.0;
  EXPECT_NEAR(model.predict_proba(p, random_x(rng, 5)), 0.9999546021312976, 1e-15);
  p = model.init_params(rng);
  for (int i = 0; i < 20; ++i) {
    const double pr = model.predict_proba(p, random_x(rng, 5));
    EXPECT_GT(pr, 0.0);
    EXPECT_LT(pr, 1.0);
  }
}

}  // namespace
}  // namespace qscreen
