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

#include <optional>

#include <Eigen/Core>

#include "qscreen/neural.hpp"
#include "qscreen/qasm.hpp"
#include "qscreen/rng.hpp"

namespace qscreen {

struct HybridConfig {
  Eigen::Index num_features = 28;
  Eigen::Index hidden1 = 64;
  Eigen::Index hidden2 = 16;
  bool skip_enabled = true;
  double alpha_init = 0.1;
  /// Start theta from the circuit's source angles instead of zeros.
  bool warm_start = false;
};

/// Trainable state of one hybrid model.
///
/// Flat layout (used by the optimizer and by checkpoints):
///   pre1.W (row-major), pre1.b, pre2.W (row-major), pre2.b,
///   theta, alpha,
///   post1.W (row-major), post1.b, post2.W (row-major), post2.b
/// alpha is always present in the layout; with the skip connection disabled
/// it never receives a gradient.
struct HybridParams {
  DenseLayer pre1;   ///< f -> hidden1, ReLU
  DenseLayer pre2;   ///< hidden1 -> q, Identity
  Eigen::VectorXd theta;
  double alpha = 0.0;
  DenseLayer post1;  ///< q -> hidden2, ReLU
  DenseLayer post2;  ///< hidden2 -> 1, Identity

  Eigen::Index flat_size() const;
  Eigen::VectorXd flatten() const;
  /// Inverse of flatten(); shapes are taken from the current layers.
  void unflatten(const Eigen::VectorXd& flat);
};

struct ForwardCache {
  Eigen::VectorXd z_classical;
  Eigen::VectorXd z_quantum;
  Eigen::VectorXd z_res;
  double logit = 0.0;
  DenseCache pre1, pre2, post1, post2;
};

struct HybridGradients {
  double loss = 0.0;
  DenseGrads pre1, pre2;
  Eigen::VectorXd theta;
  std::optional<double> alpha;  ///< absent when the skip connection is disabled
  DenseGrads post1, post2;

  /// Same layout as HybridParams::flatten(); a missing alpha gradient is 0.
  Eigen::VectorXd flatten() const;
};

/// Classical encoder -> RX angle encoding -> candidate circuit -> CX chain ->
/// <Z> readout -> residual skip -> classical head.
class HybridModel {
 public:
  HybridModel(HybridConfig config, CircuitIR circuit);

  const HybridConfig& config() const noexcept { return config_; }
  const CircuitIR& circuit() const noexcept { return circuit_; }
  Eigen::Index qubit_width() const noexcept { return circuit_.num_qubits; }

  /// Fresh parameters: fan-in uniform weights drawn in flat-layout order,
  /// zero biases, theta zero (or warm-started), alpha = alpha_init.
  HybridParams init_params(Rng& rng) const;

  /// Returns the logit and fills `cache`.
  double forward(const HybridParams& params, const Eigen::VectorXd& x, ForwardCache& cache) const;

  /// BCE-with-logits loss and its gradient with respect to every parameter.
  /// Quantum derivatives come from the parameter-shift rule.
  HybridGradients backward(const HybridParams& params, const ForwardCache& cache, int label) const;

  double predict_proba(const HybridParams& params, const Eigen::VectorXd& x) const;

 private:
  void check_params(const HybridParams& params) const;

  HybridConfig config_;
  CircuitIR circuit_;
};

}  // namespace qscreen
