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

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "qscreen/errors.hpp"
#include "qscreen/rng.hpp"

namespace qscreen {

enum class Activation { ReLU, Identity };

template <typename Scalar = double>
struct BasicDenseLayer {
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  MatrixType weights;  ///< out x in
  VectorType biases;   ///< out
  Activation activation = Activation::Identity;

  Eigen::Index in_dim() const { return weights.cols(); }
  Eigen::Index out_dim() const { return weights.rows(); }
};

using DenseLayer = BasicDenseLayer<double>;

template <typename Scalar = double>
struct BasicDenseCache {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> input;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pre_activation;
};

using DenseCache = BasicDenseCache<double>;

template <typename Scalar = double>
struct BasicDenseGrads {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d_weights;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d_biases;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d_input;
};

using DenseGrads = BasicDenseGrads<double>;

/// y = activation(W x + b). Fills `cache` for the matching backward call.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dense_forward(const BasicDenseLayer<Scalar>& layer,
                                                       const Eigen::MatrixBase<Derived>& x,
                                                       BasicDenseCache<Scalar>& cache) {
  if (x.size() != layer.in_dim()) {
    throw ShapeMismatch("dense layer expects " + std::to_string(layer.in_dim()) +
                        " inputs, got " + std::to_string(x.size()));
  }
  cache.input = x;
  cache.pre_activation = layer.weights * cache.input + layer.biases;
  if (layer.activation == Activation::ReLU) return cache.pre_activation.cwiseMax(Scalar(0));
  return cache.pre_activation;
}

template <typename Scalar, typename Derived>
BasicDenseGrads<Scalar> dense_backward(const BasicDenseLayer<Scalar>& layer,
                                       const BasicDenseCache<Scalar>& cache,
                                       const Eigen::MatrixBase<Derived>& upstream) {
  if (upstream.size() != layer.out_dim() || cache.input.size() != layer.in_dim()) {
    throw ShapeMismatch("dense backward: gradient or cache does not match layer shape");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g = upstream;
  if (layer.activation == Activation::ReLU)
    g = (cache.pre_activation.array() > Scalar(0)).select(g, Scalar(0));
  BasicDenseGrads<Scalar> out;
  out.d_weights = g * cache.input.transpose();
  out.d_biases = g;
  out.d_input = layer.weights.transpose() * g;
  return out;
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= 0) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar = double>
struct BceResult {
  Scalar loss;
  Scalar d_logit;
};

/// Binary cross-entropy on a raw logit, in the overflow-free form
/// max(z, 0) - z y + log(1 + exp(-|z|)).
template <typename Scalar>
BceResult<Scalar> bce_with_logits(Scalar logit, int label) {
  const Scalar y = label ? Scalar(1) : Scalar(0);
  const Scalar loss = std::max(logit, Scalar(0)) - logit * y + std::log1p(std::exp(-std::abs(logit)));
  return {loss, sigmoid(logit) - y};
}

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  long step_count = 0;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of a flat parameter vector. Moments are
/// zero-initialised on the first call.
void adam_step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grads, AdamState& state);

/// rows x cols samples from U[-1/sqrt(fan_in), 1/sqrt(fan_in)].
Eigen::MatrixXd init_params(Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in, Rng& rng);

/// Layer with fan-in uniform weights and zero biases.
DenseLayer init_dense(Eigen::Index in, Eigen::Index out, Activation activation, Rng& rng);

}  // namespace qscreen
