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

#include "qscreen/hybrid.hpp"

#include <string>

#include "qscreen/errors.hpp"
#include "qscreen/gradient.hpp"

namespace qscreen {

namespace {

Eigen::Index layer_size(const DenseLayer& l) { return l.weights.size() + l.biases.size(); }

void write_layer(const DenseLayer& l, Eigen::VectorXd& out, Eigen::Index& at) {
  for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < l.weights.cols(); ++c) out[at++] = l.weights(r, c);
  out.segment(at, l.biases.size()) = l.biases;
  at += l.biases.size();
}

void write_grads(const DenseGrads& g, Eigen::VectorXd& out, Eigen::Index& at) {
  for (Eigen::Index r = 0; r < g.d_weights.rows(); ++r)
    for (Eigen::Index c = 0; c < g.d_weights.cols(); ++c) out[at++] = g.d_weights(r, c);
  out.segment(at, g.d_biases.size()) = g.d_biases;
  at += g.d_biases.size();
}

void read_layer(DenseLayer& l, const Eigen::VectorXd& in, Eigen::Index& at) {
  for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = in[at++];
  l.biases = in.segment(at, l.biases.size());
  at += l.biases.size();
}

}  // namespace

Eigen::Index HybridParams::flat_size() const {
  return layer_size(pre1) + layer_size(pre2) + theta.size() + 1 + layer_size(post1) +
         layer_size(post2);
}

Eigen::VectorXd HybridParams::flatten() const {
  Eigen::VectorXd out(flat_size());
  Eigen::Index at = 0;
  write_layer(pre1, out, at);
  write_layer(pre2, out, at);
  out.segment(at, theta.size()) = theta;
  at += theta.size();
  out[at++] = alpha;
  write_layer(post1, out, at);
  write_layer(post2, out, at);
  return out;
}

void HybridParams::unflatten(const Eigen::VectorXd& flat) {
  if (flat.size() != flat_size()) {
    throw ShapeMismatch("flat parameter vector has length " + std::to_string(flat.size()) +
                        ", expected " + std::to_string(flat_size()));
  }
  Eigen::Index at = 0;
  read_layer(pre1, flat, at);
  read_layer(pre2, flat, at);
  theta = flat.segment(at, theta.size());
  at += theta.size();
  alpha = flat[at++];
  read_layer(post1, flat, at);
  read_layer(post2, flat, at);
}

Eigen::VectorXd HybridGradients::flatten() const {
  const Eigen::Index size = pre1.d_weights.size() + pre1.d_biases.size() + pre2.d_weights.size() +
                            pre2.d_biases.size() + theta.size() + 1 + post1.d_weights.size() +
                            post1.d_biases.size() + post2.d_weights.size() + post2.d_biases.size();
  Eigen::VectorXd out(size);
  Eigen::Index at = 0;
  write_grads(pre1, out, at);
  write_grads(pre2, out, at);
  out.segment(at, theta.size()) = theta;
  at += theta.size();
  out[at++] = alpha.value_or(0.0);
  write_grads(post1, out, at);
  write_grads(post2, out, at);
  return out;
}

HybridModel::HybridModel(HybridConfig config, CircuitIR circuit)
    : config_(config), circuit_(std::move(circuit)) {
  if (config_.num_features < 1 || config_.hidden1 < 1 || config_.hidden2 < 1)
    throw ShapeMismatch("hybrid model dimensions must be positive");
  if (circuit_.num_qubits < 1) throw ShapeMismatch("circuit has no qubits");
}

HybridParams HybridModel::init_params(Rng& rng) const {
  const Eigen::Index q = qubit_width();
  HybridParams p;
  p.pre1 = init_dense(config_.num_features, config_.hidden1, Activation::ReLU, rng);
  p.pre2 = init_dense(config_.hidden1, q, Activation::Identity, rng);
  p.theta = config_.warm_start
                ? circuit_.initial_angles()
                : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(circuit_.trainable_param_count));
  p.alpha = config_.alpha_init;
  p.post1 = init_dense(q, config_.hidden2, Activation::ReLU, rng);
  p.post2 = init_dense(config_.hidden2, 1, Activation::Identity, rng);
  return p;
}

void HybridModel::check_params(const HybridParams& p) const {
  const Eigen::Index q = qubit_width();
  if (p.pre2.out_dim() != q || p.post1.in_dim() != q || p.pre2.in_dim() != p.pre1.out_dim() ||
      p.post2.in_dim() != p.post1.out_dim() || p.post2.out_dim() != 1 ||
      static_cast<std::size_t>(p.theta.size()) != circuit_.trainable_param_count) {
    throw ShapeMismatch("hybrid parameters do not match a " + std::to_string(q) +
                        "-qubit circuit with " +
                        std::to_string(circuit_.trainable_param_count) + " trainable params");
  }
}

double HybridModel::forward(const HybridParams& params, const Eigen::VectorXd& x,
                            ForwardCache& cache) const {
  check_params(params);
  if (x.size() != params.pre1.in_dim()) {
    throw ShapeMismatch("feature vector has length " + std::to_string(x.size()) + ", expected " +
                        std::to_string(params.pre1.in_dim()));
  }
  const Eigen::VectorXd hidden = dense_forward(params.pre1, x, cache.pre1);
  cache.z_classical = dense_forward(params.pre2, hidden, cache.pre2);
  cache.z_quantum = hybrid_expectations(circuit_, params.theta, cache.z_classical);
  if (config_.skip_enabled) {
    cache.z_res = cache.z_quantum + params.alpha * cache.z_classical;
  } else {
    cache.z_res = cache.z_quantum;
  }
  const Eigen::VectorXd head = dense_forward(params.post1, cache.z_res, cache.post1);
  cache.logit = dense_forward(params.post2, head, cache.post2)[0];
  return cache.logit;
}

HybridGradients HybridModel::backward(const HybridParams& params, const ForwardCache& cache,
                                      int label) const {
  check_params(params);
  if (cache.z_classical.size() != qubit_width())
    throw ShapeMismatch("forward cache does not belong to this model");

  HybridGradients g;
  const auto bce = bce_with_logits(cache.logit, label);
  g.loss = bce.loss;

  Eigen::VectorXd d_logit(1);
  d_logit[0] = bce.d_logit;
  g.post2 = dense_backward(params.post2, cache.post2, d_logit);
  g.post1 = dense_backward(params.post1, cache.post1, g.post2.d_input);
  const Eigen::VectorXd& d_res = g.post1.d_input;

  const auto jac = param_shift_jacobian(circuit_, params.theta, cache.z_classical);
  g.theta = jac.d_theta.transpose() * d_res;
  Eigen::VectorXd d_classical = jac.d_encoding.transpose() * d_res;
  if (config_.skip_enabled) {
    g.alpha = d_res.dot(cache.z_classical);
    d_classical += params.alpha * d_res;
  }
  g.pre2 = dense_backward(params.pre2, cache.pre2, d_classical);
  g.pre1 = dense_backward(params.pre1, cache.pre1, g.pre2.d_input);
  return g;
}

double HybridModel::predict_proba(const HybridParams& params, const Eigen::VectorXd& x) const {
  ForwardCache cache;
  return sigmoid(forward(params, x, cache));
}

}  // namespace qscreen
