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

#include "qscreen/neural.hpp"

namespace qscreen {

void adam_step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grads, AdamState& state) {
  if (grads.size() != params.size()) {
    throw ShapeMismatch("adam: " + std::to_string(grads.size()) + " gradients for " +
                        std::to_string(params.size()) + " parameters");
  }
  if (state.first_moment.size() == 0 && state.step_count == 0) {
    state.first_moment = Eigen::VectorXd::Zero(params.size());
    state.second_moment = Eigen::VectorXd::Zero(params.size());
  }
  if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size())
    throw ShapeMismatch("adam: moment vectors do not match parameters");

  ++state.step_count;
  state.first_moment = state.beta1 * state.first_moment + (1 - state.beta1) * grads;
  state.second_moment =
      state.beta2 * state.second_moment + (1 - state.beta2) * grads.cwiseAbs2();
  const double c1 = 1 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double c2 = 1 - std::pow(state.beta2, static_cast<double>(state.step_count));
  params.array() -= state.lr * (state.first_moment.array() / c1) /
                    ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

Eigen::MatrixXd init_params(Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in, Rng& rng) {
  if (fan_in < 1) throw ShapeMismatch("fan_in must be at least 1");
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill so the stream order matches the checkpoint layout.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, -bound, bound);
  return m;
}

DenseLayer init_dense(Eigen::Index in, Eigen::Index out, Activation activation, Rng& rng) {
  return {init_params(out, in, in, rng), Eigen::VectorXd::Zero(out), activation};
}

}  // namespace qscreen
