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

#include "qscreen/gradient.hpp"

#include <numbers>
#include <string>

#include "qscreen/errors.hpp"
#include "qscreen/simulator.hpp"

namespace qscreen {

namespace {

void check_shapes(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                  const Eigen::VectorXd& encoding) {
  if (static_cast<std::size_t>(theta.size()) != circuit.trainable_param_count) {
    throw ShapeMismatch("theta has length " + std::to_string(theta.size()) + ", expected " +
                        std::to_string(circuit.trainable_param_count));
  }
  if (encoding.size() > circuit.num_qubits) {
    throw ShapeMismatch(std::to_string(encoding.size()) + " encoding angles for a " +
                        std::to_string(circuit.num_qubits) + "-qubit circuit");
  }
}

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

CircuitIR build_hybrid_program(const CircuitIR& circuit, std::size_t encoding_width) {
  if (encoding_width > static_cast<std::size_t>(circuit.num_qubits)) {
    throw ShapeMismatch("encoding width " + std::to_string(encoding_width) + " exceeds " +
                        std::to_string(circuit.num_qubits) + " qubits");
  }
  CircuitIR program;
  program.source_id = circuit.source_id;
  program.num_qubits = circuit.num_qubits;
  program.ops.reserve(circuit.ops.size() + 2 * encoding_width);
  const std::size_t p = circuit.trainable_param_count;
  for (std::size_t j = 0; j < encoding_width; ++j)
    program.ops.push_back({GateKind::RX, {static_cast<int>(j)}, {Trainable{p + j, 0.0}}});
  program.ops.insert(program.ops.end(), circuit.ops.begin(), circuit.ops.end());
  for (std::size_t j = 0; j + 1 < encoding_width; ++j)
    program.ops.push_back({GateKind::CX, {static_cast<int>(j), static_cast<int>(j + 1)}, {}});
  program.trainable_param_count = p + encoding_width;
  return program;
}

Eigen::VectorXd hybrid_expectations(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& encoding) {
  check_shapes(circuit, theta, encoding);
  const auto program = build_hybrid_program(circuit, static_cast<std::size_t>(encoding.size()));
  return expect_all_z(run(program, concat(theta, encoding)));
}

QuantumJacobian param_shift_jacobian(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& encoding) {
  check_shapes(circuit, theta, encoding);
  const auto q = static_cast<std::size_t>(encoding.size());
  const auto program = build_hybrid_program(circuit, q);
  const Eigen::VectorXd params = concat(theta, encoding);
  const Eigen::Index n = circuit.num_qubits;
  const Eigen::Index p = theta.size();

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, params.size());
  QuantumJacobian out;
  constexpr double kShift = std::numbers::pi / 2;
  for (std::size_t i = 0; i < program.ops.size(); ++i) {
    const auto& op = program.ops[i];
    for (std::size_t k = 0; k < op.params.size(); ++k) {
      const auto* t = std::get_if<Trainable>(&op.params[k]);
      if (!t) continue;
      const auto plus = expect_all_z(run<double>(program, params, AngleShift<double>{i, k, kShift}));
      const auto minus =
          expect_all_z(run<double>(program, params, AngleShift<double>{i, k, -kShift}));
      out.executions += 2;
      jac.col(static_cast<Eigen::Index>(t->slot)) += (plus - minus) / 2;
    }
  }
  out.d_theta = jac.leftCols(p);
  out.d_encoding = jac.rightCols(static_cast<Eigen::Index>(q));
  return out;
}

QuantumJacobian finite_diff_jacobian(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& encoding, double h) {
  check_shapes(circuit, theta, encoding);
  const auto q = static_cast<std::size_t>(encoding.size());
  const auto program = build_hybrid_program(circuit, q);
  Eigen::VectorXd params = concat(theta, encoding);
  const Eigen::Index n = circuit.num_qubits;

  Eigen::MatrixXd jac(n, params.size());
  QuantumJacobian out;
  for (Eigen::Index s = 0; s < params.size(); ++s) {
    const double saved = params[s];
    params[s] = saved + h;
    const Eigen::VectorXd plus = expect_all_z(run(program, params));
    params[s] = saved - h;
    const Eigen::VectorXd minus = expect_all_z(run(program, params));
    params[s] = saved;
    out.executions += 2;
    jac.col(s) = (plus - minus) / (2 * h);
  }
  out.d_theta = jac.leftCols(theta.size());
  out.d_encoding = jac.rightCols(static_cast<Eigen::Index>(q));
  return out;
}

}  // namespace qscreen
