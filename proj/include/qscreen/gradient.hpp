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

#include <cstddef>

#include <Eigen/Core>

#include "qscreen/qasm.hpp"

namespace qscreen {

/// Derivatives of every <Z_k> with respect to the circuit angles and the
/// encoding angles. Rows are qubits.
struct QuantumJacobian {
  Eigen::MatrixXd d_theta;     ///< n x P
  Eigen::MatrixXd d_encoding;  ///< n x q
  /// Circuit executions spent building this Jacobian.
  std::size_t executions = 0;
};

/// The executed program: RX(encoding[j]) on qubit j for j < q, then the
/// circuit, then CX(j, j+1) for j = 0..q-2. Encoding angles occupy trainable
/// slots P..P+q-1 after the circuit's own P slots.
CircuitIR build_hybrid_program(const CircuitIR& circuit, std::size_t encoding_width);

/// All <Z_k> of the hybrid program.
Eigen::VectorXd hybrid_expectations(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& encoding);

/// Exact Jacobian by the two-term shift rule at +/- pi/2, applied to every
/// angle occurrence (U1, U2 and U3 angles included, each being a Z or Y
/// rotation up to global phase). Uses exactly 2 (P + q) executions.
QuantumJacobian param_shift_jacobian(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& encoding);

/// Central differences with step h on every slot. Test oracle.
QuantumJacobian finite_diff_jacobian(const CircuitIR& circuit, const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& encoding, double h = 1e-5);

}  // namespace qscreen
