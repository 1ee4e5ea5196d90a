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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Core>

#include "qscreen/errors.hpp"
#include "qscreen/qasm.hpp"

namespace qscreen {

inline constexpr int kMaxQubits = 24;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Dense statevector over `n` qubits. Qubit k is bit k of the basis index
/// (qubit 0 is the least-significant bit).
template <typename Scalar = double>
class BasicStateVector {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = Vector<Complex>;

  explicit BasicStateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
      throw QubitCountOutOfRange("qubit count " + std::to_string(num_qubits) +
                                 " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    amplitudes_ = Amplitudes::Zero(Eigen::Index{1} << num_qubits);
    amplitudes_[0] = Complex(1);
  }

  int num_qubits() const noexcept { return num_qubits_; }
  Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
  const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  Amplitudes& amplitudes() noexcept { return amplitudes_; }
  Scalar norm() const { return amplitudes_.norm(); }

 private:
  int num_qubits_;
  Amplitudes amplitudes_;
};

using StateVector = BasicStateVector<double>;

template <typename Scalar = double>
BasicStateVector<Scalar> init_zero_state(int num_qubits) {
  return BasicStateVector<Scalar>(num_qubits);
}

/// Replaces one angle of one op by (its resolved value + delta) during a run.
/// Used for parameter-shift evaluations.
template <typename Scalar = double>
struct AngleShift {
  std::size_t op_index = 0;
  std::size_t param_index = 0;
  Scalar delta = 0;
};

/// 2x2 unitary of a single-qubit gate with its angles already resolved.
/// RX/RY/RZ use the half-angle convention exp(-i a P / 2).
template <typename Scalar>
Matrix2c<Scalar> single_qubit_matrix(GateKind kind, const std::array<Scalar, 3>& a) {
  using C = std::complex<Scalar>;
  using std::cos;
  using std::sin;
  const C i(0, 1);
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2c<Scalar> m;
  switch (kind) {
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, -i, i, 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::S: m << 1, 0, 0, i; break;
    case GateKind::SDG: m << 1, 0, 0, -i; break;
    case GateKind::T: m << 1, 0, 0, std::polar(Scalar(1), std::numbers::pi_v<Scalar> / 4); break;
    case GateKind::TDG: m << 1, 0, 0, std::polar(Scalar(1), -std::numbers::pi_v<Scalar> / 4); break;
    case GateKind::RX: {
      const Scalar c = cos(a[0] / 2), s = sin(a[0] / 2);
      m << c, -i * s, -i * s, c;
      break;
    }
    case GateKind::RY: {
      const Scalar c = cos(a[0] / 2), s = sin(a[0] / 2);
      m << c, -s, s, c;
      break;
    }
    case GateKind::RZ:
      m << std::polar(Scalar(1), -a[0] / 2), 0, 0, std::polar(Scalar(1), a[0] / 2);
      break;
    case GateKind::U1: m << 1, 0, 0, std::polar(Scalar(1), a[0]); break;
    case GateKind::U2: {
      const Scalar phi = a[0], lambda = a[1];
      m << r, -r * std::polar(Scalar(1), lambda), r * std::polar(Scalar(1), phi),
          r * std::polar(Scalar(1), phi + lambda);
      break;
    }
    case GateKind::U3: {
      const Scalar c = cos(a[0] / 2), s = sin(a[0] / 2);
      const Scalar phi = a[1], lambda = a[2];
      m << c, -s * std::polar(Scalar(1), lambda), s * std::polar(Scalar(1), phi),
          c * std::polar(Scalar(1), phi + lambda);
      break;
    }
    default:
      throw ExecutionFailure("not a single-qubit unitary: " + std::string(gate_name(kind)));
  }
  return m;
}

namespace detail {

template <typename Scalar>
std::array<Scalar, 3> resolve_angles(const GateOp& op, const Eigen::Ref<const Vector<Scalar>>& theta) {
  std::array<Scalar, 3> out{};
  for (std::size_t p = 0; p < op.params.size() && p < 3; ++p) {
    if (const auto* lit = std::get_if<Literal>(&op.params[p])) {
      out[p] = static_cast<Scalar>(lit->angle);
    } else {
      const auto slot = std::get<Trainable>(op.params[p]).slot;
      if (slot >= static_cast<std::size_t>(theta.size())) {
        throw SlotOutOfRange("slot " + std::to_string(slot) + " outside theta of length " +
                             std::to_string(theta.size()));
      }
      out[p] = theta[static_cast<Eigen::Index>(slot)];
    }
  }
  return out;
}

template <typename Scalar>
void apply_single(Vector<std::complex<Scalar>>& amp, int qubit, const Matrix2c<Scalar>& m) {
  const Eigen::Index stride = Eigen::Index{1} << qubit;
  const Eigen::Index dim = amp.size();
  const auto m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
    for (Eigen::Index j = base; j < base + stride; ++j) {
      const auto a0 = amp[j];
      const auto a1 = amp[j + stride];
      amp[j] = m00 * a0 + m01 * a1;
      amp[j + stride] = m10 * a0 + m11 * a1;
    }
  }
}

}  // namespace detail

/// Applies `op` in place. Trainable angles are read from `theta`; `shift`, if
/// given, is added to the angle at (shift->param_index) of this op.
template <typename Scalar>
void apply_gate(BasicStateVector<Scalar>& state, const GateOp& op,
                const Eigen::Ref<const Vector<std::type_identity_t<Scalar>>>& theta,
                const std::optional<std::pair<std::size_t, Scalar>>& shift = std::nullopt) {
  for (int q : op.qubits) {
    if (q < 0 || q >= state.num_qubits()) {
      throw QubitOutOfRange("qubit " + std::to_string(q) + " outside state of " +
                            std::to_string(state.num_qubits()) + " qubits");
    }
  }
  auto& amp = state.amplitudes();
  const Eigen::Index dim = amp.size();
  switch (op.kind) {
    case GateKind::BARRIER:
      return;
    case GateKind::MEASURE:
    case GateKind::RESET:
      throw ExecutionFailure("non-unitary op in simulated program: " +
                             std::string(gate_name(op.kind)));
    case GateKind::CX: {
      const Eigen::Index c = Eigen::Index{1} << op.qubits[0];
      const Eigen::Index t = Eigen::Index{1} << op.qubits[1];
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & c) && !(b & t)) std::swap(amp[b], amp[b | t]);
      return;
    }
    case GateKind::CZ: {
      const Eigen::Index mask = (Eigen::Index{1} << op.qubits[0]) | (Eigen::Index{1} << op.qubits[1]);
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & mask) == mask) amp[b] = -amp[b];
      return;
    }
    case GateKind::SWAP: {
      const Eigen::Index x = Eigen::Index{1} << op.qubits[0];
      const Eigen::Index y = Eigen::Index{1} << op.qubits[1];
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & x) && !(b & y)) std::swap(amp[b], amp[(b & ~x) | y]);
      return;
    }
    case GateKind::CCX: {
      const Eigen::Index c = (Eigen::Index{1} << op.qubits[0]) | (Eigen::Index{1} << op.qubits[1]);
      const Eigen::Index t = Eigen::Index{1} << op.qubits[2];
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & c) == c && !(b & t)) std::swap(amp[b], amp[b | t]);
      return;
    }
    default: {
      auto angles = detail::resolve_angles<Scalar>(op, theta);
      if (shift) angles.at(shift->first) += shift->second;
      detail::apply_single(amp, op.qubits[0], single_qubit_matrix<Scalar>(op.kind, angles));
      return;
    }
  }
}

/// Runs `circuit` from |0...0> with trainable angles `theta`.
template <typename Scalar>
BasicStateVector<Scalar> run(const CircuitIR& circuit, const Eigen::Ref<const Vector<Scalar>>& theta,
                             const std::optional<AngleShift<Scalar>>& shift = std::nullopt) {
  if (static_cast<std::size_t>(theta.size()) != circuit.trainable_param_count) {
    throw ShapeMismatch("theta has length " + std::to_string(theta.size()) + ", circuit has " +
                        std::to_string(circuit.trainable_param_count) + " trainable params");
  }
  auto state = init_zero_state<Scalar>(circuit.num_qubits);
  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    if (shift && shift->op_index == i) {
      apply_gate<Scalar>(state, circuit.ops[i], theta,
                         std::pair<std::size_t, Scalar>{shift->param_index, shift->delta});
    } else {
      apply_gate<Scalar>(state, circuit.ops[i], theta);
    }
  }
  return state;
}

inline StateVector run(const CircuitIR& circuit, const Eigen::VectorXd& theta) {
  return run<double>(circuit, theta);
}

/// <Z_k> for every qubit k.
template <typename Scalar>
Vector<Scalar> expect_all_z(const BasicStateVector<Scalar>& state) {
  const int n = state.num_qubits();
  const Vector<Scalar> probs = state.amplitudes().cwiseAbs2();
  Vector<Scalar> z = Vector<Scalar>::Zero(n);
  for (Eigen::Index b = 0; b < probs.size(); ++b)
    for (int k = 0; k < n; ++k) z[k] += ((b >> k) & 1) ? -probs[b] : probs[b];
  return z;
}

}  // namespace qscreen
