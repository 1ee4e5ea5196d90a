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

// Test-only oracles. Nothing here calls into the simulator kernels: gate
// matrices are rebuilt from Pauli matrices and whole circuits are multiplied
// out as dense 2^n x 2^n unitaries.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qscreen/qasm.hpp"
#include "qscreen/rng.hpp"

namespace qscreen::testing {

using cd = std::complex<double>;

inline Eigen::Matrix2cd pauli_i() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

/// exp(-i a P / 2) = cos(a/2) I - i sin(a/2) P
inline Eigen::Matrix2cd pauli_rotation(const Eigen::Matrix2cd& p, double a) {
  return std::cos(a / 2) * pauli_i() - cd(0, 1) * std::sin(a / 2) * p;
}

inline Eigen::Matrix2cd phase(double lambda) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  m(1, 1) = std::exp(cd(0, lambda));
  return m;
}

/// U3 as e^{i(phi+lambda)/2} RZ(phi) RY(theta) RZ(lambda).
inline Eigen::Matrix2cd oracle_u3(double theta, double phi, double lambda) {
  return std::exp(cd(0, (phi + lambda) / 2)) * pauli_rotation(pauli_z(), phi) *
         pauli_rotation(pauli_y(), theta) * pauli_rotation(pauli_z(), lambda);
}

inline Eigen::Matrix2cd oracle_gate(GateKind kind, const std::vector<double>& a) {
  const double pi = std::numbers::pi;
  switch (kind) {
    case GateKind::H: return (pauli_x() + pauli_z()) / std::sqrt(2.0);
    case GateKind::X: return pauli_x();
    case GateKind::Y: return pauli_y();
    case GateKind::Z: return pauli_z();
    case GateKind::S: return phase(pi / 2);
    case GateKind::SDG: return phase(-pi / 2);
    case GateKind::T: return phase(pi / 4);
    case GateKind::TDG: return phase(-pi / 4);
    case GateKind::RX: return pauli_rotation(pauli_x(), a[0]);
    case GateKind::RY: return pauli_rotation(pauli_y(), a[0]);
    case GateKind::RZ: return pauli_rotation(pauli_z(), a[0]);
    case GateKind::U1: return phase(a[0]);
    case GateKind::U2: return oracle_u3(pi / 2, a[0], a[1]);
    case GateKind::U3: return oracle_u3(a[0], a[1], a[2]);
    default: throw std::logic_error("not a single-qubit gate");
  }
}

/// Full 2^n unitary of one op (qubit k = bit k).
inline Eigen::MatrixXcd embed(const GateOp& op, const std::vector<double>& angles, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  auto bit = [](Eigen::Index b, int k) { return (b >> k) & 1; };
  switch (op.kind) {
    case GateKind::CX:
    case GateKind::CCX: {
      const int t = op.qubits.back();
      for (Eigen::Index b = 0; b < dim; ++b) {
        bool fire = true;
        for (std::size_t c = 0; c + 1 < op.qubits.size(); ++c) fire = fire && bit(b, op.qubits[c]);
        u(fire ? b ^ (Eigen::Index{1} << t) : b, b) = 1;
      }
      return u;
    }
    case GateKind::CZ:
      for (Eigen::Index b = 0; b < dim; ++b)
        u(b, b) = (bit(b, op.qubits[0]) && bit(b, op.qubits[1])) ? -1.0 : 1.0;
      return u;
    case GateKind::SWAP:
      for (Eigen::Index b = 0; b < dim; ++b) {
        Eigen::Index s = b & ~((Eigen::Index{1} << op.qubits[0]) | (Eigen::Index{1} << op.qubits[1]));
        s |= bit(b, op.qubits[0]) << op.qubits[1];
        s |= bit(b, op.qubits[1]) << op.qubits[0];
        u(s, b) = 1;
      }
      return u;
    default: {
      const Eigen::Matrix2cd m = oracle_gate(op.kind, angles);
      const int k = op.qubits[0];
      const Eigen::Index mask = ~(Eigen::Index{1} << k);
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
          if ((r & mask) == (c & mask)) u(r, c) = m(bit(r, k), bit(c, k));
      return u;
    }
  }
}

inline std::vector<double> angles_of(const GateOp& op, const Eigen::VectorXd& theta) {
  std::vector<double> out;
  for (const auto& p : op.params) {
    if (const auto* l = std::get_if<Literal>(&p)) out.push_back(l->angle);
    else out.push_back(theta[static_cast<Eigen::Index>(std::get<Trainable>(p).slot)]);
  }
  return out;
}

/// Product of the embedded op unitaries, last op leftmost.
inline Eigen::MatrixXcd dense_unitary(const CircuitIR& c, const Eigen::VectorXd& theta) {
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& op : c.ops) {
    if (!is_unitary(op.kind) || op.kind == GateKind::BARRIER) continue;
    u = embed(op, angles_of(op, theta), c.num_qubits) * u;
  }
  return u;
}

inline Eigen::VectorXcd dense_state(const CircuitIR& c, const Eigen::VectorXd& theta) {
  return dense_unitary(c, theta).col(0);
}

/// <Z_k> from a dense state, as <psi| Z_k |psi> with Z_k built as a diagonal.
inline Eigen::VectorXd dense_expect_z(const Eigen::VectorXcd& psi, int n) {
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd z_psi = psi;
    for (Eigen::Index b = 0; b < psi.size(); ++b)
      if ((b >> k) & 1) z_psi[b] = -z_psi[b];
    out[k] = psi.dot(z_psi).real();
  }
  return out;
}

inline const std::vector<GateKind>& all_unitary_kinds() {
  static const std::vector<GateKind> kinds{
      GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,   GateKind::SDG,
      GateKind::T,  GateKind::TDG, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::U1,
      GateKind::U2, GateKind::U3, GateKind::CX, GateKind::CZ, GateKind::SWAP, GateKind::CCX};
  return kinds;
}

/// Random circuit over `kinds` (those needing more qubits than n are
/// skipped). Angles uniform in [-pi, pi].
inline CircuitIR random_circuit(Rng& rng, int n, int gates, const std::vector<GateKind>& kinds) {
  CircuitIR c;
  c.source_id = "random";
  c.num_qubits = n;
  while (static_cast<int>(c.ops.size()) < gates) {
    const GateKind kind = kinds[uniform_index(rng, kinds.size())];
    const int arity = qubit_arity(kind);
    if (arity > n) continue;
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    shuffle(pool, rng);
    GateOp op{kind, std::vector<int>(pool.begin(), pool.begin() + arity), {}};
    for (int p = 0; p < param_arity(kind); ++p)
      op.params.emplace_back(Literal{uniform(rng, -std::numbers::pi, std::numbers::pi)});
    c.ops.push_back(std::move(op));
  }
  return c;
}

/// Central difference derivative of a scalar function of a vector.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        Eigen::VectorXd x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double plus = f(x);
    x[i] = saved - h;
    const double minus = f(x);
    x[i] = saved;
    g[i] = (plus - minus) / (2 * h);
  }
  return g;
}

/// |a - b| <= max(abs_tol, rel_tol * max(|a|, |b|))
inline bool close(double a, double b, double rel_tol, double abs_tol) {
  return std::abs(a - b) <= std::max(abs_tol, rel_tol * std::max(std::abs(a), std::abs(b)));
}

}  // namespace qscreen::testing
