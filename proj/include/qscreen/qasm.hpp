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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace qscreen {

enum class GateKind : std::uint8_t {
  H, X, Y, Z, S, SDG, T, TDG,
  RX, RY, RZ, U1, U2, U3,
  CX, CZ, SWAP, CCX,
  BARRIER, MEASURE, RESET,
};

/// Number of qubits the gate acts on. BARRIER spans any number and reports 0.
int qubit_arity(GateKind kind) noexcept;

/// Number of angle parameters the gate takes (its delta).
int param_arity(GateKind kind) noexcept;

bool is_unitary(GateKind kind) noexcept;
bool is_parametric(GateKind kind) noexcept;

std::string_view gate_name(GateKind kind) noexcept;

/// Lookup by OpenQASM spelling. Also accepts the builtins `U` (as U3) and `CX`.
std::optional<GateKind> gate_from_name(std::string_view name) noexcept;

struct Literal {
  double angle = 0.0;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// A slot into the trainable vector theta. `initial` keeps the angle the
/// source program had at that position, for optional warm starts.
struct Trainable {
  std::size_t slot = 0;
  double initial = 0.0;
  friend bool operator==(const Trainable&, const Trainable&) = default;
};

using ParamValue = std::variant<Literal, Trainable>;

struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;
  std::vector<ParamValue> params;
  friend bool operator==(const GateOp&, const GateOp&) = default;
};

struct CircuitIR {
  std::string source_id;
  int num_qubits = 0;
  std::vector<GateOp> ops;
  std::size_t trainable_param_count = 0;

  /// Source angles of every trainable slot, indexed by slot.
  Eigen::VectorXd initial_angles() const;

  friend bool operator==(const CircuitIR&, const CircuitIR&) = default;
};

using GateSet = std::set<GateKind>;

/// {RY, RZ, U2}
GateSet default_trainable_set();

/// Parses an OpenQASM 2.0 program. All angles come back as Literal.
/// Throws QasmSyntaxError, UnsupportedGate or QubitOutOfRange.
CircuitIR parse_qasm(std::string_view text, std::string source_id = {});

/// Reads and parses a file; the filename stem becomes the source id.
CircuitIR parse_qasm_file(const std::filesystem::path& path);

/// Turns every angle of every gate whose kind is in `trainable` into a
/// Trainable slot, numbered consecutively in program order. Other gates keep
/// their literal angles.
CircuitIR mark_trainable(CircuitIR circuit, const GateSet& trainable);

/// Drops BARRIER, MEASURE and RESET, keeping the order of everything else.
CircuitIR strip_nonunitary(CircuitIR circuit);

/// Sum of param_arity over ops carrying Trainable params, counted from scratch.
std::size_t count_trainable_params(const CircuitIR& circuit);

/// Canonical OpenQASM 2.0 text: a single `q` register, 17 significant digits
/// for angles. Trainable params are written as their initial angle.
std::string to_qasm(const CircuitIR& circuit);

}  // namespace qscreen
