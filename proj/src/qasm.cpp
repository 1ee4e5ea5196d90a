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

#include "qscreen/qasm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "qscreen/errors.hpp"

namespace qscreen {

namespace {

struct GateInfo {
  GateKind kind;
  std::string_view name;
  int qubits;
  int params;
};

constexpr std::array<GateInfo, 21> kGateTable{{
    {GateKind::H, "h", 1, 0},        {GateKind::X, "x", 1, 0},
    {GateKind::Y, "y", 1, 0},        {GateKind::Z, "z", 1, 0},
    {GateKind::S, "s", 1, 0},        {GateKind::SDG, "sdg", 1, 0},
    {GateKind::T, "t", 1, 0},        {GateKind::TDG, "tdg", 1, 0},
    {GateKind::RX, "rx", 1, 1},      {GateKind::RY, "ry", 1, 1},
    {GateKind::RZ, "rz", 1, 1},      {GateKind::U1, "u1", 1, 1},
    {GateKind::U2, "u2", 1, 2},      {GateKind::U3, "u3", 1, 3},
    {GateKind::CX, "cx", 2, 0},      {GateKind::CZ, "cz", 2, 0},
    {GateKind::SWAP, "swap", 2, 0},  {GateKind::CCX, "ccx", 3, 0},
    {GateKind::BARRIER, "barrier", 0, 0},
    {GateKind::MEASURE, "measure", 1, 0},
    {GateKind::RESET, "reset", 1, 0},
}};

const GateInfo& info(GateKind kind) noexcept {
  return kGateTable[static_cast<std::size_t>(kind)];
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
  Tok type;
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  const auto n = src.size();
  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= n) throw QasmSyntaxError(line, "unterminated block comment");
      i += 2;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < n && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < n && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < n && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= n || src[j] != '"') throw QasmSyntaxError(line, "unterminated string");
      out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), line});
      i = j + 1;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", line});
      i += 2;
      continue;
    }
    if (std::string_view("()[]{},;+-*/^=").find(c) != std::string_view::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), line});
      ++i;
      continue;
    }
    throw QasmSyntaxError(line, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line});
  return out;
}

// ---------------------------------------------------------------------------
// Angle expressions

struct Expr {
  enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Num;
  double value = 0.0;
  std::string name;
  std::vector<Expr> args;
};

Expr node(Expr::Op op, double value = 0.0) {
  Expr e;
  e.op = op;
  e.value = value;
  return e;
}

using Env = std::map<std::string, double, std::less<>>;

double eval(const Expr& e, const Env& env, int line) {
  switch (e.op) {
    case Expr::Op::Num:
      return e.value;
    case Expr::Op::Var: {
      auto it = env.find(e.name);
      if (it == env.end()) throw QasmSyntaxError(line, "unknown identifier '" + e.name + "'");
      return it->second;
    }
    case Expr::Op::Neg:
      return -eval(e.args[0], env, line);
    case Expr::Op::Add:
      return eval(e.args[0], env, line) + eval(e.args[1], env, line);
    case Expr::Op::Sub:
      return eval(e.args[0], env, line) - eval(e.args[1], env, line);
    case Expr::Op::Mul:
      return eval(e.args[0], env, line) * eval(e.args[1], env, line);
    case Expr::Op::Div:
      return eval(e.args[0], env, line) / eval(e.args[1], env, line);
    case Expr::Op::Pow:
      return std::pow(eval(e.args[0], env, line), eval(e.args[1], env, line));
    case Expr::Op::Call: {
      const double x = eval(e.args[0], env, line);
      if (e.name == "sin") return std::sin(x);
      if (e.name == "cos") return std::cos(x);
      if (e.name == "tan") return std::tan(x);
      if (e.name == "exp") return std::exp(x);
      if (e.name == "ln") return std::log(x);
      if (e.name == "sqrt") return std::sqrt(x);
      throw QasmSyntaxError(line, "unknown function '" + e.name + "'");
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Parser

struct Register {
  std::string name;
  int offset;
  int size;
};

/// A qubit argument: a register, optionally indexed.
struct Arg {
  std::string reg;
  std::optional<int> index;
  int line;
};

struct BodyStmt {
  std::string name;
  std::vector<Expr> params;
  std::vector<std::string> qubits;
  int line;
};

struct GateDef {
  std::vector<std::string> params;
  std::vector<std::string> qubits;
  std::vector<BodyStmt> body;
  bool opaque = false;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  CircuitIR parse(std::string source_id) {
    circuit_.source_id = std::move(source_id);
    while (peek().type != Tok::End) statement();
    if (qregs_.empty()) throw QasmSyntaxError(peek().line, "no qreg declaration");
    return std::move(circuit_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  bool accept(std::string_view sym) {
    if (peek().type == Tok::Symbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view sym) {
    if (!accept(sym)) {
      throw QasmSyntaxError(peek().line, "expected '" + std::string(sym) + "' but found '" +
                                             peek().text + "'");
    }
  }

  std::string ident() {
    if (peek().type != Tok::Ident)
      throw QasmSyntaxError(peek().line, "expected identifier but found '" + peek().text + "'");
    return next().text;
  }

  int integer() {
    const Token& t = peek();
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.type != Tok::Number || ec != std::errc{} || p != t.text.data() + t.text.size())
      throw QasmSyntaxError(t.line, "expected integer but found '" + t.text + "'");
    ++pos_;
    return v;
  }

  void statement() {
    const Token& t = peek();
    if (t.type != Tok::Ident) throw QasmSyntaxError(t.line, "unexpected '" + t.text + "'");
    const std::string kw = t.text;
    if (kw == "OPENQASM") {
      next();
      if (peek().type != Tok::Number) throw QasmSyntaxError(peek().line, "expected version");
      next();
      expect(";");
    } else if (kw == "include") {
      next();
      if (peek().type != Tok::String) throw QasmSyntaxError(peek().line, "expected file name");
      next();
      expect(";");
    } else if (kw == "qreg" || kw == "creg") {
      next();
      const int line = peek().line;
      std::string name = ident();
      expect("[");
      const int size = integer();
      expect("]");
      expect(";");
      if (size <= 0) throw QasmSyntaxError(line, "register size must be positive");
      if (kw == "qreg") {
        if (find_qreg(name)) throw QasmSyntaxError(line, "duplicate qreg '" + name + "'");
        qregs_.push_back({name, circuit_.num_qubits, size});
        circuit_.num_qubits += size;
      } else {
        cregs_[name] = size;
      }
    } else if (kw == "gate" || kw == "opaque") {
      gate_definition(kw == "opaque");
    } else if (kw == "measure") {
      next();
      auto q = argument();
      if (peek().type != Tok::Arrow) throw QasmSyntaxError(peek().line, "expected '->'");
      next();
      auto c = argument();
      expect(";");
      if (!cregs_.contains(c.reg)) throw QasmSyntaxError(c.line, "unknown creg '" + c.reg + "'");
      for (int qubit : resolve(q)) emit(GateKind::MEASURE, {qubit}, {}, q.line);
    } else if (kw == "reset") {
      next();
      auto q = argument();
      expect(";");
      for (int qubit : resolve(q)) emit(GateKind::RESET, {qubit}, {}, q.line);
    } else if (kw == "barrier") {
      const int line = next().line;
      std::vector<int> qubits;
      for (const auto& a : argument_list())
        for (int qubit : resolve(a)) qubits.push_back(qubit);
      expect(";");
      std::sort(qubits.begin(), qubits.end());
      qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
      emit(GateKind::BARRIER, std::move(qubits), {}, line);
    } else if (kw == "if") {
      throw QasmSyntaxError(t.line, "classical control flow is not supported");
    } else {
      gate_call();
    }
  }

  // expr := term (('+'|'-') term)*
  Expr expression() {
    Expr lhs = term();
    while (peek().type == Tok::Symbol && (peek().text == "+" || peek().text == "-")) {
      const bool add = next().text == "+";
      Expr e = node(add ? Expr::Op::Add : Expr::Op::Sub);
      e.args = {std::move(lhs), term()};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().type == Tok::Symbol && (peek().text == "*" || peek().text == "/")) {
      const bool mul = next().text == "*";
      Expr e = node(mul ? Expr::Op::Mul : Expr::Op::Div);
      e.args = {std::move(lhs), unary()};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr unary() {
    if (accept("-")) {
      Expr e = node(Expr::Op::Neg);
      e.args = {unary()};
      return e;
    }
    if (accept("+")) return unary();
    Expr base = primary();
    if (accept("^")) {
      Expr e = node(Expr::Op::Pow);
      e.args = {std::move(base), unary()};
      return e;
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.type == Tok::Number) {
      next();
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{} || p != t.text.data() + t.text.size())
        throw QasmSyntaxError(t.line, "malformed number '" + t.text + "'");
      return node(Expr::Op::Num, v);
    }
    if (t.type == Tok::Ident) {
      std::string name = next().text;
      if (name == "pi") return node(Expr::Op::Num, std::numbers::pi);
      if (accept("(")) {
        Expr e = node(Expr::Op::Call);
        e.name = std::move(name);
        e.args = {expression()};
        expect(")");
        return e;
      }
      Expr e = node(Expr::Op::Var);
      e.name = std::move(name);
      return e;
    }
    if (accept("(")) {
      Expr e = expression();
      expect(")");
      return e;
    }
    throw QasmSyntaxError(t.line, "unexpected '" + t.text + "' in expression");
  }

  std::vector<Expr> optional_param_list() {
    std::vector<Expr> params;
    if (accept("(")) {
      if (!accept(")")) {
        params.push_back(expression());
        while (accept(",")) params.push_back(expression());
        expect(")");
      }
    }
    return params;
  }

  Arg argument() {
    const int line = peek().line;
    Arg a{ident(), std::nullopt, line};
    if (accept("[")) {
      a.index = integer();
      expect("]");
    }
    return a;
  }

  std::vector<Arg> argument_list() {
    std::vector<Arg> args{argument()};
    while (accept(",")) args.push_back(argument());
    return args;
  }

  const Register* find_qreg(std::string_view name) const {
    for (const auto& r : qregs_)
      if (r.name == name) return &r;
    return nullptr;
  }

  std::vector<int> resolve(const Arg& a) const {
    const Register* r = find_qreg(a.reg);
    if (!r) throw QasmSyntaxError(a.line, "unknown qreg '" + a.reg + "'");
    if (a.index) {
      if (*a.index < 0 || *a.index >= r->size) {
        throw QubitOutOfRange("line " + std::to_string(a.line) + ": " + a.reg + "[" +
                              std::to_string(*a.index) + "] outside register of size " +
                              std::to_string(r->size));
      }
      return {r->offset + *a.index};
    }
    std::vector<int> all(static_cast<std::size_t>(r->size));
    for (int i = 0; i < r->size; ++i) all[static_cast<std::size_t>(i)] = r->offset + i;
    return all;
  }

  void gate_definition(bool opaque) {
    next();
    const int line = peek().line;
    std::string name = ident();
    GateDef def;
    def.opaque = opaque;
    if (accept("(")) {
      if (!accept(")")) {
        def.params.push_back(ident());
        while (accept(",")) def.params.push_back(ident());
        expect(")");
      }
    }
    def.qubits.push_back(ident());
    while (accept(",")) def.qubits.push_back(ident());
    if (opaque) {
      expect(";");
    } else {
      expect("{");
      while (!accept("}")) {
        if (peek().type == Tok::End) throw QasmSyntaxError(line, "unterminated gate body");
        BodyStmt s;
        s.line = peek().line;
        s.name = ident();
        s.params = optional_param_list();
        s.qubits.push_back(ident());
        while (accept(",")) s.qubits.push_back(ident());
        expect(";");
        for (const auto& q : s.qubits) {
          if (std::find(def.qubits.begin(), def.qubits.end(), q) == def.qubits.end())
            throw QasmSyntaxError(s.line, "unknown gate argument '" + q + "'");
        }
        def.body.push_back(std::move(s));
      }
    }
    gates_[name] = std::move(def);
  }

  void gate_call() {
    const int line = peek().line;
    std::string name = ident();
    std::vector<Expr> params = optional_param_list();
    std::vector<Arg> args = argument_list();
    expect(";");

    std::vector<std::vector<int>> resolved;
    std::size_t width = 1;
    for (const auto& a : args) {
      resolved.push_back(resolve(a));
      if (!a.index) {
        if (width != 1 && width != resolved.back().size())
          throw QasmSyntaxError(line, "register arguments of different sizes");
        width = resolved.back().size();
      }
    }
    std::vector<double> values;
    for (const auto& p : params) values.push_back(eval(p, Env{}, line));

    for (std::size_t i = 0; i < width; ++i) {
      std::vector<int> qubits;
      for (const auto& r : resolved) qubits.push_back(r.size() == 1 ? r[0] : r[i]);
      apply(name, values, qubits, line, 0);
    }
  }

  void apply(const std::string& name, const std::vector<double>& values,
             const std::vector<int>& qubits, int line, int depth) {
    if (auto kind = gate_from_name(name); kind && is_unitary(*kind)) {
      if (static_cast<int>(values.size()) != param_arity(*kind)) {
        throw QasmSyntaxError(line, name + " takes " + std::to_string(param_arity(*kind)) +
                                        " parameters, got " + std::to_string(values.size()));
      }
      std::vector<ParamValue> ps;
      for (double v : values) ps.emplace_back(Literal{v});
      emit(*kind, qubits, std::move(ps), line);
      return;
    }
    auto it = gates_.find(name);
    if (it == gates_.end() || it->second.opaque) throw UnsupportedGate(name);
    if (depth > 64) throw QasmSyntaxError(line, "gate definitions nested too deeply");
    const GateDef& def = it->second;
    if (values.size() != def.params.size() || qubits.size() != def.qubits.size())
      throw QasmSyntaxError(line, "wrong number of arguments to gate '" + name + "'");
    Env env;
    for (std::size_t i = 0; i < values.size(); ++i) env[def.params[i]] = values[i];
    for (const auto& s : def.body) {
      std::vector<double> inner;
      for (const auto& e : s.params) inner.push_back(eval(e, env, s.line));
      std::vector<int> mapped;
      for (const auto& formal : s.qubits) {
        auto at = std::find(def.qubits.begin(), def.qubits.end(), formal);
        mapped.push_back(qubits[static_cast<std::size_t>(at - def.qubits.begin())]);
      }
      if (s.name == "barrier") {
        std::sort(mapped.begin(), mapped.end());
        emit(GateKind::BARRIER, std::move(mapped), {}, s.line);
        continue;
      }
      apply(s.name, inner, mapped, s.line, depth + 1);
    }
  }

  void emit(GateKind kind, std::vector<int> qubits, std::vector<ParamValue> params, int line) {
    const int arity = qubit_arity(kind);
    if (arity != 0 && static_cast<int>(qubits.size()) != arity) {
      throw QasmSyntaxError(line, std::string(gate_name(kind)) + " acts on " +
                                      std::to_string(arity) + " qubits, got " +
                                      std::to_string(qubits.size()));
    }
    for (std::size_t i = 0; i < qubits.size(); ++i)
      for (std::size_t j = i + 1; j < qubits.size(); ++j)
        if (qubits[i] == qubits[j]) throw QasmSyntaxError(line, "repeated qubit argument");
    circuit_.ops.push_back({kind, std::move(qubits), std::move(params)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  CircuitIR circuit_;
  std::vector<Register> qregs_;
  std::map<std::string, int, std::less<>> cregs_;
  std::map<std::string, GateDef, std::less<>> gates_;
};

}  // namespace

int qubit_arity(GateKind kind) noexcept { return info(kind).qubits; }
int param_arity(GateKind kind) noexcept { return info(kind).params; }
std::string_view gate_name(GateKind kind) noexcept { return info(kind).name; }

bool is_unitary(GateKind kind) noexcept {
  return kind != GateKind::BARRIER && kind != GateKind::MEASURE && kind != GateKind::RESET;
}

bool is_parametric(GateKind kind) noexcept { return param_arity(kind) > 0; }

std::optional<GateKind> gate_from_name(std::string_view name) noexcept {
  if (name == "U") return GateKind::U3;
  if (name == "CX") return GateKind::CX;
  for (const auto& g : kGateTable)
    if (g.name == name) return g.kind;
  return std::nullopt;
}

GateSet default_trainable_set() { return {GateKind::RY, GateKind::RZ, GateKind::U2}; }

Eigen::VectorXd CircuitIR::initial_angles() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(trainable_param_count));
  for (const auto& op : ops)
    for (const auto& p : op.params)
      if (const auto* t = std::get_if<Trainable>(&p))
        if (t->slot < trainable_param_count) out[static_cast<Eigen::Index>(t->slot)] = t->initial;
  return out;
}

CircuitIR parse_qasm(std::string_view text, std::string source_id) {
  return Parser(text).parse(std::move(source_id));
}

CircuitIR parse_qasm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_qasm(ss.str(), path.stem().string());
}

CircuitIR mark_trainable(CircuitIR circuit, const GateSet& trainable) {
  std::size_t slot = 0;
  for (auto& op : circuit.ops) {
    const bool train = trainable.contains(op.kind);
    for (auto& p : op.params) {
      const double angle = std::visit(
          [](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Literal>) {
              return v.angle;
            } else {
              return v.initial;
            }
          },
          p);
      if (train) {
        p = Trainable{slot++, angle};
      } else {
        p = Literal{angle};
      }
    }
  }
  circuit.trainable_param_count = slot;
  return circuit;
}

CircuitIR strip_nonunitary(CircuitIR circuit) {
  std::erase_if(circuit.ops, [](const GateOp& op) { return !is_unitary(op.kind); });
  return circuit;
}

std::size_t count_trainable_params(const CircuitIR& circuit) {
  std::size_t total = 0;
  for (const auto& op : circuit.ops) {
    const bool any = std::any_of(op.params.begin(), op.params.end(), [](const ParamValue& p) {
      return std::holds_alternative<Trainable>(p);
    });
    if (any) total += static_cast<std::size_t>(param_arity(op.kind));
  }
  return total;
}

std::string to_qasm(const CircuitIR& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out << "qreg q[" << circuit.num_qubits << "];\n";
  const bool measures = std::any_of(circuit.ops.begin(), circuit.ops.end(),
                                    [](const GateOp& op) { return op.kind == GateKind::MEASURE; });
  if (measures) out << "creg c[" << circuit.num_qubits << "];\n";

  char buf[40];
  auto qubit_list = [&](const std::vector<int>& qs) {
    for (std::size_t i = 0; i < qs.size(); ++i) out << (i ? "," : "") << "q[" << qs[i] << "]";
  };
  for (const auto& op : circuit.ops) {
    if (op.kind == GateKind::MEASURE) {
      out << "measure q[" << op.qubits[0] << "] -> c[" << op.qubits[0] << "];\n";
      continue;
    }
    if (op.kind == GateKind::BARRIER && op.qubits.empty()) continue;
    out << gate_name(op.kind);
    if (!op.params.empty()) {
      out << "(";
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        const double v = std::holds_alternative<Literal>(op.params[i])
                             ? std::get<Literal>(op.params[i]).angle
                             : std::get<Trainable>(op.params[i]).initial;
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << (i ? "," : "") << buf;
      }
      out << ")";
    }
    out << " ";
    qubit_list(op.qubits);
    out << ";\n";
  }
  return out.str();
}

}  // namespace qscreen
