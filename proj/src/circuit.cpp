// Copyright 2026 The qconv Authors.
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

#include "qconv/circuit.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "qconv/gates.hpp"

namespace qconv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void collect(const Operation& op, std::set<int>& qubits) {
  for (const Control& c : op.controls) qubits.insert(c.qubit);
  std::visit(Overloaded{
                 [&](const UnitaryGate& g) { qubits.insert(g.target); },
                 [&](const OracleGate& g) {
                   for (int i = 0; i < g.input.width; ++i) qubits.insert(g.input.qubit(i));
                   for (int i = 0; i < g.output.width; ++i) qubits.insert(g.output.qubit(i));
                 },
                 [&](const MultiplexedGate& g) {
                   for (int i = 0; i < g.selector.width; ++i) qubits.insert(g.selector.qubit(i));
                   qubits.insert(g.target);
                 },
             },
             op.gate);
}

Register remap_register(const Register& r, std::span<const int> map) {
  if (r.width == 0) return r;
  const int base = map[static_cast<std::size_t>(r.offset)];
  for (int i = 1; i < r.width; ++i) {
    if (map[static_cast<std::size_t>(r.offset + i)] != base + i) {
      throw ValidationError("qubit remapping splits a register");
    }
  }
  return {base, r.width};
}

}  // namespace

GateCounter& GateCounter::operator+=(const GateCounter& o) {
  single += o.single;
  controlled += o.controlled;
  oracle += o.oracle;
  for (const auto& [k, v] : o.blocks) blocks[k] += v;
  return *this;
}

GateCounter GateCounter::scaled(std::uint64_t times) const {
  GateCounter out;
  out.single = single * times;
  out.controlled = controlled * times;
  out.oracle = oracle * times;
  for (const auto& [k, v] : blocks) out.blocks[k] = v * times;
  return out;
}

void CircuitOp::tally(const Operation& op) {
  if (std::holds_alternative<OracleGate>(op.gate)) {
    ++counter_.oracle;
  } else if (op.controls.empty() && std::holds_alternative<UnitaryGate>(op.gate)) {
    ++counter_.single;
  } else {
    ++counter_.controlled;
  }
}

CircuitOp& CircuitOp::append(Operation op) {
  tally(op);
  ops_.push_back(std::move(op));
  return *this;
}

CircuitOp& CircuitOp::gate(std::string name, int target, const Matrix2cd& u,
                           std::vector<double> params) {
  return controlled({}, std::move(name), target, u, std::move(params));
}

CircuitOp& CircuitOp::controlled(std::vector<Control> controls, std::string name, int target,
                                 const Matrix2cd& u, std::vector<double> params) {
  if (target < 0) throw ValidationError("negative target qubit");
  for (const Control& c : controls) {
    if (c.qubit == target || c.qubit < 0) throw ValidationError("control collides with target");
  }
  return append(Operation{UnitaryGate{std::move(name), target, u, std::move(params)},
                          std::move(controls)});
}

CircuitOp& CircuitOp::oracle(std::string name, const Register& input, const Register& output,
                             std::shared_ptr<const std::vector<std::uint64_t>> table,
                             std::vector<Control> controls) {
  if (input.overlaps(output)) throw ValidationError("oracle registers overlap");
  if (!table || table->size() != input.size()) {
    throw ValidationError("oracle table does not cover the input register");
  }
  return append(Operation{OracleGate{std::move(name), input, output, std::move(table)},
                          std::move(controls)});
}

CircuitOp& CircuitOp::multiplexed(std::string name, const Register& selector, int target,
                                  std::shared_ptr<const std::vector<Matrix2cd>> gates,
                                  std::vector<Control> controls) {
  if (!gates || gates->size() != selector.size()) {
    throw ValidationError("multiplexer needs one gate per selector value");
  }
  return append(Operation{MultiplexedGate{std::move(name), selector, target, std::move(gates)},
                          std::move(controls)});
}

CircuitOp& CircuitOp::append(const CircuitOp& other, std::string_view block_label) {
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
  counter_ += other.counter_;
  if (!block_label.empty()) ++counter_.blocks[std::string(block_label)];
  return *this;
}

std::vector<int> CircuitOp::support() const {
  std::set<int> qubits;
  for (const Operation& op : ops_) collect(op, qubits);
  return {qubits.begin(), qubits.end()};
}

int CircuitOp::max_qubit() const {
  const auto s = support();
  return s.empty() ? -1 : s.back();
}

CircuitOp CircuitOp::adjoint() const {
  CircuitOp out;
  out.counter_ = counter_;
  out.ops_.reserve(ops_.size());
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    Operation op = *it;
    std::visit(Overloaded{
                   [](UnitaryGate& g) { g.matrix = g.matrix.adjoint().eval(); },
                   [](OracleGate&) {},
                   [](MultiplexedGate& g) {
                     auto inv = std::make_shared<std::vector<Matrix2cd>>(*g.gates);
                     for (auto& m : *inv) m = m.adjoint().eval();
                     g.gates = std::move(inv);
                   },
               },
               op.gate);
    out.ops_.push_back(std::move(op));
  }
  return out;
}

CircuitOp CircuitOp::remapped(std::span<const int> map) const {
  const int top = max_qubit();
  if (top >= static_cast<int>(map.size())) throw ValidationError("qubit map too short");
  CircuitOp out;
  out.counter_ = counter_;
  out.ops_.reserve(ops_.size());
  for (Operation op : ops_) {
    for (Control& c : op.controls) c.qubit = map[static_cast<std::size_t>(c.qubit)];
    std::visit(Overloaded{
                   [&](UnitaryGate& g) { g.target = map[static_cast<std::size_t>(g.target)]; },
                   [&](OracleGate& g) {
                     g.input = remap_register(g.input, map);
                     g.output = remap_register(g.output, map);
                   },
                   [&](MultiplexedGate& g) {
                     g.selector = remap_register(g.selector, map);
                     g.target = map[static_cast<std::size_t>(g.target)];
                   },
               },
               op.gate);
    out.ops_.push_back(std::move(op));
  }
  return out;
}

CircuitOp CircuitOp::shifted(int offset) const {
  std::vector<int> map(static_cast<std::size_t>(std::max(0, max_qubit() + 1)));
  for (std::size_t q = 0; q < map.size(); ++q) map[q] = static_cast<int>(q) + offset;
  return remapped(map);
}

CircuitOp controlled_wrap(const CircuitOp& circuit, Control control) {
  const auto support = circuit.support();
  if (std::binary_search(support.begin(), support.end(), control.qubit)) {
    throw ValidationError("control qubit " + std::to_string(control.qubit) +
                          " is used inside the wrapped circuit");
  }
  CircuitOp out;
  for (Operation op : circuit.ops()) {
    op.controls.insert(op.controls.begin(), control);
    out.append(std::move(op));
  }
  // Block labels survive wrapping: a wrapped U_A is still one U_A call.
  for (const auto& [label, count] : circuit.counter().blocks) {
    for (std::uint64_t i = 0; i < count; ++i) out.append(CircuitOp{}, label);
  }
  return out;
}

void apply(const CircuitOp& circuit, StateVector& state) {
  for (const Operation& op : circuit.ops()) {
    const std::span<const Control> controls(op.controls);
    std::visit(Overloaded{
                   [&](const UnitaryGate& g) { apply_controlled(state, controls, g.target, g.matrix); },
                   [&](const OracleGate& g) {
                     apply_basis_oracle(state, g.input, g.output,
                                        std::span<const std::uint64_t>(*g.table), controls);
                   },
                   [&](const MultiplexedGate& g) {
                     apply_multiplexed(state, g.selector, g.target,
                                       std::span<const Matrix2cd>(*g.gates), controls);
                   },
               },
               op.gate);
  }
}

Eigen::MatrixXcd fuse(const CircuitOp& circuit, std::span<const int> support) {
  const int k = static_cast<int>(support.size());
  if (k == 0 || k > 14) throw ValidationError("fusion support must have 1..14 qubits");
  const int top = std::max(circuit.max_qubit(), support.back());
  std::vector<int> map(static_cast<std::size_t>(top + 1), -1);
  for (int i = 0; i < k; ++i) map[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] = i;
  for (int q : circuit.support()) {
    if (map[static_cast<std::size_t>(q)] < 0) {
      throw ValidationError("circuit touches qubit " + std::to_string(q) + " outside the fusion support");
    }
  }
  const CircuitOp local = circuit.remapped(map);
  const Eigen::Index dim = Eigen::Index{1} << k;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    StateVector::Vector e = StateVector::Vector::Zero(dim);
    e(col) = 1;
    auto s = StateVector::from_amplitudes(std::move(e));
    apply(local, s);
    m.col(col) = s.amplitudes();
  }
  return m;
}

namespace {

void write_controls(std::ostream& os, const std::vector<Control>& controls) {
  if (controls.empty()) return;
  os << " ctrl";
  for (const Control& c : controls) os << " q" << c.qubit << '=' << (c.value ? 1 : 0);
}

}  // namespace

std::string serialize(const CircuitOp& circuit) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (const Operation& op : circuit.ops()) {
    std::visit(Overloaded{
                   [&](const UnitaryGate& g) {
                     os << g.name << " q" << g.target;
                     write_controls(os, op.controls);
                     if (!g.params.empty()) {
                       os << " params";
                       for (double p : g.params) os << ' ' << p;
                     }
                   },
                   [&](const OracleGate& g) {
                     os << "oracle:" << g.name << " in " << g.input.offset << ':' << g.input.width
                        << " out " << g.output.offset << ':' << g.output.width;
                     write_controls(os, op.controls);
                   },
                   [&](const MultiplexedGate& g) {
                     os << "mux:" << g.name << " sel " << g.selector.offset << ':'
                        << g.selector.width << " q" << g.target;
                     write_controls(os, op.controls);
                   },
               },
               op.gate);
    os << '\n';
  }
  return os.str();
}

void append_cnot(CircuitOp& c, int control, int target) {
  c.controlled({{control, true}}, "x", target, gates::X());
}

void append_cswap(CircuitOp& c, int control, int a, int b) {
  append_cnot(c, b, a);
  c.controlled({{control, true}, {a, true}}, "x", b, gates::X());
  append_cnot(c, b, a);
}

void append_zero_reflection(CircuitOp& c, std::span<const int> qubits) {
  if (qubits.empty()) throw ValidationError("zero reflection needs at least one qubit");
  std::vector<Control> controls;
  for (std::size_t i = 1; i < qubits.size(); ++i) controls.push_back({qubits[i], false});
  c.controlled(std::move(controls), "zflip", qubits[0], gates::zero_flip());
}

}  // namespace qconv
