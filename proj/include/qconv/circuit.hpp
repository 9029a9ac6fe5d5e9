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

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qconv/state_vector.hpp"

namespace qconv {

struct UnitaryGate {
  std::string name;
  int target = 0;
  Matrix2cd matrix;
  std::vector<double> params;
};

/// Exact XOR oracle |a>|b> -> |a>|b ^ table[a]>. Self-inverse.
struct OracleGate {
  std::string name;
  Register input;
  Register output;
  std::shared_ptr<const std::vector<std::uint64_t>> table;
};

/// Uniformly controlled single-qubit gate: gates[v] acts on `target` when
/// `selector` holds v.
struct MultiplexedGate {
  std::string name;
  Register selector;
  int target = 0;
  std::shared_ptr<const std::vector<Matrix2cd>> gates;
};

struct Operation {
  std::variant<UnitaryGate, OracleGate, MultiplexedGate> gate;
  std::vector<Control> controls;
};

/// Per-category tally of a circuit. `blocks` counts labelled sub-circuit
/// invocations such as "U_A".
struct GateCounter {
  std::uint64_t single = 0;
  std::uint64_t controlled = 0;
  std::uint64_t oracle = 0;
  std::map<std::string, std::uint64_t> blocks;

  std::uint64_t total() const { return single + controlled + oracle; }
  std::uint64_t block(const std::string& label) const {
    auto it = blocks.find(label);
    return it == blocks.end() ? 0 : it->second;
  }
  GateCounter& operator+=(const GateCounter& o);
  GateCounter scaled(std::uint64_t times) const;
  friend bool operator==(const GateCounter&, const GateCounter&) = default;
};

class CircuitOp {
 public:
  CircuitOp& gate(std::string name, int target, const Matrix2cd& u,
                  std::vector<double> params = {});
  CircuitOp& controlled(std::vector<Control> controls, std::string name, int target,
                        const Matrix2cd& u, std::vector<double> params = {});
  CircuitOp& oracle(std::string name, const Register& input, const Register& output,
                    std::shared_ptr<const std::vector<std::uint64_t>> table,
                    std::vector<Control> controls = {});
  CircuitOp& multiplexed(std::string name, const Register& selector, int target,
                         std::shared_ptr<const std::vector<Matrix2cd>> gates,
                         std::vector<Control> controls = {});

  /// Appends every operation of `other`; a non-empty label counts one
  /// invocation of that block on top of the blocks `other` already carries.
  CircuitOp& append(const CircuitOp& other, std::string_view block_label = {});
  CircuitOp& append(Operation op);

  const std::vector<Operation>& ops() const { return ops_; }
  const GateCounter& counter() const { return counter_; }
  bool empty() const { return ops_.empty(); }

  /// Sorted list of every qubit an operation touches, controls included.
  std::vector<int> support() const;
  int max_qubit() const;

  CircuitOp adjoint() const;
  /// Relabels qubit q as map[q]. Registers must stay contiguous.
  CircuitOp remapped(std::span<const int> map) const;
  CircuitOp shifted(int offset) const;

 private:
  void tally(const Operation& op);

  std::vector<Operation> ops_;
  GateCounter counter_;
};

/// Adds `control` to every operation.
CircuitOp controlled_wrap(const CircuitOp& circuit, Control control);

void apply(const CircuitOp& circuit, StateVector& state);

/// Dense matrix of `circuit` on `support` (ascending; support[0] is the local
/// least significant bit). Every touched qubit must be in `support`.
Eigen::MatrixXcd fuse(const CircuitOp& circuit, std::span<const int> support);

/// Line-based text form: one operation per line,
/// `name q<target> [ctrl q<i>=<v> ...] [params p ...]` for gates and
/// `oracle:<name> in <off>:<width> out <off>:<width> [ctrl ...]` for oracles.
std::string serialize(const CircuitOp& circuit);

// Composite helpers.
void append_cnot(CircuitOp& c, int control, int target);
/// Controlled swap of a and b, as CNOT(b->a) Toffoli(ctrl,a->b) CNOT(b->a).
void append_cswap(CircuitOp& c, int control, int a, int b);
/// I - 2|0...0><0...0| on `qubits`.
void append_zero_reflection(CircuitOp& c, std::span<const int> qubits);

}  // namespace qconv
