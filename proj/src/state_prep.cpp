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

#include "qconv/state_prep.hpp"

#include <cmath>

#include "qconv/gates.hpp"

namespace qconv {

namespace {

std::complex<double> unit_phase(std::complex<double> c) {
  const double a = std::abs(c);
  return a == 0 ? std::complex<double>(1) : c / a;
}

}  // namespace

PrepTree PrepTree::build(const Eigen::VectorXcd& data, bool normalize) {
  const auto n = static_cast<std::uint64_t>(data.size());
  if (n < 2 || (n & (n - 1)) != 0) throw ValidationError("data length must be a power of two >= 2");
  if (!data.allFinite()) throw ValidationError("data contains non-finite values");
  const double norm = data.norm();
  if (norm == 0) throw ValidationError("data vector is zero");

  PrepTree t;
  while ((std::uint64_t{1} << t.depth_) < n) ++t.depth_;
  Eigen::VectorXcd c = data;
  if (normalize && std::abs(norm - 1) > 1e-9) {
    c /= norm;
    t.renormalized_ = true;
  }
  t.nodes_.assign(2 * n, 0.0);
  t.phases_.resize(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    t.nodes_[n + j] = std::norm(c(static_cast<Eigen::Index>(j)));
    t.phases_[j] = unit_phase(c(static_cast<Eigen::Index>(j)));
  }
  for (std::uint64_t i = n - 1; i >= 1; --i) t.nodes_[i] = t.nodes_[2 * i] + t.nodes_[2 * i + 1];
  return t;
}

double PrepTree::node(int level, std::uint64_t k) const {
  if (level < 0 || level > depth_ || k >= (std::uint64_t{1} << level)) {
    throw ValidationError("tree node out of range");
  }
  return nodes_[(std::uint64_t{1} << level) + k];
}

std::complex<double> PrepTree::amplitude(std::uint64_t j) const {
  return std::sqrt(leaf(j) / root()) * phases_.at(j);
}

Eigen::VectorXcd PrepTree::amplitudes() const {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(size()));
  for (std::uint64_t j = 0; j < size(); ++j) out(static_cast<Eigen::Index>(j)) = amplitude(j);
  return out;
}

double PrepTree::angle(int level, std::uint64_t k) const {
  if (level >= depth_) throw ValidationError("leaves carry no rotation");
  const double parent = node(level, k);
  if (parent == 0) return 0;
  const double ratio = std::min(1.0, node(level + 1, 2 * k) / parent);
  return 2 * std::acos(std::sqrt(ratio));
}

PrepTree PrepTree::with_leaf(std::uint64_t j, std::complex<double> value, int* touched) const {
  if (j >= size()) throw ValidationError("leaf index out of range");
  PrepTree t = *this;
  std::uint64_t i = size() + j;
  t.nodes_[i] = std::norm(value);
  t.phases_[j] = unit_phase(value);
  int count = 1;
  for (i /= 2; i >= 1; i /= 2, ++count) t.nodes_[i] = t.nodes_[2 * i] + t.nodes_[2 * i + 1];
  if (t.root() == 0) throw ValidationError("update leaves a zero vector");
  if (touched) *touched = count;
  return t;
}

CircuitOp synthesize_ua(const PrepTree& tree, const Register& reg) {
  const int n = tree.depth();
  if (reg.width != n) throw ValidationError("register width does not match the tree depth");
  CircuitOp c;
  for (int level = 0; level < n; ++level) {
    const int target = reg.qubit(n - 1 - level);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << level); ++k) {
      std::vector<Control> controls;
      for (int b = 0; b < level; ++b) {
        // Bit b of k (from the top) selects the branch taken at level b.
        const bool bit = (k >> (level - 1 - b)) & 1;
        controls.push_back({reg.qubit(n - 1 - b), bit});
      }
      const double theta = tree.angle(level, k);
      c.controlled(std::move(controls), "ry", target, gates::ry(theta), {theta});
    }
  }
  for (std::uint64_t pair = 0; pair < tree.size() / 2; ++pair) {
    const auto p0 = tree.leaf_phase(2 * pair);
    const auto p1 = tree.leaf_phase(2 * pair + 1);
    if (p0 == 1.0 && p1 == 1.0) continue;
    std::vector<Control> controls;
    for (int b = 1; b < n; ++b) controls.push_back({reg.qubit(b), bool(((2 * pair) >> b) & 1)});
    c.controlled(std::move(controls), "diag", reg.qubit(0), gates::diag(p0, p1),
                 {std::arg(p0), std::arg(p1)});
  }
  return c;
}

void apply_ua(StateVector& state, const Register& reg, const PrepTree& tree) {
  state.check_register(reg);
  apply(synthesize_ua(tree, reg), state);
}

void apply_ua_inverse(StateVector& state, const Register& reg, const PrepTree& tree) {
  state.check_register(reg);
  apply(synthesize_ua(tree, reg).adjoint(), state);
}

StateVector tensor_encode(const PrepTree& tree, int copies) {
  if (copies < 1) throw ValidationError("tensor encoding needs at least one copy");
  const int n = tree.depth();
  if (n * copies > qubit_cap()) {
    throw ResourceError("tensor encoding of " + std::to_string(n * copies) + " qubits exceeds cap");
  }
  StateVector s(n * copies);
  for (int i = 0; i < copies; ++i) apply_ua(s, {i * n, n}, tree);
  return s;
}

}  // namespace qconv
