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

#include <complex>
#include <cstdint>
#include <vector>

#include "qconv/circuit.hpp"

namespace qconv {

/// Binary tree of squared magnitudes over N = 2^depth leaves plus one unit
/// phase per leaf. Node (level, k) sums the leaves below it; level 0 is the
/// root. The tree stores raw weights, so amplitude() is always normalized.
class PrepTree {
 public:
  /// Rescales `data` to unit norm when it is off by more than 1e-9 and
  /// `normalize` is set; otherwise keeps the raw weights.
  static PrepTree build(const Eigen::VectorXcd& data, bool normalize = true);

  int depth() const { return depth_; }
  std::uint64_t size() const { return std::uint64_t{1} << depth_; }
  /// Whether build() had to rescale its input.
  bool renormalized() const { return renormalized_; }

  double node(int level, std::uint64_t k) const;
  double root() const { return nodes_[1]; }
  double leaf(std::uint64_t j) const { return node(depth_, j); }
  std::complex<double> leaf_phase(std::uint64_t j) const { return phases_.at(j); }

  /// Normalized c_j.
  std::complex<double> amplitude(std::uint64_t j) const;
  Eigen::VectorXcd amplitudes() const;

  /// Ry angle 2 acos(sqrt(left / parent)) of an internal node, 0 when the
  /// parent weight is 0.
  double angle(int level, std::uint64_t k) const;

  /// Copy with leaf j replaced by `value`; recomputes only the log2(N) + 1
  /// nodes on the leaf's path, reported through `touched`.
  PrepTree with_leaf(std::uint64_t j, std::complex<double> value, int* touched = nullptr) const;

 private:
  PrepTree() = default;

  int depth_ = 0;
  bool renormalized_ = false;
  std::vector<double> nodes_;  // heap order, index 1 is the root
  std::vector<std::complex<double>> phases_;
};

/// Circuit mapping |0...0> on `reg` to sum_j c_j |j>: one multi-controlled
/// Ry per internal node, then a diagonal phase layer on the lowest qubit.
CircuitOp synthesize_ua(const PrepTree& tree, const Register& reg);

void apply_ua(StateVector& state, const Register& reg, const PrepTree& tree);
void apply_ua_inverse(StateVector& state, const Register& reg, const PrepTree& tree);

/// U_A|0> on each of `copies` registers, the first copy high-order.
StateVector tensor_encode(const PrepTree& tree, int copies = 2);

}  // namespace qconv
