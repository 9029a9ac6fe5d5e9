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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "qconv/oracles.hpp"
#include "qconv/state_prep.hpp"
#include "test_support.hpp"

namespace qconv {
namespace {

using cd = std::complex<double>;
using testing::RandomVector;
using testing::Vec;

StateVector Prepared(const PrepTree& tree) {
  StateVector s(tree.depth());
  apply_ua(s, {0, tree.depth()}, tree);
  return s;
}

TEST(PrepTree, TwoLeafExample) {
  const PrepTree t = PrepTree::build(Vec({0.6, 0.8}));
  EXPECT_NEAR(t.root(), 1.0, 1e-12);
  EXPECT_NEAR(t.leaf(0), 0.36, 1e-15);
  EXPECT_NEAR(t.leaf(1), 0.64, 1e-15);
  EXPECT_NEAR(std::cos(t.angle(0, 0) / 2), 0.6, 1e-15);
  const StateVector s = Prepared(t);
  EXPECT_NEAR(std::abs(s[0] - 0.6), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - 0.8), 0.0, 1e-15);
}

TEST(PrepTree, BasisVectorFollowsLeftSpine) {
  const PrepTree t = PrepTree::build(Vec({1, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(t.node(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.node(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.node(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(t.node(2, 0), 1.0);
  for (std::uint64_t j = 1; j < 4; ++j) EXPECT_DOUBLE_EQ(t.leaf(j), 0.0);
}

TEST(PrepTree, ParentsSumTheirChildren) {
  Rng rng(1);
  const Eigen::VectorXcd c = RandomVector(8, rng);
  const PrepTree t = PrepTree::build(c);
  for (std::uint64_t j = 0; j < 8; ++j) EXPECT_NEAR(t.leaf(j), std::norm(c(j)), 1e-15);
  for (int level = 0; level < t.depth(); ++level) {
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << level); ++k) {
      EXPECT_NEAR(t.node(level, k), t.node(level + 1, 2 * k) + t.node(level + 1, 2 * k + 1), 1e-12);
    }
  }
  EXPECT_NEAR(t.root(), 1.0, 1e-12);
}

TEST(PrepTree, RejectsBadInputs) {
  EXPECT_THROW(PrepTree::build(Vec({1, 0, 0})), ValidationError);
  EXPECT_THROW(PrepTree::build(Vec({0, 0})), ValidationError);
  const PrepTree raw = PrepTree::build(Vec({3, 4}), false);
  EXPECT_DOUBLE_EQ(raw.root(), 25.0);
  EXPECT_FALSE(raw.renormalized());
  EXPECT_NEAR(std::abs(raw.amplitude(1) - 0.8), 0.0, 1e-15);
  const PrepTree t = PrepTree::build(Vec({3, 4}));
  EXPECT_TRUE(t.renormalized());
  EXPECT_NEAR(std::abs(t.amplitude(1) - 0.8), 0.0, 1e-15);
}

TEST(SynthesizeUa, BasisStatesAreExact) {
  for (std::uint64_t k = 0; k < 8; ++k) {
    const PrepTree t = PrepTree::build(Eigen::VectorXcd::Unit(8, static_cast<Eigen::Index>(k)));
    const StateVector s = Prepared(t);
    EXPECT_NEAR(std::abs(s[k]), 1.0, 1e-15) << k;
  }
}

TEST(SynthesizeUa, ComplexPhasesAgainstDenseMatrix) {
  const Eigen::VectorXcd c = Vec({0.5, cd(0, 0.5), -0.5, cd(0, -0.5)});
  const PrepTree t = PrepTree::build(c);
  const Eigen::MatrixXcd u = oracle::circuit_matrix(synthesize_ua(t, {0, 2}), 2);
  EXPECT_LE((u.col(0) - c).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((Prepared(t).amplitudes() - c).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SynthesizeUa, HundredRandomInputs) {
  Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    const Eigen::VectorXcd c = RandomVector(Eigen::Index{1} << n, rng);
    EXPECT_GE(std::abs(c.dot(Prepared(PrepTree::build(c)).amplitudes())), 1 - 1e-10);
  }
}

TEST(SynthesizeUa, GateCountIsLinear) {
  Rng rng(5);
  for (int n = 1; n <= 8; ++n) {
    const Eigen::Index size = Eigen::Index{1} << n;
    const CircuitOp c = synthesize_ua(PrepTree::build(RandomVector(size, rng)), {0, n});
    // N - 1 rotations plus at most N phase gates.
    EXPECT_LE(c.counter().total(), static_cast<std::uint64_t>(2 * size)) << n;
  }
}

TEST(ApplyUa, InverseRestoresZero) {
  Rng rng(2);
  const PrepTree t = PrepTree::build(RandomVector(8, rng));
  StateVector s(4);
  apply_ua(s, {1, 3}, t);
  apply_ua_inverse(s, {1, 3}, t);
  EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-10);
}

TEST(ApplyUa, RejectsWidthMismatch) {
  const PrepTree t = PrepTree::build(Vec({0.6, 0.8}));
  StateVector s(3);
  EXPECT_THROW(apply_ua(s, {0, 2}, t), ValidationError);
}

TEST(ApplyUa, MeasuredProbability) {
  const StateVector s = Prepared(PrepTree::build(Vec({0.6, 0.8})));
  EXPECT_NEAR(register_distribution(s, Register{0, 1})(0), 0.36, 1e-15);
}

TEST(TensorEncode, ProductOfAmplitudes) {
  Rng rng(3);
  const Eigen::VectorXcd c = RandomVector(4, rng);
  const StateVector s = tensor_encode(PrepTree::build(c), 2);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(s[static_cast<std::uint64_t>(4 * i + j)] - c(i) * c(j)), 0.0, 1e-14);
    }
  }
}

TEST(WithLeaf, TouchesOnlyThePath) {
  Rng rng(4);
  const Eigen::VectorXcd c = RandomVector(16, rng);
  const PrepTree t = PrepTree::build(c, false);
  int touched = 0;
  const PrepTree u = t.with_leaf(5, cd(0.3, -0.2), &touched);
  EXPECT_EQ(touched, t.depth() + 1);

  Eigen::VectorXcd c2 = c;
  c2(5) = cd(0.3, -0.2);
  const PrepTree fresh = PrepTree::build(c2, false);
  for (int level = 0; level < t.depth(); ++level) {
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << level); ++k) {
      EXPECT_EQ(u.angle(level, k), fresh.angle(level, k));
    }
  }
  EXPECT_GE(std::abs(c2.normalized().dot(Prepared(u).amplitudes())), 1 - 1e-10);
}

}  // namespace
}  // namespace qconv
