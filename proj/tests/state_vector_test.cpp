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
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "qconv/gates.hpp"
#include "qconv/register_layout.hpp"
#include "qconv/state_vector.hpp"
#include "test_support.hpp"

namespace qconv {
namespace {

using testing::RandomState;
using testing::Vec;
constexpr double kInvSqrt2 = 1 / std::numbers::sqrt2;

void ExpectAmplitudes(const StateVector& s, const Eigen::VectorXcd& want, double tol = 1e-12) {
  ASSERT_EQ(s.amplitudes().size(), want.size());
  EXPECT_LE((s.amplitudes() - want).cwiseAbs().maxCoeff(), tol);
}

TEST(ZeroState, HasUnitAmplitudeAtIndexZero) {
  ExpectAmplitudes(StateVector(1), Vec({1, 0}));
  ExpectAmplitudes(StateVector(2), Vec({1, 0, 0, 0}));
  const StateVector s3(3);
  EXPECT_EQ(s3.dim(), 8u);
  EXPECT_EQ(s3[0], std::complex<double>(1));
  EXPECT_DOUBLE_EQ(s3.norm(), 1.0);
}

TEST(ZeroState, RejectsSizesOutsideTheCap) {
  EXPECT_THROW(StateVector(0), ValidationError);
  EXPECT_THROW(StateVector(qubit_cap() + 1), ResourceError);
  EXPECT_GE(kDefaultQubitCap, 24);
}

TEST(FromAmplitudes, ChecksShapeAndNorm) {
  EXPECT_THROW(StateVector::from_amplitudes(Vec({1, 0, 0})), ValidationError);
  EXPECT_THROW(StateVector::from_amplitudes(Vec({1, 1})), ValidationError);
  const StateVector s = StateVector::from_amplitudes(Vec({3, 4}), true);
  ExpectAmplitudes(s, Vec({0.6, 0.8}));
}

TEST(ApplySingle, StandardGates) {
  StateVector s(1);
  apply_single(s, 0, gates::H());
  ExpectAmplitudes(s, Vec({kInvSqrt2, kInvSqrt2}));

  StateVector x(1);
  apply_single(x, 0, gates::X());
  ExpectAmplitudes(x, Vec({0, 1}));

  apply_single(s, 0, gates::Z());
  ExpectAmplitudes(s, Vec({kInvSqrt2, -kInvSqrt2}));
}

TEST(ApplySingle, RejectsOutOfRangeTarget) {
  StateVector s(2);
  EXPECT_THROW(apply_single(s, 2, gates::X()), ValidationError);
  EXPECT_THROW(apply_single(s, -1, gates::X()), ValidationError);
}

TEST(ApplyControlled, CnotAndToffoli) {
  StateVector s(2);
  apply_single(s, 1, gates::X());  // |10>
  apply_controlled(s, {{1, true}}, 0, gates::X());
  ExpectAmplitudes(s, Vec({0, 0, 0, 1}));

  StateVector idle(2);
  apply_controlled(idle, {{1, true}}, 0, gates::X());
  ExpectAmplitudes(idle, Vec({1, 0, 0, 0}));

  StateVector t(3);
  apply_single(t, 2, gates::X());
  apply_single(t, 1, gates::X());  // |110>
  apply_controlled(t, {{2, true}, {1, true}}, 0, gates::X());
  EXPECT_NEAR(std::abs(t[7]), 1.0, 1e-15);
}

TEST(ApplyControlled, ZeroValuedControl) {
  StateVector s(2);
  apply_controlled(s, {{1, false}}, 0, gates::X());
  ExpectAmplitudes(s, Vec({0, 1, 0, 0}));
}

TEST(ApplyControlled, RejectsOverlap) {
  StateVector s(2);
  EXPECT_THROW(apply_controlled(s, {{0, true}}, 0, gates::X()), ValidationError);
}

TEST(BasisOracle, IdentityCopiesTheInput) {
  // Input on qubits 2-3, output on 0-1.
  StateVector s(4);
  apply_single(s, 2, gates::H());
  apply_single(s, 3, gates::H());
  apply_basis_oracle(s, Register{2, 2}, Register{0, 2}, [](std::uint64_t a) { return a; });
  for (std::uint64_t a = 0; a < 4; ++a) EXPECT_NEAR(std::abs(s[(a << 2) | a]), 0.5, 1e-15);
}

TEST(BasisOracle, IncrementModFour) {
  StateVector s(3);
  apply_single(s, 2, gates::H());
  apply_basis_oracle(s, Register{2, 1}, Register{0, 2},
                     [](std::uint64_t a) { return (a + 1) % 4; });
  Eigen::VectorXcd want = Eigen::VectorXcd::Zero(8);
  want(0b001) = kInvSqrt2;
  want(0b110) = kInvSqrt2;
  ExpectAmplitudes(s, want);
}

TEST(BasisOracle, RejectsOverlapAndWideOutputs) {
  StateVector s(3);
  EXPECT_THROW(apply_basis_oracle(s, Register{0, 2}, Register{1, 2},
                                  [](std::uint64_t a) { return a; }),
               ValidationError);
  EXPECT_THROW(apply_basis_oracle(s, Register{2, 1}, Register{0, 1},
                                  [](std::uint64_t) { return std::uint64_t{2}; }),
               ValidationError);
}

TEST(Measure, BasisStateIsCertain) {
  StateVector s(1);
  apply_single(s, 0, gates::X());
  Rng rng(1);
  const MeasurementOutcome m = measure(s, 0, rng);
  EXPECT_EQ(m.bit, 1);
  EXPECT_DOUBLE_EQ(m.probability, 1.0);
}

TEST(Measure, BornRuleFrequency) {
  StateVector s(1);
  apply_single(s, 0, gates::H());
  Rng rng(7);
  constexpr int kShots = 10000;
  int zeros = 0;
  for (int i = 0; i < kShots; ++i) zeros += measure(s, 0, rng).bit == 0;
  const double sigma = std::sqrt(0.25 / kShots);
  EXPECT_LE(std::abs(zeros / double(kShots) - 0.5), 3 * sigma);
}

TEST(Measure, CollapsedStateIsNormalizedBranch) {
  Rng rng(3);
  Rng data(11);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector s = RandomState(3, data);
    const MeasurementOutcome m = measure(s, 1, rng);
    EXPECT_NEAR(m.collapsed.norm(), 1.0, 1e-12);
    double branch = 0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      if (((i >> 1) & 1) == static_cast<std::uint64_t>(m.bit)) branch += std::norm(s[i]);
    }
    EXPECT_NEAR(m.probability, branch, 1e-10);
  }
}

TEST(Postselect, Examples) {
  const StateVector zero(1);
  auto [same, p] = postselect(zero, 0, 0);
  EXPECT_DOUBLE_EQ(p, 1.0);
  ExpectAmplitudes(same, zero.amplitudes());

  EXPECT_THROW(postselect(zero, 0, 1), DegenerateBranchError);
  EXPECT_THROW(postselect(zero, 0, 2), ValidationError);
}

TEST(Postselect, ConsistentWithBranchWeight) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector s = RandomState(4, rng);
    const int q = trial % 4;
    const int bit = trial % 2;
    const auto [branch, p] = postselect(s, q, bit);
    double weight = 0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      if (static_cast<int>((i >> q) & 1) == bit) weight += std::norm(s[i]);
    }
    EXPECT_NEAR(p, weight, 1e-12);
    EXPECT_NEAR(branch.norm(), 1.0, 1e-12);
  }
}

TEST(Fidelity, Examples) {
  Rng rng(2);
  const StateVector psi = RandomState(3, rng);
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-12);
  StateVector one(1);
  apply_single(one, 0, gates::X());
  EXPECT_NEAR(fidelity(StateVector(1), one), 0.0, 1e-15);
  StateVector plus(1);
  apply_single(plus, 0, gates::H());
  EXPECT_NEAR(fidelity(StateVector(1), plus), kInvSqrt2, 1e-15);
  EXPECT_THROW(fidelity(StateVector(1), StateVector(2)), ValidationError);
}

TEST(Tensor, OrdersTheFirstFactorHigh) {
  StateVector one(1);
  apply_single(one, 0, gates::X());
  ExpectAmplitudes(tensor(StateVector(1), one), Vec({0, 1, 0, 0}));

  const StateVector c = StateVector::from_amplitudes(Vec({0.6, 0.8}));
  ExpectAmplitudes(tensor(c, c), Vec({0.36, 0.48, 0.48, 0.64}), 1e-15);
}

TEST(Tensor, OuterProductOfRandomStates) {
  Rng rng(9);
  const StateVector a = RandomState(2, rng);
  const StateVector b = RandomState(3, rng);
  const StateVector ab = tensor(a, b);
  for (std::uint64_t i = 0; i < a.dim(); ++i) {
    for (std::uint64_t j = 0; j < b.dim(); ++j) {
      EXPECT_NEAR(std::abs(ab[i * b.dim() + j] - a[i] * b[j]), 0.0, 1e-15);
    }
  }
}

TEST(Extend, AddsZeroQubitsAbove) {
  const StateVector c = StateVector::from_amplitudes(Vec({0.6, 0.8}));
  const StateVector e = extend(c, 2);
  EXPECT_EQ(e.n_qubits(), 3);
  ExpectAmplitudes(e, Vec({0.6, 0.8, 0, 0, 0, 0, 0, 0}));
}

TEST(Distributions, MarginalsSumToOne) {
  Rng rng(4);
  const StateVector s = RandomState(4, rng);
  const Eigen::VectorXd p = register_distribution(s, Register{1, 2});
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  const Eigen::MatrixXd j = joint_distribution(s, Register{0, 1}, Register{2, 2});
  EXPECT_NEAR(j.sum(), 1.0, 1e-12);
  EXPECT_THROW(joint_distribution(s, Register{0, 2}, Register{1, 2}), ValidationError);
}

TEST(WriteDump, OneTriplePerLine) {
  StateVector s(1);
  apply_single(s, 0, gates::X());
  std::ostringstream os;
  write_dump(os, s);
  EXPECT_EQ(os.str(), "0, 0, 0\n1, 1, 0\n");
}

TEST(RegisterLayout, ContiguousAndDisjoint) {
  RegisterLayout layout;
  const Register a = layout.add("a", 2);
  const Register b = layout.add("b", 3);
  EXPECT_EQ(a, (Register{0, 2}));
  EXPECT_EQ(b, (Register{2, 3}));
  EXPECT_EQ(layout.total(), 5);
  EXPECT_TRUE(layout.is_valid());
  EXPECT_FALSE(a.overlaps(b));
  EXPECT_EQ(b.deposit(5), 5u << 2);
  EXPECT_EQ(b.extract(b.deposit(5) | 3), 5u);
  EXPECT_EQ(layout["b"], b);
  EXPECT_THROW(layout.add("a", 1), ValidationError);
}

// Random gate sequences keep the norm and every inner product.
class RandomSequence : public ::testing::TestWithParam<std::uint64_t> {};

void ApplyRandomSequence(StateVector& s, Rng rng) {
  for (int step = 0; step < 60; ++step) {
    const int kind = static_cast<int>(rng() % 3);
    const int target = static_cast<int>(rng() % 4);
    const Matrix2cd u = gates::ry(6.0 * uniform01(rng)) * gates::rz(6.0 * uniform01(rng));
    if (kind == 0) {
      apply_single(s, target, u);
    } else if (kind == 1) {
      apply_controlled(s, {{(target + 1) % 4, true}}, target, u);
    } else {
      const std::uint64_t shift = rng() % 4;
      apply_basis_oracle(s, Register{2, 2}, Register{0, 2},
                         [shift](std::uint64_t a) { return (a * 3 + shift) % 4; });
    }
  }
}

TEST_P(RandomSequence, PreservesNormAndInnerProducts) {
  Rng rng(GetParam());
  StateVector psi = RandomState(4, rng);
  StateVector phi = RandomState(4, rng);
  const std::complex<double> before = inner_product(psi, phi);
  const std::uint64_t seq = rng();
  ApplyRandomSequence(psi, Rng(seq));
  ApplyRandomSequence(phi, Rng(seq));
  EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(inner_product(psi, phi) - before), 0.0, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomSequence, ::testing::Range<std::uint64_t>(1, 11));

TEST(BasisOracle, InvolutionOnRandomStates) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    StateVector s = RandomState(5, rng);
    const StateVector before = s;
    std::vector<std::uint64_t> table(8);
    for (auto& v : table) v = rng() % 4;
    apply_basis_oracle(s, Register{2, 3}, Register{0, 2}, std::span<const std::uint64_t>(table));
    apply_basis_oracle(s, Register{2, 3}, Register{0, 2}, std::span<const std::uint64_t>(table));
    EXPECT_LE((s.amplitudes() - before.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gates, AreUnitary) {
  for (const Matrix2cd& u : {gates::H(), gates::X(), gates::Y(), gates::Z(), gates::S(),
                             gates::ry(0.7), gates::rz(1.3), gates::phase(2.1)}) {
    EXPECT_LE((u.adjoint() * u - Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
}  // namespace qconv
