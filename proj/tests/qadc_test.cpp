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
#include <numbers>

#include <gtest/gtest.h>

#include "qconv/gates.hpp"
#include "qconv/oracles.hpp"
#include "qconv/qadc.hpp"
#include "test_support.hpp"

namespace qconv {
namespace {

using cd = std::complex<double>;
using testing::RandomVector;
using testing::Vec;
constexpr double kPi = std::numbers::pi;

double Bound(int m) { return std::ldexp(1.0, -m) + std::ldexp(1.0, -(m + 1)); }

TEST(Spectrum, Examples) {
  const GroverSpectrum zero = spectrum_oracle(0);
  EXPECT_NEAR(zero.alpha, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(zero.beta, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(zero.theta, 0.25, 1e-15);
  EXPECT_TRUE(zero.balanced);
  EXPECT_FALSE(zero.degenerate);

  const GroverSpectrum one = spectrum_oracle(1);
  EXPECT_DOUBLE_EQ(one.alpha, 1.0);
  EXPECT_DOUBLE_EQ(one.beta, 0.0);
  EXPECT_DOUBLE_EQ(one.theta, 0.5);
  EXPECT_TRUE(one.degenerate);

  // Frozen: asin(sqrt(0.745)) / pi.
  EXPECT_NEAR(spectrum_oracle(0.7).theta, 0.331502, 1e-6);
  EXPECT_THROW(spectrum_oracle(1.5), DomainError);
  EXPECT_THROW(spectrum_for_part(-1.5), DomainError);
}

TEST(Spectrum, Invariants) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const GroverSpectrum s = spectrum_oracle(uniform01(rng));
    EXPECT_NEAR(s.alpha * s.alpha + s.beta * s.beta, 1.0, 1e-12);
    EXPECT_NEAR(std::sin(kPi * s.theta), s.alpha, 1e-12);
    EXPECT_NEAR(std::abs(s.lambda_plus - std::polar(1.0, 2 * kPi * s.theta)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.lambda_minus - std::conj(s.lambda_plus)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.a_plus), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(s.a_minus), 1 / std::sqrt(2.0), 1e-12);
  }
}

TEST(GroverBlock, DenseDiagonalizationMatchesClosedForm) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const double r = uniform01(rng);
    const Eigen::VectorXcd c = Vec({r, std::sqrt(1 - r * r)});
    const Eigen::VectorXcd psi = oracle::swap_test_state(c, 0);
    const oracle::BlockSpectrum b = oracle::block_spectrum(oracle::reflection_operator(psi, 2), psi);
    const GroverSpectrum s = spectrum_oracle(r);
    ASSERT_EQ(b.dimension, 2);
    for (std::size_t e = 0; e < 2; ++e) {
      const double d = std::min(std::abs(b.eigenvalues[e] - s.lambda_plus),
                                std::abs(b.eigenvalues[e] - s.lambda_minus));
      EXPECT_LE(d, 1e-10);
      EXPECT_NEAR(b.overlaps[e], 1 / std::sqrt(2.0), 1e-8);
    }
  }
}

TEST(GroverBlock, QuarterTurnAndDegenerateCases) {
  // r = 0: eigenvalues +-i, so G_k^2 is -1 on the block.
  const Eigen::VectorXcd c0 = Vec({0, 1});
  const Eigen::VectorXcd psi0 = oracle::swap_test_state(c0, 0);
  const Eigen::MatrixXcd g0 = oracle::reflection_operator(psi0, 2);
  const Eigen::MatrixXcd g2 = g0 * g0;
  EXPECT_LE((g2 * psi0 + psi0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((g2 * g2 * psi0 - psi0).cwiseAbs().maxCoeff(), 1e-12);

  // r = 1: G_k psi = -psi.
  const Eigen::VectorXcd c1 = Vec({1, 0});
  const Eigen::VectorXcd psi1 = oracle::swap_test_state(c1, 0);
  const Eigen::MatrixXcd g1 = oracle::reflection_operator(psi1, 2);
  EXPECT_LE((g1 * psi1 + psi1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(oracle::block_spectrum(g1, psi1).dimension, 1);
}

// Prepares the conversion input for one variant and applies the swap or
// Hadamard test.
Eigen::MatrixXd BranchWeights(QadcVariant v, const Eigen::VectorXcd& c) {
  const int n = static_cast<int>(std::log2(c.size()));
  const RegisterLayout layout = qadc_layout(v, n, 1, 0);
  const QadcRegisters regs = qadc_registers(layout);
  StateVector s(layout.total());
  for (int i = 0; i < n; ++i) apply_single(s, regs.address.qubit(i), gates::H());
  const PrepTree tree = PrepTree::build(c);
  if (v == QadcVariant::kAbs) {
    for (int i = 0; i < n; ++i) {
      apply_controlled(s, {{regs.address.qubit(i), true}}, regs.pair.qubit(i), gates::X());
    }
    apply(build_v(regs, tree), s);
  } else {
    apply(build_w(regs, tree, v == QadcVariant::kImag), s);
  }
  return joint_distribution(s, regs.address, regs.flag) * static_cast<double>(c.size());
}

TEST(SwapTest, BranchNorms) {
  // Basis state: |0>_B weight 1 at k = 0.
  EXPECT_NEAR(BranchWeights(QadcVariant::kAbs, Vec({1, 0}))(0, 0), 1.0, 1e-12);
  // Uniform N = 2: r = 1/sqrt 2, weight 3/4.
  const Eigen::MatrixXd u = BranchWeights(QadcVariant::kAbs, Vec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}));
  EXPECT_NEAR(u(0, 0), 0.75, 1e-12);
  EXPECT_NEAR(u(1, 0), 0.75, 1e-12);
  Rng rng(3);
  const Eigen::VectorXcd c = RandomVector(4, rng);
  const Eigen::MatrixXd w = BranchWeights(QadcVariant::kAbs, c);
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(w(k, 0), (1 + std::norm(c(k))) / 2, 1e-12);
    EXPECT_NEAR(w(k, 1), (1 - std::norm(c(k))) / 2, 1e-12);
  }
}

TEST(HadamardTest, BranchNorms) {
  Rng rng(4);
  const Eigen::VectorXcd c = RandomVector(4, rng);
  const Eigen::MatrixXd re = BranchWeights(QadcVariant::kReal, c);
  const Eigen::MatrixXd im = BranchWeights(QadcVariant::kImag, c);
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(re(k, 0), (1 + c(k).real()) / 2, 1e-12);
    EXPECT_NEAR(im(k, 0), (1 + c(k).imag()) / 2, 1e-12);
  }
}

TEST(AbsQadc, BasisVectorClampsToCodecMaximum) {
  const QadcResult r = abs_qadc(PrepTree::build(Eigen::VectorXcd::Unit(4, 2)), 3, 0);
  EXPECT_DOUBLE_EQ(r.estimates[2], 0.875);
  EXPECT_DOUBLE_EQ(r.modal_probability[2], 1.0);
  EXPECT_DOUBLE_EQ(r.estimates[0], 0.0);
  EXPECT_LT(r.residual, 1e-10);
  EXPECT_GT(r.fidelity_vs_ideal, 1 - 1e-10);
}

TEST(AbsQadc, UniformFourDecodesOneHalf) {
  const QadcResult r = abs_qadc(PrepTree::build(Vec({0.5, 0.5, 0.5, 0.5})), 3, 2);
  for (double e : r.estimates) EXPECT_NEAR(e, 0.5, Bound(3));
  const double guard = 1 - 1 / (2 * (std::ldexp(1.0, 2) - 2));
  for (double p : r.modal_probability) EXPECT_GE(p, guard - 1e-12);
}

TEST(AbsQadc, ControlledUaCount) {
  for (int t = 2; t <= 5; ++t) {
    const QadcResult r = abs_qadc(PrepTree::build(Vec({0.6, 0.8})), t - 1, 1);
    EXPECT_EQ(r.controlled_ua_count, 4 * ((std::uint64_t{1} << t) - 1));
  }
}

TEST(RealQadc, Examples) {
  constexpr int kM = 4;
  const double s = 1 / std::sqrt(2.0);
  const QadcResult u = real_qadc(PrepTree::build(Vec({s, s})), kM, 2);
  for (double e : u.estimates) EXPECT_NEAR(e, s, Bound(kM));

  const QadcResult one = real_qadc(PrepTree::build(Vec({1, 0})), kM, 2);
  EXPECT_DOUBLE_EQ(one.estimates[0], 1 - std::ldexp(1.0, -kM));
  EXPECT_DOUBLE_EQ(one.modal_probability[0], 1.0);

  const QadcResult neg = real_qadc(PrepTree::build(Vec({-1, 0})), kM, 2);
  EXPECT_DOUBLE_EQ(neg.estimates[0], -1.0);
  EXPECT_DOUBLE_EQ(neg.modal_probability[0], 1.0);
}

TEST(ImagQadc, Examples) {
  constexpr int kM = 4;
  const QadcResult i = imag_qadc(PrepTree::build(Vec({cd(0, 1), 0})), kM, 2);
  EXPECT_DOUBLE_EQ(i.estimates[0], 1 - std::ldexp(1.0, -kM));
  Rng rng(5);
  const QadcResult real = imag_qadc(PrepTree::build(RandomVector(4, rng, false)), kM, 2);
  for (double e : real.estimates) EXPECT_DOUBLE_EQ(e, 0.0);
}

TEST(SignedQadc, MixedPhaseFixture) {
  constexpr int kM = 4;
  const Eigen::VectorXcd c = Vec({0.5, cd(0, 0.5), -0.5, cd(0, -0.5)});
  const QadcResult re = real_qadc(PrepTree::build(c), kM, 2);
  const QadcResult im = imag_qadc(PrepTree::build(c), kM, 2);
  const double x[] = {0.5, 0, -0.5, 0};
  const double y[] = {0, 0.5, 0, -0.5};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(re.estimates[k], x[k], Bound(kM));
    EXPECT_NEAR(im.estimates[k], y[k], Bound(kM));
  }
  EXPECT_EQ(re.controlled_ua_count, 4 * ((std::uint64_t{1} << 6) - 1));
}

TEST(Qadc, ThetaDistributionIsEigenphaseMixture) {
  Rng rng(6);
  const Eigen::VectorXcd c = RandomVector(2, rng);
  constexpr int kT = 5;
  for (QadcVariant v : {QadcVariant::kAbs, QadcVariant::kReal, QadcVariant::kImag}) {
    const QadcResult r = run_qadc(v, PrepTree::build(c), 3, 2);
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double part = qadc_target(v, c(k));
      const double x = v == QadcVariant::kAbs ? part * part : part;
      const double theta = std::asin(std::sqrt((1 + x) / 2)) / kPi;
      const Eigen::VectorXd want =
          0.5 * oracle::pe_distribution(theta, kT) + 0.5 * oracle::pe_distribution(1 - theta, kT);
      EXPECT_LE((r.theta_distribution.row(k).transpose() - want).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Qadc, EstimatesFollowTheModalPhase) {
  Rng rng(7);
  const Eigen::VectorXcd c = RandomVector(4, rng);
  for (QadcVariant v : {QadcVariant::kAbs, QadcVariant::kReal}) {
    const QadcResult r = run_qadc(v, PrepTree::build(c), 3, 1);
    const FunctionOracle rec = v == QadcVariant::kAbs ? abs_recovery_oracle(3, 4)
                                                      : real_recovery_oracle(3, 4);
    const FixedPointCodec codec = qadc_codec(v, 3);
    for (Eigen::Index k = 0; k < 4; ++k) {
      Eigen::Index best = 0;
      r.theta_distribution.row(k).maxCoeff(&best);
      EXPECT_DOUBLE_EQ(r.estimates[static_cast<std::size_t>(k)],
                       rec.decoded(static_cast<std::uint64_t>(best)));
      EXPECT_GE(r.estimates[static_cast<std::size_t>(k)], codec.min_value());
      EXPECT_LE(r.estimates[static_cast<std::size_t>(k)], codec.max_value());
    }
  }
}

TEST(Qadc, FusedAndGateByGateAgree) {
  Rng rng(8);
  const PrepTree tree = PrepTree::build(RandomVector(2, rng));
  for (QadcVariant v : {QadcVariant::kAbs, QadcVariant::kReal, QadcVariant::kImag}) {
    const QadcResult a = run_qadc(v, tree, 2, 1, Execution::kFused);
    const QadcResult b = run_qadc(v, tree, 2, 1, Execution::kGateByGate);
    EXPECT_LE((a.digital_state.amplitudes() - b.digital_state.amplitudes()).cwiseAbs().maxCoeff(),
              1e-10);
    EXPECT_EQ(a.controlled_ua_count, b.controlled_ua_count);
  }
}

TEST(Qadc, UncomputationOnDyadicInputs) {
  // r in {0, 1} and x in {-1, 0, 1} all give dyadic phases.
  const Eigen::VectorXcd c = Vec({0, 1, 0, 0});
  for (QadcVariant v : {QadcVariant::kAbs, QadcVariant::kReal, QadcVariant::kImag}) {
    const QadcResult r = run_qadc(v, PrepTree::build(c), 3, 1);
    EXPECT_LT(r.residual, 1e-10) << to_string(v);
    EXPECT_GT(r.fidelity_vs_ideal, 1 - 1e-10) << to_string(v);
  }
}

TEST(Qadc, VariantNames) {
  EXPECT_EQ(parse_qadc_variant("abs"), QadcVariant::kAbs);
  EXPECT_EQ(to_string(QadcVariant::kImag), "imag");
  EXPECT_THROW(parse_qadc_variant("phase"), ValidationError);
}

TEST(Qadc, LayoutIsContiguous) {
  const RegisterLayout abs = qadc_layout(QadcVariant::kAbs, 2, 3, 2);
  EXPECT_TRUE(abs.is_valid());
  EXPECT_EQ(abs.total(), 3 * 2 + 1 + 5 + 3);
  const RegisterLayout re = qadc_layout(QadcVariant::kReal, 2, 3, 2);
  EXPECT_EQ(re.total(), 2 * 2 + 1 + 5 + 4);
}

}  // namespace
}  // namespace qconv
