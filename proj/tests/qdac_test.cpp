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
#include <vector>

#include <gtest/gtest.h>

#include "qconv/gates.hpp"
#include "qconv/qdac.hpp"

namespace qconv {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> RandomData(std::size_t n, Rng& rng) {
  std::vector<double> d(n);
  for (double& x : d) x = uniform01(rng);
  return d;
}

// Quantized amplitude the rotation realizes for one encoded value, computed
// from the codec arithmetic directly.
double RealizedAmplitude(double fx, int bits) {
  const double phi = 2 / kPi * std::acos(std::abs(fx));
  const double q = std::floor(phi * std::ldexp(1.0, bits) + 0.5) * std::ldexp(1.0, -bits);
  return (fx < 0 ? -1 : 1) * std::cos(kPi * q / 2);
}

TEST(MakeDigitalState, TwoValueExample) {
  const std::vector<double> d = {0, 0.5};
  const DigitalState s = make_digital_state(d, 2);
  EXPECT_EQ(s.data, (Register{0, 2}));
  EXPECT_EQ(s.address, (Register{2, 1}));
  // (|0>|00> + |1>|10>) / sqrt 2.
  EXPECT_NEAR(std::abs(s.state[0b000]), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(s.state[0b110]), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.state.norm(), 1.0, 1e-15);
}

TEST(MakeDigitalState, SingleAddress) {
  const std::vector<double> d = {0.75};
  const DigitalState s = make_digital_state(d, 2);
  EXPECT_EQ(s.address.width, 0);
  EXPECT_DOUBLE_EQ(s.value(0), 0.75);
  EXPECT_NEAR(std::abs(s.state[0b11]), 1.0, 1e-15);
}

TEST(MakeDigitalState, RandomFourValues) {
  Rng rng(1);
  const std::vector<double> d = RandomData(4, rng);
  const DigitalState s = make_digital_state(d, 5);
  for (std::uint64_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(std::abs(s.state[s.address.deposit(j) | s.codes[j]]), 0.5, 1e-15);
  }
}

TEST(MakeDigitalState, RangeErrors) {
  const std::vector<double> d = {1.0, 1.0};
  EXPECT_THROW(make_digital_state(d, 4), DomainError);
  const std::vector<double> three = {0.1, 0.2, 0.3};
  EXPECT_THROW(make_digital_state(three, 4), ValidationError);
}

TEST(QdacRun, ClampedOnesGiveUniformOutput) {
  Rng rng(2);
  const std::vector<double> d = {1.0, 1.0};
  const QdacOutcome out = qdac_run(make_digital_state(d, 8, false, true), "identity", rng);
  EXPECT_GT(out.exact_probability, 0.99);
  EXPECT_NEAR(std::abs(out.analog(0)), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(out.analog(1)), 1 / std::sqrt(2.0), 1e-12);
}

TEST(QdacRun, FixtureGivesOneHalf) {
  Rng rng(3);
  const std::vector<double> d = {0.6, 0.8};
  const QdacOutcome out = qdac_run(make_digital_state(d, 8), "identity", rng);
  EXPECT_NEAR(out.exact_probability, 0.5, 1e-10);
  EXPECT_NEAR(out.predicted_probability, 0.5, 1e-10);
  EXPECT_NEAR(out.analog(0).real(), 0.6, 2e-3);
  EXPECT_NEAR(out.analog(1).real(), 0.8, 2e-3);
}

TEST(QdacRun, SquareFixtureMatchesQuantizedPrediction) {
  Rng rng(4);
  constexpr int kM = 8;
  const std::vector<double> d = {0.6, 0.8};
  const DigitalState in = make_digital_state(d, kM);
  const QdacOutcome out = qdac_run(in, "square", rng);
  double want = 0;
  for (std::uint64_t j = 0; j < 2; ++j) want += std::pow(RealizedAmplitude(in.value(j) * in.value(j), kM), 2) / 2;
  EXPECT_NEAR(out.exact_probability, want, 1e-12);
  EXPECT_NEAR(out.exact_probability, (0.36 * 0.36 + 0.64 * 0.64) / 2, 5e-3);
  Eigen::VectorXd ideal(2);
  ideal << 0.36, 0.64;
  EXPECT_GT(std::abs(ideal.normalized().cast<std::complex<double>>().dot(out.analog)), 1 - 1e-4);
}

TEST(QdacRun, BornFrequencyOfTheAncilla) {
  Rng rng(5);
  const std::vector<double> d(4, 0.6);
  QdacOptions opt;
  opt.mode = QdacMode::kSample;
  opt.shots = 10000;
  const QdacOutcome out = qdac_run(make_digital_state(d, 8), "identity", rng, opt);
  EXPECT_NEAR(out.exact_probability, 0.36, 5e-3);
  const double sigma = std::sqrt(out.exact_probability * (1 - out.exact_probability) / 1e4);
  EXPECT_LE(std::abs(out.empirical_probability - out.exact_probability), 3 * sigma);
  EXPECT_GE(out.attempts, 1u);
}

TEST(QdacRun, RandomPairsProbabilityFidelityAndUncomputation) {
  Rng rng(6);
  const char* fs[] = {"identity", "square", "tanh", "relu-capped"};
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 3 + trial % 5;
    const std::vector<double> d = RandomData(std::size_t{1} << (1 + trial % 3), rng);
    const std::string f = fs[trial % 4];
    const DigitalState in = make_digital_state(d, m);
    double want = 0;
    for (std::uint64_t j = 0; j < in.size(); ++j) {
      want += std::pow(RealizedAmplitude(find_activation(f)(in.value(j)), m), 2);
    }
    want /= static_cast<double>(in.size());
    if (want < 1e-24) {
      EXPECT_THROW(qdac_run(in, f, rng), DegenerateBranchError) << trial;
      continue;
    }
    const QdacOutcome out = qdac_run(in, f, rng);
    EXPECT_NEAR(out.exact_probability, want, 1e-12) << trial;
    EXPECT_NEAR(out.predicted_probability, want, 1e-12) << trial;
    EXPECT_GE(out.fidelity, 1 - 1e-9) << trial;
    EXPECT_LT(out.residual, 1e-12) << trial;
  }
}

TEST(QdacRun, AmplifyModeBoostsSuccess) {
  Rng rng(7);
  const std::vector<double> d = {0.2, 0.3, 0.1, 0.25};
  QdacOptions opt;
  opt.mode = QdacMode::kAmplify;
  const QdacOutcome base = qdac_run(make_digital_state(d, 6), "identity", rng);
  const QdacOutcome amp = qdac_run(make_digital_state(d, 6), "identity", rng, opt);
  EXPECT_GE(amp.rounds, 1);
  EXPECT_GT(amp.exact_probability, 0.8);
  EXPECT_GT(amp.exact_probability, base.exact_probability);
  EXPECT_GE(amp.fidelity, 1 - 1e-9);
}

TEST(QdacRun, Errors) {
  Rng rng(8);
  const std::vector<double> zeros = {0, 0};
  EXPECT_THROW(qdac_run(make_digital_state(zeros, 4), "identity", rng), DegenerateBranchError);
  const std::vector<double> d = {0.5, 0.5};
  EXPECT_THROW(qdac_run(make_digital_state(d, 4), "unknown-fn", rng), ValidationError);
  QdacOptions opt;
  opt.mode = QdacMode::kSample;
  opt.shots = 0;
  EXPECT_THROW(qdac_run(make_digital_state(d, 4), "identity", rng, opt), ValidationError);
  EXPECT_THROW(parse_qdac_mode("sometimes"), ValidationError);
}

TEST(Moments, Examples) {
  const std::vector<double> c(5, 0.4);
  EXPECT_NEAR(moments(c).variance, 0.0, 1e-15);
  EXPECT_NEAR(predict_success(c), 0.16, 1e-15);
  const std::vector<double> d = {0, 1};
  EXPECT_DOUBLE_EQ(moments(d).mean, 0.5);
  EXPECT_DOUBLE_EQ(moments(d).variance, 0.25);
  EXPECT_DOUBLE_EQ(predict_success(d), 0.5);
}

TEST(Moments, MeanOfSquaresIdentity) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> d = RandomData(16, rng);
    const Moments mv = moments(d);
    double direct = 0;
    for (double x : d) direct += x * x;
    direct /= 16;
    EXPECT_NEAR(predict_success(d), direct, 1e-15);
    EXPECT_NEAR(direct, mv.variance + mv.mean * mv.mean, 1e-12);
  }
}

CircuitOp Bernoulli(double p) {
  CircuitOp c;
  c.gate("ry", 0, gates::ry(2 * std::asin(std::sqrt(p))));
  return c;
}

TEST(AmplitudeAmplify, Examples) {
  EXPECT_NEAR(amplitude_amplify(Bernoulli(0.25), 1, {0, true}, 1).good_probability, 1.0, 1e-10);
  EXPECT_NEAR(amplitude_amplify(Bernoulli(0.25), 1, {0, true}, 0).good_probability, 0.25, 1e-12);
  EXPECT_NEAR(amplitude_amplify(Bernoulli(0.5), 1, {0, true}, 1).good_probability, 0.5, 1e-10);
}

TEST(AmplitudeAmplify, RoundLaw) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const double p = 0.01 + 0.9 * uniform01(rng);
    // Spread the flag over a wider circuit so the reflection acts on 3 qubits.
    CircuitOp proc = Bernoulli(p);
    proc.gate("h", 1, gates::H()).gate("h", 2, gates::H());
    const double theta = std::asin(std::sqrt(p));
    for (int r = 0; r <= 3; ++r) {
      const AmplificationResult a = amplitude_amplify(proc, 3, {0, true}, r);
      EXPECT_NEAR(a.good_probability, std::pow(std::sin((2 * r + 1) * theta), 2), 1e-10);
      EXPECT_NEAR(a.initial_probability, p, 1e-12);
    }
  }
}

TEST(AmplitudeAmplify, ZeroAmplitudeIsAnError) {
  CircuitOp idle;
  idle.gate("i", 0, gates::diag<double>(1, 1));
  EXPECT_THROW(amplitude_amplify(idle, 1, {0, true}, 1), DegenerateBranchError);
}

TEST(OptimalRounds, StandardChoice) {
  EXPECT_EQ(optimal_rounds(0.25), 1);
  EXPECT_EQ(optimal_rounds(1.0), 0);
  EXPECT_EQ(optimal_rounds(0.01), static_cast<int>(std::floor(kPi / (4 * std::asin(0.1)))));
}

}  // namespace
}  // namespace qconv
