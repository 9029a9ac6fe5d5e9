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
#include <map>

#include <gtest/gtest.h>

#include "qconv/gates.hpp"
#include "qconv/oracles.hpp"
#include "test_support.hpp"

namespace qconv {
namespace {

using testing::RandomVector;
using testing::Vec;

TEST(PeDistribution, SumsToOneAndIsExactOnDyadics) {
  for (int t = 1; t <= 6; ++t) {
    EXPECT_NEAR(oracle::pe_distribution(0.3, t).sum(), 1.0, 1e-12);
    EXPECT_NEAR(oracle::pe_distribution(0.25, 4)(4), 1.0, 1e-15);
  }
}

TEST(KronEmbed, QubitZeroIsRightmost) {
  const Eigen::MatrixXcd x0 = oracle::kron_embed(2, {{0, gates::X()}});
  EXPECT_NEAR(std::abs(x0(1, 0)), 1.0, 1e-15);
  const Eigen::MatrixXcd x1 = oracle::kron_embed(2, {{1, gates::X()}});
  EXPECT_NEAR(std::abs(x1(2, 0)), 1.0, 1e-15);
}

TEST(SwapTestState, BranchNormsMatchOverlap) {
  Rng rng(1);
  const Eigen::VectorXcd c = RandomVector(4, rng);
  for (std::uint64_t k = 0; k < 4; ++k) {
    const Eigen::VectorXcd s = oracle::swap_test_state(c, k);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    const Eigen::Index half = s.size() / 2;
    EXPECT_NEAR(s.head(half).squaredNorm(), (1 + std::norm(c(static_cast<Eigen::Index>(k)))) / 2, 1e-12);
  }
}

TEST(HadamardTestState, BranchNormsMatchParts) {
  Rng rng(2);
  const Eigen::VectorXcd c = RandomVector(4, rng);
  for (bool imag : {false, true}) {
    const Eigen::VectorXcd s = oracle::hadamard_test_state(c, 1, imag);
    const double part = imag ? c(1).imag() : c(1).real();
    EXPECT_NEAR(s.head(s.size() / 2).squaredNorm(), (1 + part) / 2, 1e-12);
  }
}

TEST(ClassicalPipeline, SquareFixture) {
  const oracle::PipelineReference r = oracle::classical_pipeline(Vec({0.6, 0.8}), "square", 5, 3);
  ASSERT_EQ(r.output.size(), 2);
  Eigen::VectorXd want(2);
  want << 0.36, 0.64;
  EXPECT_LE((r.output - want.normalized()).cwiseAbs().maxCoeff(), 2 * std::ldexp(1.0, -5));
  EXPECT_NEAR(r.x[0], 0.6, std::ldexp(1.0, -4));
}

TEST(OracleSuite, NamesAndScopes) {
  const std::vector<std::string> names = oracle::oracle_names();
  EXPECT_EQ(names.size(), 9u);
  EXPECT_TRUE(oracle::oracle_suite({}).empty());
  const auto rows = oracle::oracle_suite({"prep"});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].name, "prep");
  EXPECT_TRUE(rows[0].passed());
  EXPECT_THROW(oracle::oracle_suite({"nope"}), ValidationError);
}

class SuiteRow : public ::testing::TestWithParam<std::string> {};

TEST_P(SuiteRow, Passes) {
  oracle::SuiteOptions o;
  o.n = 1;
  o.m = 3;
  o.g = 2;
  const auto rows = oracle::oracle_suite({GetParam()}, o);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].passed()) << rows[0].deviation << " > " << rows[0].tolerance;
}

INSTANTIATE_TEST_SUITE_P(All, SuiteRow, ::testing::ValuesIn(oracle::oracle_names()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& ch : s) {
                             if (ch == '-') ch = '_';
                           }
                           return s;
                         });

}  // namespace
}  // namespace qconv
