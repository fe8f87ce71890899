// Copyright 2026 The beliefagg Authors.
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

#include "beliefagg/model.hpp"

#include <cmath>

#include "beliefagg/error.hpp"
#include "beliefagg/fixtures.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/generators.hpp"

namespace beliefagg {
namespace {

using ::testing::HasSubstr;

void ExpectMatrixNear(const Matrix& actual, const Matrix& expected,
                      double tolerance) {
  ASSERT_EQ(actual.rows(), expected.rows());
  ASSERT_EQ(actual.cols(), expected.cols());
  for (Eigen::Index i = 0; i < actual.rows(); ++i) {
    for (Eigen::Index j = 0; j < actual.cols(); ++j) {
      EXPECT_NEAR(actual(i, j), expected(i, j), tolerance)
          << "entry (" << i << ", " << j << ")";
    }
  }
}

// Prior implied by the three-state tables: each ratio Q/M is proportional to
// the prior up to a per-signal constant, so the geometric mean over signals
// of Q/M, normalized, recovers it.
Vector OracleImpliedPrior() {
  const Matrix q = fixtures::ThreeStatePosterior();
  const Matrix m = fixtures::ThreeStateLikelihood();
  Vector p(3);
  for (Eigen::Index w = 0; w < 3; ++w) {
    double log_sum = 0.0;
    for (Eigen::Index s = 0; s < 3; ++s) log_sum += std::log(q(s, w) / m(s, w));
    p[w] = std::exp(log_sum / 3.0);
  }
  return p / p.sum();
}

TEST(StateSpaceTest, RejectsTooFewOrDuplicateLabels) {
  EXPECT_THROW(StateSpace({"a"}), Error);
  EXPECT_THROW(StateSpace({"a", "a"}), Error);
  const StateSpace states({"a", "b", "c"});
  EXPECT_EQ(states.index_of("c"), 2u);
  EXPECT_THROW(states.index_of("d"), Error);
}

TEST(BeliefVectorTest, EnforcesSimplex) {
  EXPECT_NO_THROW(BeliefVector({0.25, 0.75}));
  EXPECT_THROW(BeliefVector({0.5, 0.6}), Error);
  EXPECT_THROW(BeliefVector({-0.1, 1.1}), Error);
  EXPECT_NO_THROW(BeliefVector({0.5, 0.5 + 1e-10}));
}

TEST(InfoStructureTest, RejectsInvalidTables) {
  Matrix bad(2, 2);
  bad << 0.7, 0.3, 0.2, 0.7;
  EXPECT_THROW(InfoStructure(StateSpace({"a", "b"}), {"x", "y"},
                             Vector::Constant(2, 0.5), bad),
               Error);
  Matrix good(2, 2);
  good << 0.7, 0.3, 0.3, 0.7;
  EXPECT_THROW(InfoStructure(StateSpace({"a", "b"}), {"x", "y"},
                             Vector::Constant(2, 0.6), good),
               Error);
  EXPECT_THROW(InfoStructure(StateSpace({"a", "b"}), {"x", "y"},
                             Vector::Constant(2, 0.5), good, Matrix(3, 2)),
               Error);
}

TEST(BayesPosteriorTest, UninformativeSignalReturnsPrior) {
  Matrix flat(2, 3);
  flat << 0.5, 0.5, 0.5, 0.5, 0.5, 0.5;
  Vector prior(3);
  prior << 0.2, 0.3, 0.5;
  const InfoStructure structure(StateSpace({"a", "b", "c"}), {"x", "y"}, prior,
                                flat);
  const BeliefVector posterior = BayesPosterior(structure, "x");
  for (std::size_t w = 0; w < 3; ++w) {
    EXPECT_NEAR(posterior[w], prior[static_cast<Eigen::Index>(w)], 1e-15);
  }
}

TEST(BayesPosteriorTest, BinarySymmetricCorrectSignal) {
  const BeliefVector posterior =
      BayesPosterior(fixtures::BinarySymmetric(0.7), "s1");
  EXPECT_NEAR(posterior[0], 0.7, 1e-12);
  EXPECT_NEAR(posterior[1], 0.3, 1e-12);
}

TEST(BayesPosteriorTest, ThreeStateLikelihoodWithImpliedPrior) {
  const Vector prior = OracleImpliedPrior();
  // Frozen from the oracle above.
  EXPECT_NEAR(prior[0], 0.42951, 1e-5);
  EXPECT_NEAR(prior[1], 0.26983, 1e-5);
  EXPECT_NEAR(prior[2], 0.30066, 1e-5);
  const InfoStructure structure(StateSpace({"w1", "w2", "w3"}),
                                {"s1", "s2", "s3"}, prior,
                                fixtures::ThreeStateLikelihood());
  const BeliefVector posterior = BayesPosterior(structure, "s1");
  EXPECT_NEAR(posterior[0], 0.40, 0.005);
  EXPECT_NEAR(posterior[1], 0.21, 0.005);
  EXPECT_NEAR(posterior[2], 0.39, 0.005);
}

TEST(BayesPosteriorTest, UnreachableSignalIsAnError) {
  Matrix m(3, 2);
  m << 0.5, 0.5, 0.5, 0.5, 0.0, 0.0;
  const InfoStructure structure(StateSpace({"a", "b"}), {"x", "y", "z"},
                                Vector::Constant(2, 0.5), m);
  try {
    BayesPosterior(structure, "z");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_THAT(e.what(), HasSubstr("unreachable signal"));
  }
}

TEST(PosteriorMatrixTest, IdenticalSignalsGiveIdenticalRows) {
  Matrix m(3, 2);
  m << 0.2, 0.4, 0.2, 0.4, 0.6, 0.2;
  const InfoStructure structure(StateSpace({"a", "b"}), {"x", "y", "z"},
                                Vector::Constant(2, 0.5), m);
  const Matrix q = PosteriorMatrix(structure);
  EXPECT_EQ(q.row(0), q.row(1));
}

TEST(PosteriorMatrixTest, BinarySymmetric) {
  Matrix expected(2, 2);
  expected << 0.7, 0.3, 0.3, 0.7;
  ExpectMatrixNear(PosteriorMatrix(fixtures::BinarySymmetric(0.7)), expected,
                   1e-12);
}

TEST(PosteriorMatrixTest, ThreeStateReplayUsesPublishedTable) {
  ExpectMatrixNear(PosteriorMatrix(fixtures::ThreeStateExample()),
                   fixtures::ThreeStatePosterior(), 0.0);
}

TEST(ExpectedBeliefMatrixTest, PerfectlyInformativeIsIdentity) {
  const InfoStructure structure(StateSpace({"a", "b", "c"}), {"x", "y", "z"},
                                Vector::Constant(3, 1.0 / 3),
                                Matrix::Identity(3, 3));
  ExpectMatrixNear(ComputeExpectedBeliefMatrix(structure).entries(),
                   Matrix::Identity(3, 3), 1e-15);
}

TEST(ExpectedBeliefMatrixTest, BinarySymmetric) {
  Matrix expected(2, 2);
  expected << 0.58, 0.42, 0.42, 0.58;
  ExpectMatrixNear(
      ComputeExpectedBeliefMatrix(fixtures::BinarySymmetric(0.7)).entries(),
      expected, 1e-12);
}

TEST(ExpectedBeliefMatrixTest, ThreeStateMatchesPublishedAndOracle) {
  const Matrix computed =
      ComputeExpectedBeliefMatrix(fixtures::ThreeStateExample()).entries();
  ExpectMatrixNear(computed, fixtures::ThreeStatePublishedMeans(), 0.002);
  // Oracle: Q^T M evaluated by hand, to five decimals.
  Matrix frozen(3, 3);
  frozen << 0.43109, 0.43631, 0.42279, 0.27402, 0.41901, 0.13023, 0.29489,
      0.14468, 0.44698;
  ExpectMatrixNear(computed, frozen, 1e-5);
}

TEST(ExpectedBeliefMatrixTest, MatchesOracleOnRandomStructures) {
  testgen::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const InfoStructure structure =
        testgen::RandomStructure(rng, 2 + trial % 3, 2 + trial % 4);
    ExpectMatrixNear(ComputeExpectedBeliefMatrix(structure).entries(),
                     testgen::OracleExpectedBeliefMatrix(structure), 1e-12);
  }
}

TEST(ExpectedAlphaTest, PointMassBeliefGivesColumn) {
  Matrix m(2, 2);
  m << 1.0, 0.4, 0.0, 0.6;
  const InfoStructure structure(StateSpace({"a", "b"}), {"x", "y"},
                                Vector::Constant(2, 0.5), m);
  // Signal y rules out state a.
  const BeliefVector alpha = ExpectedAlpha(structure, 1);
  const Vector column = ComputeExpectedBeliefMatrix(structure).column(1);
  EXPECT_NEAR(alpha[0], column[0], 1e-15);
  EXPECT_NEAR(alpha[1], column[1], 1e-15);
}

TEST(ExpectedAlphaTest, BinarySymmetricCorrectSignal) {
  const BeliefVector alpha = ExpectedAlpha(fixtures::BinarySymmetric(0.7), 0);
  EXPECT_NEAR(alpha[0], 0.532, 1e-12);
}

TEST(ExpectedAlphaTest, ThreeStateSecondSignal) {
  const BeliefVector alpha = ExpectedAlpha(fixtures::ThreeStateExample(), 1);
  EXPECT_NEAR(alpha[0], 0.434, 0.002);
  EXPECT_NEAR(alpha[1], 0.351, 0.002);
  EXPECT_NEAR(alpha[2], 0.215, 0.002);
}

TEST(CheckAssumptionsTest, IdenticalColumnsAreUninformative) {
  Matrix m(2, 2);
  m << 0.4, 0.4, 0.6, 0.6;
  const AssumptionReport report =
      CheckAssumptions(InfoStructure(StateSpace({"a", "b"}), {"x", "y"},
                                     Vector::Constant(2, 0.5), m),
                       0.01);
  EXPECT_DOUBLE_EQ(report.tv_distance(0, 1), 0.0);
  EXPECT_NEAR(report.distinct_means, 0.0, 1e-15);
  EXPECT_FALSE(report.satisfied());
}

TEST(CheckAssumptionsTest, ThreeStateExample) {
  const AssumptionReport report =
      CheckAssumptions(fixtures::ThreeStateExample(), 0.01);
  EXPECT_EQ(report.posterior_rank, 3u);
  EXPECT_GT(report.distinct_means, 0.1);
}

TEST(CheckAssumptionsTest, VanishingAccuracyDropsBelowAnyDelta) {
  for (int i : {5, 10, 20}) {
    const AssumptionReport report =
        CheckAssumptions(fixtures::BinarySymmetric(0.5 + std::exp(-i)), 1e-6);
    EXPECT_NEAR(report.tv_distance(0, 1), 2.0 * std::exp(-i), 1e-12);
  }
  EXPECT_FALSE(
      CheckAssumptions(fixtures::BinarySymmetric(0.5 + std::exp(-20)), 1e-6)
          .minimal_information());
}

TEST(CheckAssumptionsTest, ZeroLikelihoodBreaksMutualContinuity) {
  Matrix m(2, 2);
  m << 1.0, 0.4, 0.0, 0.6;
  const AssumptionReport report =
      CheckAssumptions(InfoStructure(StateSpace({"a", "b"}), {"x", "y"},
                                     Vector::Constant(2, 0.5), m),
                       0.01);
  EXPECT_FALSE(report.informative);
  EXPECT_FALSE(report.mutually_continuous[0][1]);
}

TEST(ProductLiftTest, SingleDrawIsIdentity) {
  testgen::Rng rng(5);
  const InfoStructure structure = testgen::RandomStructure(rng, 3, 4);
  const InfoStructure lifted = ProductLift(structure, 1);
  ExpectMatrixNear(lifted.likelihood(), structure.likelihood(), 1e-15);
  ExpectMatrixNear(ComputeExpectedBeliefMatrix(lifted).entries(),
                   ComputeExpectedBeliefMatrix(structure).entries(), 1e-12);
}

TEST(ProductLiftTest, TwoDrawsOfBinarySymmetric) {
  const InfoStructure lifted = ProductLift(fixtures::BinarySymmetric(0.7), 2);
  ASSERT_EQ(lifted.num_signals(), 4u);
  const std::size_t both_correct = lifted.signal_index("s1|s1");
  EXPECT_NEAR(lifted.likelihood()(static_cast<Eigen::Index>(both_correct), 0),
              0.49, 1e-15);
}

TEST(ProductLiftTest, BinarySignalsThreeStatesReachFullRank) {
  Matrix m(2, 3);
  m << 0.2, 0.5, 0.9, 0.8, 0.5, 0.1;
  const InfoStructure structure(StateSpace({"a", "b", "c"}), {"x", "y"},
                                Vector::Constant(3, 1.0 / 3), m);
  EXPECT_EQ(CheckAssumptions(structure, 0.01).posterior_rank, 2u);
  EXPECT_EQ(CheckAssumptions(ProductLift(structure, 2), 0.01).posterior_rank,
            3u);
}

TEST(ProductLiftTest, CapIsEnforced) {
  try {
    ProductLift(fixtures::BinarySymmetric(0.7), 21);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_THAT(e.what(), HasSubstr("compound space too large"));
  }
}

TEST(ModelPropertyTest, PosteriorsAreBeliefsAndAverageToPrior) {
  testgen::Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const InfoStructure structure =
        testgen::RandomStructure(rng, 2 + trial % 4, 2 + trial % 5);
    Vector average =
        Vector::Zero(static_cast<Eigen::Index>(structure.num_states()));
    for (std::size_t s = 0; s < structure.num_signals(); ++s) {
      const BeliefVector posterior = BayesPosterior(structure, s);
      EXPECT_NEAR(posterior.components().sum(), 1.0, 1e-9);
      EXPECT_LT(MaxNormDistance(posterior.components(),
                                testgen::OraclePosterior(structure, s)),
                1e-12);
      average += structure.marginal(s) * posterior.components();
    }
    EXPECT_LT(MaxNormDistance(average, structure.prior()), 1e-9);
  }
}

// Belief in w1 is stochastically larger in state w1 than in state w2, and so
// is its mean.
TEST(ModelPropertyTest, BinaryDominanceAndMeanGap) {
  testgen::Rng rng(99);
  int checked = 0;
  while (checked < 200) {
    const InfoStructure structure =
        testgen::RandomStructure(rng, 2, 2 + checked % 4);
    const AssumptionReport report = CheckAssumptions(structure, 0.05);
    if (!report.minimal_information()) continue;
    ++checked;
    const auto dists = InducedBeliefDistributions(structure);
    for (const auto& point : dists[0].support) {
      double cdf_true = 0.0, cdf_other = 0.0;
      for (std::size_t k = 0; k < dists[0].support.size(); ++k) {
        if (dists[0].support[k][0] <= point[0]) {
          cdf_true += dists[0].weights[k];
          cdf_other += dists[1].weights[k];
        }
      }
      EXPECT_LE(cdf_true, cdf_other + 1e-12);
    }
    const Matrix e = ComputeExpectedBeliefMatrix(structure).entries();
    EXPECT_GT(e(0, 0) - e(0, 1), 1e-6);
  }
}

}  // namespace
}  // namespace beliefagg
