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

#include "beliefagg/population.hpp"

#include <cmath>
#include <numeric>

#include "beliefagg/aggregate.hpp"
#include "beliefagg/error.hpp"
#include "beliefagg/fixtures.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/generators.hpp"

namespace beliefagg {
namespace {

using ::testing::HasSubstr;

ExpectedBeliefMatrix BinaryMeans() {
  Matrix e(2, 2);
  e << 0.58, 0.42, 0.42, 0.58;
  return ExpectedBeliefMatrix(e);
}

TEST(CorrelationSpecTest, Validation) {
  EXPECT_NO_THROW(CorrelationSpec::Iid().Validate());
  EXPECT_THROW(CorrelationSpec::Block(0).Validate(), Error);
  EXPECT_THROW((CorrelationSpec{CorrelationKind::kIid, 3}).Validate(), Error);
  EXPECT_THROW(SamplePopulation(fixtures::BinarySymmetric(0.7),
                                CorrelationSpec::Block(0), 10, 0, 1),
               Error);
}

TEST(CounterStreamTest, DrawsDependOnlyOnIndex) {
  CounterStream forward(42, 7);
  std::vector<double> sequential;
  for (std::size_t i = 0; i < 10000; ++i) {
    sequential.push_back(forward.Uniform(i));
  }
  CounterStream random_access(42, 7);
  for (std::size_t i : {9999u, 0u, 4096u, 4095u, 5000u, 17u}) {
    EXPECT_EQ(random_access.Uniform(i), sequential[i]) << "index " << i;
  }
  CounterStream other_purpose(42, 8);
  EXPECT_NE(other_purpose.Uniform(0), sequential[0]);
}

TEST(SamplePopulationTest, SingleBlockSharesOneSignal) {
  testgen::Rng rng(3);
  const InfoStructure structure = testgen::RandomStructure(rng, 3, 5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PopulationDraw draw =
        SamplePopulation(structure, CorrelationSpec::Block(4), 4, 1, seed);
    for (std::size_t s : draw.signals) EXPECT_EQ(s, draw.signals[0]);
  }
}

TEST(SamplePopulationTest, Deterministic) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  const PopulationDraw a = SamplePopulation(structure, CorrelationSpec::Iid(),
                                            1000, std::nullopt, 9);
  const PopulationDraw b = SamplePopulation(structure, CorrelationSpec::Iid(),
                                            1000, std::nullopt, 9);
  EXPECT_EQ(a.true_state, b.true_state);
  EXPECT_EQ(a.signals, b.signals);
  EXPECT_EQ(a.seed, 9u);
}

TEST(SamplePopulationTest, PrefixIsIndependentOfPopulationSize) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  const PopulationDraw small =
      SamplePopulation(structure, CorrelationSpec::Iid(), 100, 0, 5);
  const PopulationDraw large =
      SamplePopulation(structure, CorrelationSpec::Iid(), 10000, 0, 5);
  EXPECT_TRUE(std::equal(small.signals.begin(), small.signals.end(),
                         large.signals.begin()));
}

TEST(SamplePopulationTest, FirstOrderReportsAreBayesPosteriors) {
  testgen::Rng rng(4);
  const InfoStructure structure = testgen::RandomStructure(rng, 3, 4);
  const PopulationDraw draw =
      SamplePopulation(structure, CorrelationSpec::Iid(), 200, std::nullopt, 1);
  ASSERT_EQ(draw.reports.size(), draw.signals.size());
  for (std::size_t i = 0; i < draw.reports.size(); ++i) {
    EXPECT_EQ(draw.reports[i].first_order.components(),
              BayesPosterior(structure, draw.signals[i]).components());
  }
}

TEST(SamplePopulationTest, SignalFrequencyConcentrates) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  int within = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    const PopulationDraw draw = SamplePopulation(
        structure, CorrelationSpec::Iid(), 100000, 0, 1000 + seed);
    const auto correct =
        std::count(draw.signals.begin(), draw.signals.end(), std::size_t{0});
    if (std::abs(static_cast<double>(correct) / 1e5 - 0.7) <= 0.01) ++within;
  }
  EXPECT_GE(within, 99);
}

// The population mean of first-order beliefs lands within 3 sqrt(L/n) of the
// true-state column, for iid and block-correlated populations.
TEST(SamplePopulationTest, PopulationMeanConcentrates) {
  testgen::Rng rng(8);
  const InfoStructure structure = testgen::RandomStructure(rng, 3, 4);
  const ExpectedBeliefMatrix means = ComputeExpectedBeliefMatrix(structure);
  const std::size_t n = 100000;
  const double bound = MonteCarloAmbiguity(3, n);
  for (const CorrelationSpec& corr :
       {CorrelationSpec::Iid(), CorrelationSpec::Block(5)}) {
    int within = 0;
    const int seeds = 500;
    for (int seed = 0; seed < seeds; ++seed) {
      const PopulationDraw draw =
          SamplePopulation(structure, corr, n, std::nullopt, seed);
      const double error =
          MaxNormDistance(PopulationMean(draw.reports).components(),
                          means.column(draw.true_state));
      if (error < bound) ++within;
    }
    EXPECT_GE(within, 495);
  }
}

TEST(TruthfulAlphaTest, PointMassGivesColumn) {
  const BeliefVector alpha =
      TruthfulAlpha(BeliefVector::PointMass(2, 1), BinaryMeans());
  EXPECT_DOUBLE_EQ(alpha[0], 0.42);
  EXPECT_DOUBLE_EQ(alpha[1], 0.58);
}

TEST(TruthfulAlphaTest, TwoTermCombination) {
  const BeliefVector alpha = TruthfulAlpha({0.7, 0.3}, BinaryMeans());
  EXPECT_NEAR(alpha[0], 0.532, 1e-12);
  EXPECT_NEAR(alpha[1], 0.468, 1e-12);
}

TEST(TruthfulAlphaTest, ThreeStateThirdSignal) {
  const InfoStructure structure = fixtures::ThreeStateExample();
  const BeliefVector alpha =
      TruthfulAlpha(BeliefVector(PosteriorMatrix(structure).row(2).transpose()),
                    ComputeExpectedBeliefMatrix(structure));
  EXPECT_NEAR(alpha[0], 0.427, 0.002);
  EXPECT_NEAR(alpha[1], 0.211, 0.002);
  EXPECT_NEAR(alpha[2], 0.362, 0.002);
}

TEST(TruthfulAlphaTest, AlwaysOnSimplex) {
  testgen::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t l = 2 + trial % 4;
    const ExpectedBeliefMatrix means =
        ComputeExpectedBeliefMatrix(testgen::RandomStructure(rng, l, l + 1));
    const BeliefVector alpha =
        TruthfulAlpha(BeliefVector(testgen::RandomSimplexPoint(rng, l)), means);
    EXPECT_GE(alpha.components().minCoeff(), 0.0);
    EXPECT_NEAR(alpha.components().sum(), 1.0, 1e-12);
  }
}

TEST(MisspecifiedAlphaTest, ZeroNoiseIsTruthful) {
  const BeliefVector first{0.7, 0.3};
  const BeliefVector alpha =
      MisspecifiedAlpha(first, BinaryMeans(), MisspecSpec{0.0, true}, 17);
  EXPECT_NEAR(alpha[0], 0.532, 1e-15);
}

TEST(MisspecifiedAlphaTest, StaysWithinHalfWidth) {
  const BeliefVector first{0.7, 0.3};
  const BeliefVector truthful = TruthfulAlpha(first, BinaryMeans());
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const BeliefVector alpha =
        MisspecifiedAlpha(first, BinaryMeans(), MisspecSpec{0.01, true}, seed);
    EXPECT_LE(MaxNormDistance(alpha.components(), truthful.components()),
              0.01 + 1e-15);
  }
}

TEST(MisspecifiedAlphaTest, GuardRejectsOverlappingNoise) {
  try {
    MisspecifiedAlpha({0.7, 0.3}, BinaryMeans(), MisspecSpec{0.08, true}, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_THAT(e.what(), HasSubstr("misspecification overlaps state means"));
  }
  EXPECT_NO_THROW(MisspecifiedAlpha({0.7, 0.3}, BinaryMeans(),
                                    MisspecSpec{0.08, false}, 1));
}

TEST(MisspecifiedAlphaTest, PopulationAverageConcentrates) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  const ExpectedBeliefMatrix means = ComputeExpectedBeliefMatrix(structure);
  const BeliefVector truthful = TruthfulAlpha({0.7, 0.3}, means);
  int within = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    PopulationDraw draw = SamplePopulation(
        structure, CorrelationSpec::Block(100000), 100000, 0, seed);
    draw.reports.assign(draw.reports.size(), AgentReport{{0.7, 0.3}, {}, {}});
    AttachMisspecifiedAlphas(draw, means, MisspecSpec{0.02, true}, seed);
    Vector average = Vector::Zero(2);
    for (const auto& report : draw.reports) {
      average += report.second_order->components();
    }
    average /= static_cast<double>(draw.reports.size());
    if (MaxNormDistance(average, truthful.components()) < 0.001) ++within;
  }
  EXPECT_GE(within, 99);
}

// Averages over m agents sharing a belief stay within 3h/sqrt(m) of the
// truthful report.
TEST(MisspecifiedAlphaTest, GroupAverageBound) {
  testgen::Rng rng(31);
  const InfoStructure structure = testgen::RandomStructure(rng, 3, 4);
  const ExpectedBeliefMatrix means = ComputeExpectedBeliefMatrix(structure);
  const double h = 0.9 * means.min_column_gap() / 4.0;
  const BeliefVector first(testgen::RandomSimplexPoint(rng, 3));
  const BeliefVector truthful = TruthfulAlpha(first, means);
  const std::size_t m = 2000;
  const std::size_t draws = MisspecDrawsPerAgent(3);
  int within = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    CounterStream stream(seed, 99, draws);
    std::vector<double> uniforms(draws);
    Vector average = Vector::Zero(3);
    for (std::size_t i = 0; i < m; ++i) {
      stream.Draw(i, uniforms);
      average += MisspecifiedAlpha(first, means, MisspecSpec{h, true}, uniforms)
                     .components();
    }
    average /= static_cast<double>(m);
    if (MaxNormDistance(average, truthful.components()) <
        3.0 * h / std::sqrt(static_cast<double>(m))) {
      ++within;
    }
  }
  EXPECT_GE(within, 495);
}

TEST(VoteTest, TieGoesToFirstState) { EXPECT_EQ(Vote({0.5, 0.5}), 0u); }

TEST(VoteTest, StrictArgmax) { EXPECT_EQ(Vote({0.2, 0.3, 0.5}), 2u); }

TEST(VoteTest, ThreeStateSecondSignalVotesSecondState) {
  EXPECT_EQ(Vote({0.45, 0.54, 0.01}), 1u);
}

TEST(VoteTest, InvariantUnderRescaling) {
  testgen::Rng rng(2);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector p = testgen::RandomSimplexPoint(rng, 2 + trial % 5);
    const Vector scaled = p * scale(rng);
    EXPECT_EQ(Vote(BeliefVector(p)), Vote(BeliefVector(scaled / scaled.sum())));
  }
}

TEST(ExpectedVoteSharesTest, PerfectlyInformative) {
  const InfoStructure structure(StateSpace({"a", "b", "c"}), {"x", "y", "z"},
                                Vector::Constant(3, 1.0 / 3),
                                Matrix::Identity(3, 3));
  for (std::size_t s = 0; s < 3; ++s) {
    const BeliefVector shares = ExpectedVoteShares(structure, s);
    EXPECT_NEAR(shares[s], 1.0, 1e-15);
  }
}

TEST(ExpectedVoteSharesTest, BinarySymmetricCorrectSignal) {
  EXPECT_NEAR(ExpectedVoteShares(fixtures::BinarySymmetric(0.7), 0)[0], 0.58,
              1e-12);
}

TEST(ExpectedVoteSharesTest, ThreeStateFirstSignalPredictsSecondStateVotes) {
  const Matrix q = fixtures::ThreeStatePosterior();
  const Matrix m = fixtures::ThreeStateLikelihood();
  // Oracle: sum over states of Q[s1][w] * M[s2][w].
  double expected = 0.0;
  for (Eigen::Index w = 0; w < 3; ++w) expected += q(0, w) * m(1, w);
  EXPECT_NEAR(ExpectedVoteShares(fixtures::ThreeStateExample(), 0)[1], expected,
              1e-15);
}

TEST(AttachTest, BulkHelpersFillReports) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  PopulationDraw draw =
      SamplePopulation(structure, CorrelationSpec::Iid(), 50, 0, 3);
  AttachVotes(draw);
  const std::vector<std::size_t> agents = {0, 5};
  AttachTruthfulAlphas(draw, structure, agents);
  for (std::size_t i = 0; i < draw.reports.size(); ++i) {
    ASSERT_TRUE(draw.reports[i].vote.has_value());
    EXPECT_EQ(*draw.reports[i].vote, draw.signals[i]);
    EXPECT_EQ(draw.reports[i].second_order.has_value(), i == 0 || i == 5);
  }
}

}  // namespace
}  // namespace beliefagg
