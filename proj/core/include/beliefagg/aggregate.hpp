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

// Aggregation procedures. The population-mean-based family recovers the
// state-conditional expected belief matrix from a few agents' first- and
// second-order reports and then matches the realized population mean to its
// nearest column. The surprisingly-popular family compares realized averages
// against a reporter's expectation of them.

#ifndef BELIEFAGG_AGGREGATE_HPP_
#define BELIEFAGG_AGGREGATE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beliefagg/model.hpp"
#include "beliefagg/population.hpp"

namespace beliefagg {

struct MatchOptions {
  // Minimum gap between the best and second-best column distances.
  double ambiguity_tol = 1e-6;
  // Minimum max-norm distance between two reporters' first-order beliefs.
  double separation_tol = 1e-9;
  double rank_tol = kDefaultRankTolerance;
};

// Ambiguity tolerance for finite populations of size n over L states.
double MonteCarloAmbiguity(std::size_t num_states, std::size_t num_agents);

struct AggregationOutcome {
  std::string procedure;
  std::size_t recovered_state = 0;
  ExpectedBeliefMatrix recovered_means;
  // The realized quantity that was matched: the population-average belief,
  // or the realized vote shares for the action-based procedure.
  BeliefVector population_mean;
  std::vector<double> distances;  // to each recovered column
  double match_distance = 0.0;
  double runner_up_distance = 0.0;
  double condition_number = 0.0;
  bool ill_conditioned = false;  // condition number above kConditionWarning
  std::vector<std::size_t> reporters;
};

struct RecoveredMeans {
  ExpectedBeliefMatrix means;
  double condition_number = 0.0;
};

// Solves beliefs * means^T = alphas for the expected belief matrix. Row r of
// `beliefs` and `alphas` holds one reporter's first- and second-order report.
RecoveredMeans RecoverMeans(const Matrix& beliefs, const Matrix& alphas,
                            double rank_tol = kDefaultRankTolerance);

// Nearest-column match of `realized` against `means` in max norm.
AggregationOutcome MatchToColumns(std::string procedure,
                                  const BeliefVector& realized,
                                  RecoveredMeans recovered,
                                  const MatchOptions& options);

BeliefVector PopulationMean(std::span<const AgentReport> reports);
// Fraction of agents voting for each state; every report needs a vote.
BeliefVector RealizedVoteShares(std::span<const AgentReport> reports,
                                std::size_t num_states);

// Greedy scan in index order keeping each agent whose first-order belief
// raises the rank of the kept rows. Throws Error("rank-deficient population")
// when fewer than `num_states` rows are found.
std::vector<std::size_t> SelectReporters(std::span<const AgentReport> reports,
                                         std::size_t num_states,
                                         double rank_tol);

// First agent plus the first later agent with a different vote. Throws
// Error("herding detected") when every agent votes alike.
std::pair<std::size_t, std::size_t> SelectOppositeVoters(
    std::span<const AgentReport> reports);

AggregationOutcome PmbaBinary(const BeliefVector& population_mean,
                              const AgentReport& reporter_a,
                              const AgentReport& reporter_b,
                              const MatchOptions& options = {});
AggregationOutcome PmbaBinary(std::span<const AgentReport> reports,
                              std::size_t reporter_a, std::size_t reporter_b,
                              const MatchOptions& options = {});

// `reporters` must hold exactly L reports, each with a second-order report.
AggregationOutcome PmbaMulti(const BeliefVector& population_mean,
                             std::span<const AgentReport> reporters,
                             const MatchOptions& options = {});
// An empty `reporter_indices` selects reporters with SelectReporters.
AggregationOutcome PmbaMulti(std::span<const AgentReport> reports,
                             std::span<const std::size_t> reporter_indices,
                             const MatchOptions& options = {});

// Reporters carry their beliefs and expected vote shares; `vote_shares` is
// the realized fraction voting for each state.
AggregationOutcome ActionPmba(const BeliefVector& vote_shares,
                              const AgentReport& reporter_a,
                              const AgentReport& reporter_b,
                              const MatchOptions& options = {});
AggregationOutcome ActionPmba(std::span<const AgentReport> reports,
                              std::size_t reporter_a, std::size_t reporter_b,
                              const MatchOptions& options = {});

// Every agent carries a (possibly misspecified) second-order report. Agents
// are split by whether their belief in the first state is at most the
// population mean, and the two group averages act as reporters.
AggregationOutcome LimitedInfoPmba(std::span<const AgentReport> reports,
                                   const MatchOptions& options = {});

// Binary only: the state whose realized average exceeds the reporter's
// expectation. Throws Error("no surprise") when none does.
std::size_t SurprisinglyPopular(const BeliefVector& population_mean,
                                const BeliefVector& alpha,
                                double tolerance = 1e-12);

struct SpVerdict {
  std::vector<std::size_t> sp_states;  // ascending
  std::optional<std::size_t> most_surprising;
  Vector margins;  // realized minus expected, per state
};

SpVerdict SpSets(const BeliefVector& realized, const BeliefVector& alpha,
                 double tolerance = 1e-12);

// V(j, k): predicted share of votes for state k held by an agent voting for
// state j. Signals voting for the same state are pooled by their marginal
// probabilities. Throws Error("undefined normalization") when some state
// receives no voters.
Matrix PredictedVoteMatrix(const InfoStructure& structure);

// score(j) = vote_shares(j) / sum_k V(j, k) / V(k, j).
Vector PredictionNormalizedVotes(const Vector& vote_shares,
                                 const Matrix& predicted);

}  // namespace beliefagg

#endif  // BELIEFAGG_AGGREGATE_HPP_
