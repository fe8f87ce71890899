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

#include "beliefagg/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "beliefagg/error.hpp"

namespace beliefagg {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

const BeliefVector& SecondOrder(const AgentReport& report) {
  if (!report.second_order) throw Error("missing second-order report");
  return *report.second_order;
}

void CheckSeparated(const AgentReport& a, const AgentReport& b,
                    const MatchOptions& options) {
  if (MaxNormDistance(a.first_order.components(), b.first_order.components()) <=
      options.separation_tol) {
    throw Error("degenerate reporter pair");
  }
}

RecoveredMeans RecoverFromReports(std::span<const AgentReport> reporters,
                                  double rank_tol) {
  const std::size_t num_states = reporters.front().first_order.size();
  Matrix beliefs(Idx(reporters.size()), Idx(num_states));
  Matrix alphas(Idx(reporters.size()), Idx(num_states));
  for (std::size_t r = 0; r < reporters.size(); ++r) {
    const BeliefVector& alpha = SecondOrder(reporters[r]);
    if (alpha.size() != num_states ||
        reporters[r].first_order.size() != num_states) {
      throw Error("dimension mismatch");
    }
    beliefs.row(Idx(r)) = reporters[r].first_order.components().transpose();
    alphas.row(Idx(r)) = alpha.components().transpose();
  }
  return RecoverMeans(beliefs, alphas, rank_tol);
}

AggregationOutcome TwoReporterPmba(std::string procedure,
                                   const BeliefVector& realized,
                                   const AgentReport& reporter_a,
                                   const AgentReport& reporter_b,
                                   const MatchOptions& options) {
  if (realized.size() != 2 || reporter_a.first_order.size() != 2) {
    throw Error("procedure requires exactly two states");
  }
  CheckSeparated(reporter_a, reporter_b, options);
  const AgentReport pair[] = {reporter_a, reporter_b};
  return MatchToColumns(std::move(procedure), realized,
                        RecoverFromReports(pair, options.rank_tol), options);
}

}  // namespace

double MonteCarloAmbiguity(std::size_t num_states, std::size_t num_agents) {
  return 3.0 * std::sqrt(static_cast<double>(num_states) /
                         static_cast<double>(num_agents));
}

RecoveredMeans RecoverMeans(const Matrix& beliefs, const Matrix& alphas,
                            double rank_tol) {
  if (beliefs.rows() != beliefs.cols() || alphas.rows() != beliefs.rows() ||
      alphas.cols() != beliefs.cols()) {
    throw Error("dimension mismatch: reporter matrices must be L x L");
  }
  if (NumericalRank(beliefs, rank_tol) <
      static_cast<std::size_t>(beliefs.rows())) {
    throw Error("rank-deficient population");
  }
  Eigen::JacobiSVD<Matrix> svd(beliefs);
  const Vector& sigma = svd.singularValues();
  const double condition = sigma[0] / sigma[sigma.size() - 1];
  const Matrix transposed = beliefs.fullPivLu().solve(alphas);
  const double tolerance = std::max(1e-6, condition * 1e-12);
  return {ExpectedBeliefMatrix(transposed.transpose(), tolerance), condition};
}

AggregationOutcome MatchToColumns(std::string procedure,
                                  const BeliefVector& realized,
                                  RecoveredMeans recovered,
                                  const MatchOptions& options) {
  const std::size_t num_states = recovered.means.size();
  if (realized.size() != num_states) throw Error("dimension mismatch");
  AggregationOutcome outcome;
  outcome.procedure = std::move(procedure);
  outcome.population_mean = realized;
  outcome.condition_number = recovered.condition_number;
  outcome.ill_conditioned = recovered.condition_number > kConditionWarning;
  outcome.distances.resize(num_states);
  for (std::size_t w = 0; w < num_states; ++w) {
    outcome.distances[w] =
        MaxNormDistance(realized.components(), recovered.means.column(w));
  }
  std::vector<std::size_t> order(num_states);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return outcome.distances[a] < outcome.distances[b];
                   });
  outcome.recovered_state = order[0];
  outcome.match_distance = outcome.distances[order[0]];
  outcome.runner_up_distance = outcome.distances[order[1]];
  outcome.recovered_means = std::move(recovered.means);
  if (outcome.runner_up_distance - outcome.match_distance <
      options.ambiguity_tol) {
    throw Error("ambiguous state match");
  }
  return outcome;
}

BeliefVector PopulationMean(std::span<const AgentReport> reports) {
  if (reports.empty()) throw Error("empty population");
  Vector total = Vector::Zero(Idx(reports.front().first_order.size()));
  for (const auto& report : reports) total += report.first_order.components();
  total /= static_cast<double>(reports.size());
  total /= total.sum();
  return BeliefVector(std::move(total));
}

BeliefVector RealizedVoteShares(std::span<const AgentReport> reports,
                                std::size_t num_states) {
  if (reports.empty()) throw Error("empty population");
  Vector shares = Vector::Zero(Idx(num_states));
  for (const auto& report : reports) {
    if (!report.vote) throw Error("missing vote");
    if (*report.vote >= num_states) throw Error("vote out of range");
    shares[Idx(*report.vote)] += 1.0;
  }
  shares /= static_cast<double>(reports.size());
  return BeliefVector(std::move(shares));
}

std::vector<std::size_t> SelectReporters(std::span<const AgentReport> reports,
                                         std::size_t num_states,
                                         double rank_tol) {
  std::vector<std::size_t> kept;
  Matrix rows(0, Idx(num_states));
  for (std::size_t i = 0; i < reports.size() && kept.size() < num_states; ++i) {
    const Vector& belief = reports[i].first_order.components();
    if (belief.size() != Idx(num_states)) throw Error("dimension mismatch");
    bool duplicate = false;
    for (std::size_t k : kept) {
      if (reports[k].first_order.components() == belief) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    Matrix candidate(rows.rows() + 1, Idx(num_states));
    candidate << rows, belief.transpose();
    if (NumericalRank(candidate, rank_tol) ==
        static_cast<std::size_t>(candidate.rows())) {
      rows = std::move(candidate);
      kept.push_back(i);
    }
  }
  if (kept.size() < num_states) throw Error("rank-deficient population");
  return kept;
}

std::pair<std::size_t, std::size_t> SelectOppositeVoters(
    std::span<const AgentReport> reports) {
  if (reports.empty()) throw Error("empty population");
  const auto first_vote = reports.front().vote;
  if (!first_vote) throw Error("missing vote");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (!reports[i].vote) throw Error("missing vote");
    if (*reports[i].vote != *first_vote) return {0, i};
  }
  throw Error("herding detected");
}

AggregationOutcome PmbaBinary(const BeliefVector& population_mean,
                              const AgentReport& reporter_a,
                              const AgentReport& reporter_b,
                              const MatchOptions& options) {
  return TwoReporterPmba("pmba_binary", population_mean, reporter_a, reporter_b,
                         options);
}

AggregationOutcome PmbaBinary(std::span<const AgentReport> reports,
                              std::size_t reporter_a, std::size_t reporter_b,
                              const MatchOptions& options) {
  if (reporter_a >= reports.size() || reporter_b >= reports.size()) {
    throw Error("agent index out of range");
  }
  auto outcome = PmbaBinary(PopulationMean(reports), reports[reporter_a],
                            reports[reporter_b], options);
  outcome.reporters = {reporter_a, reporter_b};
  return outcome;
}

AggregationOutcome PmbaMulti(const BeliefVector& population_mean,
                             std::span<const AgentReport> reporters,
                             const MatchOptions& options) {
  if (reporters.size() != population_mean.size()) {
    throw Error("pmba_multi needs exactly one reporter per state");
  }
  return MatchToColumns("pmba_multi", population_mean,
                        RecoverFromReports(reporters, options.rank_tol),
                        options);
}

AggregationOutcome PmbaMulti(std::span<const AgentReport> reports,
                             std::span<const std::size_t> reporter_indices,
                             const MatchOptions& options) {
  const BeliefVector mean = PopulationMean(reports);
  std::vector<std::size_t> indices(reporter_indices.begin(),
                                   reporter_indices.end());
  if (indices.empty()) {
    indices = SelectReporters(reports, mean.size(), options.rank_tol);
  }
  std::vector<AgentReport> selected;
  selected.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= reports.size()) throw Error("agent index out of range");
    selected.push_back(reports[i]);
  }
  auto outcome = PmbaMulti(mean, selected, options);
  outcome.reporters = std::move(indices);
  return outcome;
}

AggregationOutcome ActionPmba(const BeliefVector& vote_shares,
                              const AgentReport& reporter_a,
                              const AgentReport& reporter_b,
                              const MatchOptions& options) {
  if (reporter_a.vote && reporter_b.vote &&
      *reporter_a.vote == *reporter_b.vote) {
    throw Error("herding detected");
  }
  return TwoReporterPmba("action_pmba", vote_shares, reporter_a, reporter_b,
                         options);
}

AggregationOutcome ActionPmba(std::span<const AgentReport> reports,
                              std::size_t reporter_a, std::size_t reporter_b,
                              const MatchOptions& options) {
  if (reporter_a >= reports.size() || reporter_b >= reports.size()) {
    throw Error("agent index out of range");
  }
  auto outcome = ActionPmba(RealizedVoteShares(reports, 2), reports[reporter_a],
                            reports[reporter_b], options);
  outcome.reporters = {reporter_a, reporter_b};
  return outcome;
}

AggregationOutcome LimitedInfoPmba(std::span<const AgentReport> reports,
                                   const MatchOptions& options) {
  const BeliefVector mean = PopulationMean(reports);
  if (mean.size() != 2) throw Error("procedure requires exactly two states");
  Vector belief_a = Vector::Zero(2), alpha_a = Vector::Zero(2);
  Vector belief_b = Vector::Zero(2), alpha_b = Vector::Zero(2);
  std::size_t count_a = 0, count_b = 0;
  for (const auto& report : reports) {
    const Vector& alpha = SecondOrder(report).components();
    if (report.first_order[0] <= mean[0]) {
      belief_a += report.first_order.components();
      alpha_a += alpha;
      ++count_a;
    } else {
      belief_b += report.first_order.components();
      alpha_b += alpha;
      ++count_b;
    }
  }
  if (count_a == 0 || count_b == 0) throw Error("degenerate grouping");
  auto group = [](Vector v, std::size_t count) {
    v /= static_cast<double>(count);
    v /= v.sum();
    return BeliefVector(std::move(v));
  };
  const AgentReport group_a{group(belief_a, count_a), group(alpha_a, count_a),
                            std::nullopt};
  const AgentReport group_b{group(belief_b, count_b), group(alpha_b, count_b),
                            std::nullopt};
  if (MaxNormDistance(group_a.first_order.components(),
                      group_b.first_order.components()) <=
      options.separation_tol) {
    throw Error("singular group-mean matrix");
  }
  const AgentReport pair[] = {group_a, group_b};
  return MatchToColumns("limited_info_pmba", mean,
                        RecoverFromReports(pair, options.rank_tol), options);
}

std::size_t SurprisinglyPopular(const BeliefVector& population_mean,
                                const BeliefVector& alpha, double tolerance) {
  if (population_mean.size() != 2 || alpha.size() != 2) {
    throw Error("procedure requires exactly two states");
  }
  for (std::size_t w = 0; w < 2; ++w) {
    if (population_mean[w] > alpha[w] + tolerance) return w;
  }
  throw Error("no surprise");
}

SpVerdict SpSets(const BeliefVector& realized, const BeliefVector& alpha,
                 double tolerance) {
  if (realized.size() != alpha.size()) throw Error("dimension mismatch");
  SpVerdict verdict;
  verdict.margins = realized.components() - alpha.components();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < realized.size(); ++w) {
    const double margin = verdict.margins[Idx(w)];
    if (margin > tolerance) {
      verdict.sp_states.push_back(w);
      if (margin > best) {
        best = margin;
        verdict.most_surprising = w;
      }
    }
  }
  return verdict;
}

Matrix PredictedVoteMatrix(const InfoStructure& structure) {
  const std::size_t num_states = structure.num_states();
  const Matrix q = PosteriorMatrix(structure);
  Matrix predicted = Matrix::Zero(Idx(num_states), Idx(num_states));
  Vector weight = Vector::Zero(Idx(num_states));
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    const double marginal = structure.marginal(s);
    if (!(marginal > 0.0)) continue;
    const std::size_t voted = Vote(BeliefVector(q.row(Idx(s)).transpose()));
    predicted.row(Idx(voted)) +=
        marginal * ExpectedVoteShares(structure, s).components().transpose();
    weight[Idx(voted)] += marginal;
  }
  for (std::size_t j = 0; j < num_states; ++j) {
    if (!(weight[Idx(j)] > 0.0)) throw Error("undefined normalization");
    predicted.row(Idx(j)) /= weight[Idx(j)];
  }
  return predicted;
}

Vector PredictionNormalizedVotes(const Vector& vote_shares,
                                 const Matrix& predicted) {
  const Eigen::Index n = vote_shares.size();
  if (predicted.rows() != n || predicted.cols() != n) {
    throw Error("dimension mismatch");
  }
  if (!(predicted.minCoeff() > 0.0)) throw Error("undefined normalization");
  Vector scores(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double denominator = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      denominator += predicted(j, k) / predicted(k, j);
    }
    scores[j] = vote_shares[j] / denominator;
  }
  return scores;
}

}  // namespace beliefagg
