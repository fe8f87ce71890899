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

#include "beliefagg/incentives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "beliefagg/error.hpp"

namespace beliefagg {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Grid points this close to the truthful report are the truthful report.
constexpr double kSameReport = 1e-12;

void EnumerateGrid(std::size_t remaining_states, long remaining_units,
                   long units, Vector& current, std::size_t position,
                   std::vector<BeliefVector>& out) {
  if (remaining_states == 1) {
    current[Idx(position)] =
        static_cast<double>(remaining_units) / static_cast<double>(units);
    out.emplace_back(current);
    return;
  }
  for (long k = 0; k <= remaining_units; ++k) {
    current[Idx(position)] =
        static_cast<double>(k) / static_cast<double>(units);
    EnumerateGrid(remaining_states - 1, remaining_units - k, units, current,
                  position + 1, out);
  }
}

double ExpectedScore(const ScoreFunction& score, const BeliefVector& report,
                     const Vector& weights, const Matrix& outcomes) {
  double total = 0.0;
  for (Eigen::Index w = 0; w < weights.size(); ++w) {
    if (weights[w] == 0.0) continue;
    total += weights[w] * score(report, outcomes.col(w));
  }
  return total;
}

double BestGain(const ScoreFunction& score, const BeliefVector& truthful,
                const Vector& weights, const Matrix& outcomes,
                const std::vector<BeliefVector>& grid) {
  const double baseline = ExpectedScore(score, truthful, weights, outcomes);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& deviation : grid) {
    if (MaxNormDistance(deviation.components(), truthful.components()) <=
        kSameReport) {
      best = std::max(best, 0.0);
      continue;
    }
    best = std::max(
        best, ExpectedScore(score, deviation, weights, outcomes) - baseline);
  }
  return best;
}

}  // namespace

void ScoringRule::Validate() const {
  if (kind == ScoringKind::kLogarithmic &&
      !(log_floor > 0.0 && log_floor <= 0.01)) {
    throw Error("log_floor must lie in (0, 0.01]");
  }
}

double Score(const ScoringRule& rule, const BeliefVector& report,
             std::size_t state) {
  if (state >= report.size()) throw Error("state index out of range");
  rule.Validate();
  if (rule.kind == ScoringKind::kLogarithmic) {
    return std::log(std::max(report[state], rule.log_floor));
  }
  double total = 0.0;
  for (std::size_t w = 0; w < report.size(); ++w) {
    const double d = report[w] - (w == state ? 1.0 : 0.0);
    total += d * d;
  }
  return -total;
}

double Score(const ScoringRule& rule, const BeliefVector& report,
             const Vector& outcome) {
  if (outcome.size() != Idx(report.size())) throw Error("dimension mismatch");
  rule.Validate();
  double total = 0.0;
  if (rule.kind == ScoringKind::kLogarithmic) {
    for (std::size_t w = 0; w < report.size(); ++w) {
      if (outcome[Idx(w)] == 0.0) continue;
      total += outcome[Idx(w)] * std::log(std::max(report[w], rule.log_floor));
    }
    return total;
  }
  for (std::size_t w = 0; w < report.size(); ++w) {
    const double d = report[w] - outcome[Idx(w)];
    total += d * d;
  }
  return -total;
}

void PaymentSchedule::Validate() const {
  rule.Validate();
  if (!(first_order_scale >= 0.0) || !(second_order_scale >= 0.0) ||
      !std::isfinite(first_order_scale) || !std::isfinite(second_order_scale)) {
    throw Error("payment scales must be finite and nonnegative");
  }
}

std::vector<double> Settle(const PopulationDraw& draw,
                           const AggregationOutcome& outcome,
                           const PaymentSchedule& schedule) {
  schedule.Validate();
  std::vector<double> payments(draw.reports.size());
  for (std::size_t i = 0; i < draw.reports.size(); ++i) {
    payments[i] = schedule.first_order_scale *
                  Score(schedule.rule, draw.reports[i].first_order,
                        outcome.recovered_state);
  }
  const std::vector<std::size_t>& designated =
      schedule.designated ? *schedule.designated : outcome.reporters;
  for (std::size_t i : designated) {
    if (i >= draw.reports.size()) throw Error("agent index out of range");
    const auto& second = draw.reports[i].second_order;
    if (!second) throw Error("missing second-order report");
    payments[i] +=
        schedule.second_order_scale *
        Score(schedule.rule, *second, outcome.population_mean.components());
  }
  return payments;
}

std::vector<BeliefVector> SimplexGrid(std::size_t num_states, double step) {
  if (num_states < 1) throw Error("grid needs at least one state");
  if (!(step > 0.0) || step > 1.0) throw Error("grid step must lie in (0, 1]");
  const double inverse = 1.0 / step;
  const long units = std::lround(inverse);
  if (std::abs(inverse - static_cast<double>(units)) > 1e-9) {
    throw Error("grid step must divide 1");
  }
  std::vector<BeliefVector> grid;
  Vector current(Idx(num_states));
  EnumerateGrid(num_states, units, units, current, 0, grid);
  return grid;
}

TruthfulnessReport TruthfulnessCheck(const InfoStructure& structure,
                                     const ScoreFunction& score, double step) {
  if (!(step > 0.0) || step > 0.5) {
    throw Error("grid step must lie in (0, 0.5]");
  }
  const std::size_t num_states = structure.num_states();
  const std::vector<BeliefVector> grid = SimplexGrid(num_states, step);
  const Matrix q = PosteriorMatrix(structure);
  const Matrix point_masses =
      Matrix::Identity(Idx(num_states), Idx(num_states));
  const Matrix means = ComputeExpectedBeliefMatrix(structure).entries();

  TruthfulnessReport report;
  report.max_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    if (!structure.posterior_override() && !(structure.marginal(s) > 0.0)) {
      continue;
    }
    const Vector posterior = q.row(Idx(s)).transpose();
    const BeliefVector truthful_first(posterior);
    const BeliefVector truthful_second = ExpectedAlpha(structure, s);
    const double first =
        BestGain(score, truthful_first, posterior, point_masses, grid);
    const double second =
        BestGain(score, truthful_second, posterior, means, grid);
    report.first_order_gain.push_back(first);
    report.second_order_gain.push_back(second);
    report.max_gain = std::max({report.max_gain, first, second});
  }
  return report;
}

TruthfulnessReport TruthfulnessCheck(const InfoStructure& structure,
                                     const ScoringRule& rule, double step) {
  rule.Validate();
  return TruthfulnessCheck(
      structure,
      [&rule](const BeliefVector& report, const Vector& outcome) {
        return Score(rule, report, outcome);
      },
      step);
}

}  // namespace beliefagg
