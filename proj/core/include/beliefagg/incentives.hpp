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

// Proper scoring rules, the payment scheme that pays every agent for the
// first-order report and designated reporters for the second-order report,
// and a grid search for profitable deviations.

#ifndef BELIEFAGG_INCENTIVES_HPP_
#define BELIEFAGG_INCENTIVES_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "beliefagg/aggregate.hpp"
#include "beliefagg/model.hpp"
#include "beliefagg/population.hpp"

namespace beliefagg {

enum class ScoringKind { kBrier, kLogarithmic };

struct ScoringRule {
  ScoringKind kind = ScoringKind::kBrier;
  double log_floor = 1e-6;  // logarithmic rule only; in (0, 0.01]

  static ScoringRule Brier() { return {}; }
  static ScoringRule Logarithmic(double floor = 1e-6) {
    return {ScoringKind::kLogarithmic, floor};
  }
  void Validate() const;
};

// Score of `report` when `state` occurs.
double Score(const ScoringRule& rule, const BeliefVector& report,
             std::size_t state);
// Score against a realized probability vector. For a point mass this agrees
// with the state overload.
double Score(const ScoringRule& rule, const BeliefVector& report,
             const Vector& outcome);

struct PaymentSchedule {
  ScoringRule rule;
  double first_order_scale = 1.0;
  double second_order_scale = 1.0;
  // Agents paid for their second-order report; the outcome's reporters when
  // unset.
  std::optional<std::vector<std::size_t>> designated;

  void Validate() const;
};

// Per-agent payments. First-order reports are scored against the recovered
// state, designated second-order reports against the realized quantity the
// outcome matched.
std::vector<double> Settle(const PopulationDraw& draw,
                           const AggregationOutcome& outcome,
                           const PaymentSchedule& schedule);

// Every point of the simplex over `num_states` states whose components are
// multiples of `step`. 1/step must be an integer.
std::vector<BeliefVector> SimplexGrid(std::size_t num_states, double step);

// Scores a report against an outcome vector (a point mass for states).
using ScoreFunction =
    std::function<double(const BeliefVector& report, const Vector& outcome)>;

struct TruthfulnessReport {
  // Per signal: best expected gain over truthful reporting from changing
  // only the first-order or only the second-order report. Payments are
  // additive, so a joint deviation gains the sum.
  std::vector<double> first_order_gain;
  std::vector<double> second_order_gain;
  double max_gain = 0.0;
};

TruthfulnessReport TruthfulnessCheck(const InfoStructure& structure,
                                     const ScoringRule& rule, double step);
TruthfulnessReport TruthfulnessCheck(const InfoStructure& structure,
                                     const ScoreFunction& score, double step);

}  // namespace beliefagg

#endif  // BELIEFAGG_INCENTIVES_HPP_
