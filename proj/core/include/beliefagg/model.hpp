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

// Finite-state information structures and the Bayesian quantities derived
// from them: posteriors, state-conditional expected population beliefs, the
// second-order expectations agents report, and executable checks of the
// informativeness conditions the aggregation procedures rely on.
//
// Conventions used throughout the library:
//   * L states, K signals.
//   * likelihood(s, w) = P(signal s | state w); each column sums to one.
//   * posterior(s, w)  = P(state w | signal s); each row sums to one.
//   * ExpectedBeliefMatrix(i, j) = expected population-average belief in
//     state i when the true state is j; each column sums to one.

#ifndef BELIEFAGG_MODEL_HPP_
#define BELIEFAGG_MODEL_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beliefagg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kStructureTolerance = 1e-12;
inline constexpr double kDefaultRankTolerance = 1e-9;
inline constexpr double kConditionWarning = 1e8;

class StateSpace {
 public:
  // Requires at least two labels, all distinct.
  explicit StateSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t state) const;
  const std::vector<std::string>& labels() const { return labels_; }
  // Throws Error("unknown state ...") for labels outside the space.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

// A point on the probability simplex over the states.
class BeliefVector {
 public:
  BeliefVector() = default;
  // Components must be nonnegative (down to -tolerance) and sum to one
  // within `tolerance`.
  explicit BeliefVector(Vector components,
                        double tolerance = kSimplexTolerance);
  BeliefVector(std::initializer_list<double> components);

  static BeliefVector PointMass(std::size_t num_states, std::size_t state);
  static BeliefVector Uniform(std::size_t num_states);

  std::size_t size() const {
    return static_cast<std::size_t>(components_.size());
  }
  double operator[](std::size_t i) const {
    return components_[static_cast<Eigen::Index>(i)];
  }
  const Vector& components() const { return components_; }

 private:
  Vector components_;
};

// Max-norm distance between two vectors of equal length.
double MaxNormDistance(const Vector& a, const Vector& b);

class InfoStructure {
 public:
  // `likelihood` is K x L. `posterior_override`, when given, is a K x L table
  // of posteriors used verbatim in place of Bayes' rule (replay mode for
  // published tables that are rounded and not jointly Bayes-consistent).
  InfoStructure(StateSpace states, std::vector<std::string> signals,
                Vector prior, Matrix likelihood,
                std::optional<Matrix> posterior_override = std::nullopt);

  const StateSpace& states() const { return states_; }
  std::size_t num_states() const { return states_.size(); }
  std::size_t num_signals() const { return signals_.size(); }
  const std::vector<std::string>& signals() const { return signals_; }
  std::size_t signal_index(std::string_view name) const;

  const Vector& prior() const { return prior_; }
  const Matrix& likelihood() const { return likelihood_; }
  const std::optional<Matrix>& posterior_override() const {
    return posterior_override_;
  }

  // Probability of observing `signal` under the prior.
  double marginal(std::size_t signal) const;

 private:
  StateSpace states_;
  std::vector<std::string> signals_;
  Vector prior_;
  Matrix likelihood_;
  std::optional<Matrix> posterior_override_;
};

// Square matrix whose column j is the expected population-average belief
// when the true state is j. Columns of exact matrices are beliefs; matrices
// recovered from noisy reports only keep the unit column sums, so
// nonnegativity is not enforced here.
class ExpectedBeliefMatrix {
 public:
  ExpectedBeliefMatrix() = default;
  explicit ExpectedBeliefMatrix(Matrix entries,
                                double tolerance = kSimplexTolerance);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t belief_state, std::size_t true_state) const {
    return entries_(static_cast<Eigen::Index>(belief_state),
                    static_cast<Eigen::Index>(true_state));
  }
  Vector column(std::size_t true_state) const {
    return entries_.col(static_cast<Eigen::Index>(true_state));
  }
  const Matrix& entries() const { return entries_; }

  // Smallest max-norm distance between two distinct columns.
  double min_column_gap() const;

 private:
  Matrix entries_;
};

// Distribution of an agent's posterior conditional on one state: the
// distinct posterior vectors and their probabilities.
struct BeliefDistribution {
  std::vector<BeliefVector> support;
  std::vector<double> weights;
  std::size_t state = 0;
};

struct AssumptionReport {
  // mutually_continuous[w][v]: the signal distributions in states w and v
  // have the same support.
  std::vector<std::vector<bool>> mutually_continuous;
  bool informative = false;
  // Half L1 distance between belief distributions, per state pair.
  Matrix tv_distance;
  double delta = 0.0;
  double min_tv_distance = 0.0;
  double distinct_means = 0.0;
  std::size_t posterior_rank = 0;
  double rank_tolerance = kDefaultRankTolerance;

  bool minimal_information() const { return min_tv_distance >= delta; }
  bool full_rank() const {
    return posterior_rank == static_cast<std::size_t>(tv_distance.rows());
  }
  // All of: imperfect information, minimal information at `delta`, distinct
  // state means above `mean_gap`, full-rank posterior support.
  bool satisfied(double mean_gap = 1e-6) const;
};

// Bayes' rule. Throws Error("unreachable signal") when the signal has zero
// marginal probability.
BeliefVector BayesPosterior(const InfoStructure& structure, std::size_t signal);
BeliefVector BayesPosterior(const InfoStructure& structure,
                            std::string_view signal);

// K x L matrix of agent posteriors. Uses the override table when present,
// otherwise Bayes' rule row by row.
Matrix PosteriorMatrix(const InfoStructure& structure);

ExpectedBeliefMatrix ComputeExpectedBeliefMatrix(
    const InfoStructure& structure);

// What an agent holding `signal` expects the population-average belief to
// be, by iterated expectations over the columns of the expected matrix.
BeliefVector ExpectedAlpha(const InfoStructure& structure, std::size_t signal);

// One distribution per state, merging signals with identical posteriors.
std::vector<BeliefDistribution> InducedBeliefDistributions(
    const InfoStructure& structure);

double TotalVariation(const BeliefDistribution& a, const BeliefDistribution& b);

// Numerical rank from full-pivoting LU with pivot threshold `tolerance`.
std::size_t NumericalRank(const Matrix& m, double tolerance);

AssumptionReport CheckAssumptions(
    const InfoStructure& structure, double delta,
    double rank_tolerance = kDefaultRankTolerance);

inline constexpr std::size_t kDefaultLiftCap = 1'000'000;

// Structure on compound signals made of `draws` conditionally independent
// draws. Compound signal names join the component names with '|'.
InfoStructure ProductLift(const InfoStructure& structure, std::size_t draws,
                          std::size_t cap = kDefaultLiftCap);

}  // namespace beliefagg

#endif  // BELIEFAGG_MODEL_HPP_
