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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "beliefagg/error.hpp"

namespace beliefagg {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void CheckProbabilityVector(const Vector& v, double tolerance,
                            const std::string& what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < -tolerance || v[i] > 1.0 + tolerance) {
      std::ostringstream msg;
      msg << what << ": entry " << i << " = " << v[i] << " outside [0,1]";
      throw Error(msg.str());
    }
  }
  if (std::abs(v.sum() - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << what << ": sums to " << v.sum() << ", not 1";
    throw Error(msg.str());
  }
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw Error("state space needs at least 2 states");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw Error("duplicate state label");
}

const std::string& StateSpace::label(std::size_t state) const {
  if (state >= labels_.size()) throw Error("state index out of range");
  return labels_[state];
}

std::size_t StateSpace::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw Error("unknown state '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

BeliefVector::BeliefVector(Vector components, double tolerance)
    : components_(std::move(components)) {
  if (components_.size() == 0) throw Error("empty belief vector");
  CheckProbabilityVector(components_, tolerance, "belief vector");
}

BeliefVector::BeliefVector(std::initializer_list<double> components)
    : BeliefVector(Eigen::Map<const Vector>(components.begin(),
                                            Idx(components.size()))) {}

BeliefVector BeliefVector::PointMass(std::size_t num_states,
                                     std::size_t state) {
  Vector v = Vector::Zero(Idx(num_states));
  v[Idx(state)] = 1.0;
  return BeliefVector(std::move(v));
}

BeliefVector BeliefVector::Uniform(std::size_t num_states) {
  return BeliefVector(
      Vector::Constant(Idx(num_states), 1.0 / static_cast<double>(num_states)));
}

double MaxNormDistance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error("dimension mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

InfoStructure::InfoStructure(StateSpace states,
                             std::vector<std::string> signals, Vector prior,
                             Matrix likelihood,
                             std::optional<Matrix> posterior_override)
    : states_(std::move(states)),
      signals_(std::move(signals)),
      prior_(std::move(prior)),
      likelihood_(std::move(likelihood)),
      posterior_override_(std::move(posterior_override)) {
  const auto num_states = Idx(states_.size());
  const auto num_signals = Idx(signals_.size());
  if (num_signals == 0) throw Error("structure needs at least one signal");
  if (std::set<std::string>(signals_.begin(), signals_.end()).size() !=
      signals_.size()) {
    throw Error("duplicate signal name");
  }
  if (prior_.size() != num_states) throw Error("prior has wrong length");
  CheckProbabilityVector(prior_, kStructureTolerance, "prior");
  if (likelihood_.rows() != num_signals || likelihood_.cols() != num_states) {
    throw Error("likelihood must be K x L");
  }
  for (Eigen::Index w = 0; w < num_states; ++w) {
    CheckProbabilityVector(likelihood_.col(w), kStructureTolerance,
                           "likelihood column " + states_.label(w));
  }
  if (posterior_override_) {
    if (posterior_override_->rows() != num_signals ||
        posterior_override_->cols() != num_states) {
      throw Error("dimension mismatch: posterior override must be K x L");
    }
    for (Eigen::Index s = 0; s < num_signals; ++s) {
      CheckProbabilityVector(posterior_override_->row(s).transpose(),
                             kSimplexTolerance,
                             "posterior override row " + signals_[s]);
    }
  }
}

std::size_t InfoStructure::signal_index(std::string_view name) const {
  auto it = std::find(signals_.begin(), signals_.end(), name);
  if (it == signals_.end()) {
    throw Error("unknown signal '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - signals_.begin());
}

double InfoStructure::marginal(std::size_t signal) const {
  if (signal >= signals_.size()) throw Error("signal index out of range");
  return likelihood_.row(Idx(signal)).dot(prior_);
}

ExpectedBeliefMatrix::ExpectedBeliefMatrix(Matrix entries, double tolerance)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
    throw Error("expected belief matrix must be square with L >= 2");
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    if (!entries_.col(j).allFinite() ||
        std::abs(entries_.col(j).sum() - 1.0) > tolerance) {
      throw Error("expected belief matrix column does not sum to 1");
    }
  }
}

double ExpectedBeliefMatrix::min_column_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < entries_.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < entries_.cols(); ++j) {
      gap = std::min(gap, MaxNormDistance(entries_.col(i), entries_.col(j)));
    }
  }
  return gap;
}

BeliefVector BayesPosterior(const InfoStructure& structure,
                            std::size_t signal) {
  const double marginal = structure.marginal(signal);
  if (!(marginal > 0.0)) {
    throw Error("unreachable signal '" + structure.signals()[signal] + "'");
  }
  Vector joint = structure.likelihood()
                     .row(Idx(signal))
                     .transpose()
                     .cwiseProduct(structure.prior());
  return BeliefVector(joint / marginal);
}

BeliefVector BayesPosterior(const InfoStructure& structure,
                            std::string_view signal) {
  return BayesPosterior(structure, structure.signal_index(signal));
}

Matrix PosteriorMatrix(const InfoStructure& structure) {
  if (structure.posterior_override()) return *structure.posterior_override();
  Matrix q(Idx(structure.num_signals()), Idx(structure.num_states()));
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    q.row(Idx(s)) = BayesPosterior(structure, s).components().transpose();
  }
  return q;
}

ExpectedBeliefMatrix ComputeExpectedBeliefMatrix(
    const InfoStructure& structure) {
  // entry(i, j) = sum_s likelihood(s, j) * posterior(s, i)
  const Matrix q = PosteriorMatrix(structure);
  return ExpectedBeliefMatrix(q.transpose() * structure.likelihood());
}

BeliefVector ExpectedAlpha(const InfoStructure& structure, std::size_t signal) {
  if (signal >= structure.num_signals()) {
    throw Error("signal index out of range");
  }
  if (!structure.posterior_override() && !(structure.marginal(signal) > 0.0)) {
    throw Error("unreachable signal '" + structure.signals()[signal] + "'");
  }
  const Matrix q = PosteriorMatrix(structure);
  const ExpectedBeliefMatrix means = ComputeExpectedBeliefMatrix(structure);
  return BeliefVector(means.entries() * q.row(Idx(signal)).transpose());
}

std::vector<BeliefDistribution> InducedBeliefDistributions(
    const InfoStructure& structure) {
  const Matrix q = PosteriorMatrix(structure);
  const auto& m = structure.likelihood();
  // Group signals whose posteriors coincide.
  std::vector<std::size_t> representative;
  std::vector<std::size_t> group_of(structure.num_signals());
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    std::size_t g = 0;
    for (; g < representative.size(); ++g) {
      if (MaxNormDistance(q.row(Idx(s)).transpose(),
                          q.row(Idx(representative[g])).transpose()) <=
          kStructureTolerance) {
        break;
      }
    }
    if (g == representative.size()) representative.push_back(s);
    group_of[s] = g;
  }
  std::vector<BeliefDistribution> out;
  for (std::size_t w = 0; w < structure.num_states(); ++w) {
    BeliefDistribution dist;
    dist.state = w;
    dist.weights.assign(representative.size(), 0.0);
    for (std::size_t s = 0; s < structure.num_signals(); ++s) {
      dist.weights[group_of[s]] += m(Idx(s), Idx(w));
    }
    for (std::size_t rep : representative) {
      dist.support.emplace_back(q.row(Idx(rep)).transpose());
    }
    out.push_back(std::move(dist));
  }
  return out;
}

double TotalVariation(const BeliefDistribution& a,
                      const BeliefDistribution& b) {
  // Merge supports; points closer than the structure tolerance coincide.
  std::vector<Vector> points;
  std::vector<double> wa, wb;
  auto add = [&](const BeliefVector& p, double weight, bool first) {
    std::size_t k = 0;
    for (; k < points.size(); ++k) {
      if (points[k].size() == p.components().size() &&
          MaxNormDistance(points[k], p.components()) <= kStructureTolerance) {
        break;
      }
    }
    if (k == points.size()) {
      points.push_back(p.components());
      wa.push_back(0.0);
      wb.push_back(0.0);
    }
    (first ? wa : wb)[k] += weight;
  };
  for (std::size_t i = 0; i < a.support.size(); ++i) {
    add(a.support[i], a.weights[i], true);
  }
  for (std::size_t i = 0; i < b.support.size(); ++i) {
    add(b.support[i], b.weights[i], false);
  }
  double l1 = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) l1 += std::abs(wa[k] - wb[k]);
  return std::min(1.0, 0.5 * l1);
}

std::size_t NumericalRank(const Matrix& m, double tolerance) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(tolerance);
  return static_cast<std::size_t>(lu.rank());
}

bool AssumptionReport::satisfied(double mean_gap) const {
  return informative && minimal_information() && distinct_means > mean_gap &&
         full_rank();
}

AssumptionReport CheckAssumptions(const InfoStructure& structure, double delta,
                                  double rank_tolerance) {
  const std::size_t num_states = structure.num_states();
  const auto& m = structure.likelihood();
  AssumptionReport report;
  report.delta = delta;
  report.rank_tolerance = rank_tolerance;

  report.mutually_continuous.assign(num_states,
                                    std::vector<bool>(num_states, true));
  report.informative = true;
  for (std::size_t w = 0; w < num_states; ++w) {
    for (std::size_t v = 0; v < num_states; ++v) {
      for (std::size_t s = 0; s < structure.num_signals(); ++s) {
        const bool in_w = m(Idx(s), Idx(w)) > 0.0;
        const bool in_v = m(Idx(s), Idx(v)) > 0.0;
        if (in_w != in_v) {
          report.mutually_continuous[w][v] = false;
          report.informative = false;
        }
      }
    }
  }

  const auto dists = InducedBeliefDistributions(structure);
  report.tv_distance = Matrix::Zero(Idx(num_states), Idx(num_states));
  report.min_tv_distance = 1.0;
  for (std::size_t w = 0; w < num_states; ++w) {
    for (std::size_t v = w + 1; v < num_states; ++v) {
      const double tv = TotalVariation(dists[w], dists[v]);
      report.tv_distance(Idx(w), Idx(v)) = tv;
      report.tv_distance(Idx(v), Idx(w)) = tv;
      report.min_tv_distance = std::min(report.min_tv_distance, tv);
    }
  }

  report.distinct_means =
      ComputeExpectedBeliefMatrix(structure).min_column_gap();
  report.posterior_rank =
      NumericalRank(PosteriorMatrix(structure), rank_tolerance);
  return report;
}

InfoStructure ProductLift(const InfoStructure& structure, std::size_t draws,
                          std::size_t cap) {
  if (draws < 1) throw Error("product lift needs at least one draw");
  if (structure.posterior_override()) {
    throw Error("product lift requires a Bayes-consistent structure");
  }
  const std::size_t base = structure.num_signals();
  std::size_t total = 1;
  for (std::size_t d = 0; d < draws; ++d) {
    if (total > cap / base) throw Error("compound space too large");
    total *= base;
  }
  if (total > cap) throw Error("compound space too large");

  const auto num_states = Idx(structure.num_states());
  Matrix lifted = Matrix::Ones(Idx(total), num_states);
  std::vector<std::string> names(total);
  for (std::size_t c = 0; c < total; ++c) {
    // Digits of c in base K, most significant first.
    std::vector<std::size_t> digits(draws);
    std::size_t rest = c;
    for (std::size_t d = draws; d-- > 0;) {
      digits[d] = rest % base;
      rest /= base;
    }
    std::string name;
    for (std::size_t d = 0; d < draws; ++d) {
      if (d > 0) name += '|';
      name += structure.signals()[digits[d]];
      lifted.row(Idx(c)) = lifted.row(Idx(c)).cwiseProduct(
          structure.likelihood().row(Idx(digits[d])));
    }
    names[c] = std::move(name);
  }
  // Rounding drift over up to `cap` products can exceed the structure
  // tolerance on the column sums.
  for (Eigen::Index w = 0; w < num_states; ++w) {
    lifted.col(w) /= lifted.col(w).sum();
  }
  return InfoStructure(structure.states(), std::move(names), structure.prior(),
                       std::move(lifted));
}

}  // namespace beliefagg
