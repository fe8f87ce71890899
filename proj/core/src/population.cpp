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

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "beliefagg/error.hpp"

namespace beliefagg {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

constexpr std::size_t kNoChunk = std::numeric_limits<std::size_t>::max();

double ToUnit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

BeliefVector OntoSimplex(Vector v) {
  if (v.minCoeff() < 0.0) {
    v = v.cwiseMax(0.0);
    v /= v.sum();
  } else if (std::abs(v.sum() - 1.0) > kStructureTolerance) {
    v /= v.sum();
  }
  return BeliefVector(std::move(v));
}

}  // namespace

void CorrelationSpec::Validate() const {
  if (block_size < 1) throw Error("invalid block_size: must be >= 1");
  if (kind == CorrelationKind::kIid && block_size != 1) {
    throw Error("invalid block_size: iid correlation uses block_size 1");
  }
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t purpose,
                             std::size_t draws_per_index)
    : seed_(seed),
      purpose_(purpose),
      draws_per_index_(draws_per_index),
      chunk_(kNoChunk) {
  if (draws_per_index_ == 0) throw Error("draws_per_index must be positive");
}

void CounterStream::Seek(std::size_t chunk, std::size_t offset) {
  if (chunk != chunk_ || offset < position_) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
        static_cast<std::uint32_t>(purpose_), static_cast<std::uint32_t>(chunk),
        static_cast<std::uint32_t>(static_cast<std::uint64_t>(chunk) >> 32)};
    engine_.seed(seq);
    chunk_ = chunk;
    position_ = 0;
  }
  if (offset > position_) {
    engine_.discard(static_cast<unsigned long long>((offset - position_) *
                                                    draws_per_index_));
    position_ = offset;
  }
}

void CounterStream::Draw(std::size_t index, std::span<double> out) {
  if (out.size() != draws_per_index_) throw Error("wrong draw buffer size");
  Seek(index / kChunk, index % kChunk);
  for (double& u : out) u = ToUnit(engine_());
  ++position_;
}

double CounterStream::Uniform(std::size_t index) {
  double u = 0.0;
  Draw(index, std::span<double>(&u, 1));
  return u;
}

std::size_t SampleIndex(const Vector& probabilities, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    last_positive = static_cast<std::size_t>(i);
    cumulative += probabilities[i];
    if (u < cumulative) return last_positive;
  }
  return last_positive;
}

PopulationDraw SamplePopulation(const InfoStructure& structure,
                                const CorrelationSpec& correlation,
                                std::size_t num_agents,
                                std::optional<std::size_t> true_state,
                                std::uint64_t seed) {
  correlation.Validate();
  if (num_agents < 1) throw Error("population needs at least one agent");

  PopulationDraw draw;
  draw.seed = seed;
  if (true_state) {
    if (*true_state >= structure.num_states()) {
      throw Error("true state out of range");
    }
    draw.true_state = *true_state;
  } else {
    CounterStream state_stream(
        seed, static_cast<std::uint64_t>(StreamPurpose::kTrueState));
    draw.true_state = SampleIndex(structure.prior(), state_stream.Uniform(0));
  }

  const Matrix q = PosteriorMatrix(structure);
  std::vector<BeliefVector> posteriors;
  posteriors.reserve(structure.num_signals());
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    posteriors.emplace_back(q.row(Idx(s)).transpose());
  }
  const Vector column = structure.likelihood().col(Idx(draw.true_state));

  CounterStream signal_stream(
      seed, static_cast<std::uint64_t>(StreamPurpose::kSignals));
  const std::size_t block =
      correlation.kind == CorrelationKind::kBlock ? correlation.block_size : 1;
  draw.signals.resize(num_agents);
  draw.reports.resize(num_agents);
  std::size_t current_block = kNoChunk;
  std::size_t current_signal = 0;
  for (std::size_t i = 0; i < num_agents; ++i) {
    const std::size_t b = i / block;
    if (b != current_block) {
      current_block = b;
      current_signal = SampleIndex(column, signal_stream.Uniform(b));
    }
    draw.signals[i] = current_signal;
    draw.reports[i].first_order = posteriors[current_signal];
  }
  return draw;
}

BeliefVector TruthfulAlpha(const BeliefVector& first_order,
                           const ExpectedBeliefMatrix& means) {
  if (first_order.size() != means.size()) throw Error("dimension mismatch");
  return OntoSimplex(means.entries() * first_order.components());
}

void CheckMisspecGuard(const ExpectedBeliefMatrix& means,
                       const MisspecSpec& spec) {
  if (spec.half_width < 0.0) throw Error("half_width must be nonnegative");
  if (!spec.guard) return;
  const double reach = spec.half_width * static_cast<double>(means.size() - 1);
  if (reach > means.min_column_gap() / 2.0 - 1e-9) {
    throw Error("misspecification overlaps state means");
  }
}

std::size_t MisspecDrawsPerAgent(std::size_t num_states) {
  return num_states * (num_states - 1);
}

BeliefVector MisspecifiedAlpha(const BeliefVector& first_order,
                               const ExpectedBeliefMatrix& means,
                               const MisspecSpec& spec,
                               std::span<const double> uniforms) {
  const std::size_t num_states = means.size();
  if (first_order.size() != num_states) throw Error("dimension mismatch");
  if (uniforms.size() != MisspecDrawsPerAgent(num_states)) {
    throw Error("wrong number of uniforms for misspecification");
  }
  Matrix perturbed = means.entries();
  std::size_t k = 0;
  for (std::size_t w = 0; w < num_states; ++w) {
    double total = 0.0;
    for (std::size_t v = 0; v + 1 < num_states; ++v) {
      const double zeta = spec.half_width * (2.0 * uniforms[k++] - 1.0);
      perturbed(Idx(v), Idx(w)) += zeta;
      total += zeta;
    }
    perturbed(Idx(num_states - 1), Idx(w)) -= total;
  }
  return OntoSimplex(perturbed * first_order.components());
}

BeliefVector MisspecifiedAlpha(const BeliefVector& first_order,
                               const ExpectedBeliefMatrix& means,
                               const MisspecSpec& spec, std::uint64_t seed) {
  CheckMisspecGuard(means, spec);
  const std::size_t draws = MisspecDrawsPerAgent(means.size());
  CounterStream stream(
      seed, static_cast<std::uint64_t>(StreamPurpose::kMisspecification),
      draws);
  std::vector<double> uniforms(draws);
  stream.Draw(0, uniforms);
  return MisspecifiedAlpha(first_order, means, spec, uniforms);
}

std::size_t Vote(const BeliefVector& first_order) {
  const Vector& p = first_order.components();
  const double best = p.maxCoeff();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] >= best - 1e-12) return static_cast<std::size_t>(i);
  }
  return 0;
}

Matrix VoteShareMatrix(const InfoStructure& structure) {
  const Matrix q = PosteriorMatrix(structure);
  const auto num_states = Idx(structure.num_states());
  Matrix shares = Matrix::Zero(num_states, num_states);
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    const std::size_t voted = Vote(BeliefVector(q.row(Idx(s)).transpose()));
    shares.row(Idx(voted)) += structure.likelihood().row(Idx(s));
  }
  return shares;
}

BeliefVector ExpectedVoteShares(const InfoStructure& structure,
                                std::size_t signal) {
  if (signal >= structure.num_signals()) {
    throw Error("signal index out of range");
  }
  if (!structure.posterior_override() && !(structure.marginal(signal) > 0.0)) {
    throw Error("unreachable signal '" + structure.signals()[signal] + "'");
  }
  const Matrix q = PosteriorMatrix(structure);
  return OntoSimplex(VoteShareMatrix(structure) *
                     q.row(Idx(signal)).transpose());
}

void AttachVotes(PopulationDraw& draw) {
  for (auto& report : draw.reports) report.vote = Vote(report.first_order);
}

void AttachTruthfulAlphas(PopulationDraw& draw, const InfoStructure& structure,
                          std::span<const std::size_t> agents) {
  for (std::size_t i : agents) {
    if (i >= draw.reports.size()) throw Error("agent index out of range");
    draw.reports[i].second_order = ExpectedAlpha(structure, draw.signals[i]);
  }
}

void AttachExpectedVoteShares(PopulationDraw& draw,
                              const InfoStructure& structure,
                              std::span<const std::size_t> agents) {
  for (std::size_t i : agents) {
    if (i >= draw.reports.size()) throw Error("agent index out of range");
    draw.reports[i].second_order =
        ExpectedVoteShares(structure, draw.signals[i]);
  }
}

void AttachMisspecifiedAlphas(PopulationDraw& draw,
                              const ExpectedBeliefMatrix& means,
                              const MisspecSpec& spec, std::uint64_t seed) {
  CheckMisspecGuard(means, spec);
  const std::size_t draws = MisspecDrawsPerAgent(means.size());
  CounterStream stream(
      seed, static_cast<std::uint64_t>(StreamPurpose::kMisspecification),
      draws);
  std::vector<double> uniforms(draws);
  for (std::size_t i = 0; i < draw.reports.size(); ++i) {
    stream.Draw(i, uniforms);
    draw.reports[i].second_order =
        MisspecifiedAlpha(draw.reports[i].first_order, means, spec, uniforms);
  }
}

}  // namespace beliefagg
