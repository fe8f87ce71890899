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

// Finite agent populations drawn from an InfoStructure: correlated signal
// draws, truthful first- and second-order reports, votes, and misspecified
// second-order reports.

#ifndef BELIEFAGG_POPULATION_HPP_
#define BELIEFAGG_POPULATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "beliefagg/model.hpp"

namespace beliefagg {

enum class CorrelationKind { kIid, kBlock };

// Block correlation: consecutive agents in blocks of `block_size` share one
// signal draw. Agents in different blocks are conditionally independent.
struct CorrelationSpec {
  CorrelationKind kind = CorrelationKind::kIid;
  std::size_t block_size = 1;

  static CorrelationSpec Iid() { return {}; }
  static CorrelationSpec Block(std::size_t size) {
    return {CorrelationKind::kBlock, size};
  }
  void Validate() const;
};

// Additive error on each agent's view of the state-conditional means.
struct MisspecSpec {
  double half_width = 0.0;
  bool guard = true;
};

struct AgentReport {
  BeliefVector first_order;
  // Expected population-average report: belief means for the belief-based
  // procedures, vote shares for the action-based one.
  std::optional<BeliefVector> second_order;
  std::optional<std::size_t> vote;
};

struct PopulationDraw {
  std::size_t true_state = 0;
  std::vector<std::size_t> signals;
  std::vector<AgentReport> reports;
  std::uint64_t seed = 0;
};

// Counter-based random streams. The draws for index i depend only on
// (seed, purpose, i), never on how many other indices are requested, so
// populations of different sizes share their common prefix and chunks can be
// generated independently.
class CounterStream {
 public:
  static constexpr std::size_t kChunk = 4096;

  CounterStream(std::uint64_t seed, std::uint64_t purpose,
                std::size_t draws_per_index = 1);

  // Uniforms in [0, 1) for `index`; `out.size()` must equal draws_per_index.
  void Draw(std::size_t index, std::span<double> out);
  double Uniform(std::size_t index);

 private:
  void Seek(std::size_t chunk, std::size_t offset);

  std::uint64_t seed_;
  std::uint64_t purpose_;
  std::size_t draws_per_index_;
  std::mt19937_64 engine_;
  std::size_t chunk_;
  std::size_t position_ = 0;  // next offset within the current chunk
};

// Stream purposes, so different uses of one master seed never overlap.
enum class StreamPurpose : std::uint64_t {
  kTrueState = 1,
  kSignals = 2,
  kMisspecification = 3,
  kTrialSeed = 4,
};

// Index of the first cumulative probability exceeding `u`.
std::size_t SampleIndex(const Vector& probabilities, double u);

PopulationDraw SamplePopulation(const InfoStructure& structure,
                                const CorrelationSpec& correlation,
                                std::size_t num_agents,
                                std::optional<std::size_t> true_state,
                                std::uint64_t seed);

BeliefVector TruthfulAlpha(const BeliefVector& first_order,
                           const ExpectedBeliefMatrix& means);

// Throws Error("misspecification overlaps state means") when the guard is on
// and the perturbation boxes around two columns could intersect.
void CheckMisspecGuard(const ExpectedBeliefMatrix& means,
                       const MisspecSpec& spec);

// Number of uniforms consumed per agent by MisspecifiedAlpha.
std::size_t MisspecDrawsPerAgent(std::size_t num_states);

// Perturbs each column w of `means` by an independent zero-sum error whose
// first L-1 components are uniform on [-h, h], then mixes the perturbed
// columns with weights `first_order`.
BeliefVector MisspecifiedAlpha(const BeliefVector& first_order,
                               const ExpectedBeliefMatrix& means,
                               const MisspecSpec& spec, std::uint64_t seed);
BeliefVector MisspecifiedAlpha(const BeliefVector& first_order,
                               const ExpectedBeliefMatrix& means,
                               const MisspecSpec& spec,
                               std::span<const double> uniforms);

// Most likely state; near-ties (within 1e-12) go to the lowest index.
std::size_t Vote(const BeliefVector& first_order);

// An agent's expectation of the population vote shares.
BeliefVector ExpectedVoteShares(const InfoStructure& structure,
                                std::size_t signal);

// Vote-share vector in each state: column w gives, per state v, the
// probability that a signal drawn in w leads to a vote for v.
Matrix VoteShareMatrix(const InfoStructure& structure);

void AttachVotes(PopulationDraw& draw);
void AttachTruthfulAlphas(PopulationDraw& draw, const InfoStructure& structure,
                          std::span<const std::size_t> agents);
void AttachExpectedVoteShares(PopulationDraw& draw,
                              const InfoStructure& structure,
                              std::span<const std::size_t> agents);
// Every agent gets a misspecified second-order report from its own stream.
void AttachMisspecifiedAlphas(PopulationDraw& draw,
                              const ExpectedBeliefMatrix& means,
                              const MisspecSpec& spec, std::uint64_t seed);

}  // namespace beliefagg

#endif  // BELIEFAGG_POPULATION_HPP_
