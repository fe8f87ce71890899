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

// File formats.
//
// Structure files (YAML):
//   states: [w1, w2]
//   signals: [s1, s2]
//   prior: [0.5, 0.5]
//   likelihood:            # one row per signal, one column per state
//     - [0.7, 0.3]
//     - [0.3, 0.7]
//   posterior_override:    # optional, same shape as likelihood
//   normalize: false       # optional; accept vectors off by more than 1e-9
//
// Partition-model files (YAML):
//   payoff_states: [w1, w2]
//   ground_states:
//     - {name: a, payoff: w1, prior: 1/4}
//   partitions:            # one list of cells per player
//     - [[a, b], [c, d]]
//
// Population dumps are comma-separated with a header row; outcomes are
// written as one `key: value` line per field.

#ifndef BELIEFAGG_IO_HPP_
#define BELIEFAGG_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beliefagg/aggregate.hpp"
#include "beliefagg/hierarchy.hpp"
#include "beliefagg/model.hpp"
#include "beliefagg/population.hpp"

namespace beliefagg {

// Six significant digits.
std::string FormatNumber(double value);

// Errors are reported as "<source>:<line>: <message>".
InfoStructure ParseStructure(const std::string& text,
                             const std::string& source = "<string>");
InfoStructure LoadStructure(const std::string& path);

PartitionModel ParsePartitionModel(const std::string& text,
                                   const std::string& source = "<string>");
PartitionModel LoadPartitionModel(const std::string& path);

// Columns: agent, signal, mu_<state>..., alpha_<state>... (when any agent
// has a second-order report), vote (when any agent voted), payment (when
// given).
void WritePopulationCsv(std::ostream& out, const PopulationDraw& draw,
                        const InfoStructure& structure,
                        const std::vector<double>* payments = nullptr);

void WriteOutcome(std::ostream& out, const AggregationOutcome& outcome,
                  const StateSpace& states,
                  std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace beliefagg

#endif  // BELIEFAGG_IO_HPP_
