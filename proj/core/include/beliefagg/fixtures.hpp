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

// Reference structures: the three-state, three-signal example whose
// published posterior and likelihood tables are rounded (and therefore
// replayed rather than re-derived by Bayes' rule), and the binary symmetric
// family.

#ifndef BELIEFAGG_FIXTURES_HPP_
#define BELIEFAGG_FIXTURES_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "beliefagg/model.hpp"

namespace beliefagg::fixtures {

// Rows are signals s1..s3, columns states w1..w3.
Matrix ThreeStatePosterior();
Matrix ThreeStateLikelihood();
// Replay-mode structure built from the two tables above, uniform prior.
InfoStructure ThreeStateExample();

// Published expected-belief matrix (row = belief state, column = true
// state) and second-order table (column s = the report of an s-agent), both
// rounded to three decimals.
Matrix ThreeStatePublishedMeans();
Matrix ThreeStatePublishedAlpha();

struct PublishedSpCell {
  std::vector<std::size_t> sp_states;
  // Only marked when more than one state is surprisingly popular.
  std::optional<std::size_t> most_surprising;
};
// [reporter signal][true state].
std::vector<std::vector<PublishedSpCell>> ThreeStatePublishedSpGrid();

// Two states, two signals, uniform prior, P(s_w | w) = accuracy.
InfoStructure BinarySymmetric(double accuracy);

}  // namespace beliefagg::fixtures

#endif  // BELIEFAGG_FIXTURES_HPP_
