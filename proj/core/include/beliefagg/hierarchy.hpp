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

// Belief hierarchies in finite partition models with a common prior, exact
// in rational arithmetic: k-th order types, cross-model hierarchy
// comparison, full-information posteriors, recovery of the pooled posterior
// from reported full hierarchies, and the pair of models whose hierarchies
// agree to a given order while their pooled posteriors disagree.

#ifndef BELIEFAGG_HIERARCHY_HPP_
#define BELIEFAGG_HIERARCHY_HPP_

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "beliefagg/model.hpp"

namespace beliefagg {

using Rational = boost::multiprecision::cpp_rational;

// Accepts integers, fractions ("3/8") and decimals ("0.125"), exactly.
Rational ParseRational(std::string_view text);
std::string FormatRational(const Rational& value);
double ToDouble(const Rational& value);

struct GroundState {
  std::string name;
  std::size_t payoff = 0;  // index into the payoff states
};

// A cell is a list of ground-state indices; a partition is a list of cells.
using Cell = std::vector<std::size_t>;
using Partition = std::vector<Cell>;
// One cell index per player.
using CellProfile = std::vector<std::size_t>;

class PartitionModel {
 public:
  PartitionModel(std::vector<std::string> payoff_states,
                 std::vector<GroundState> ground_states,
                 std::vector<Rational> prior,
                 std::vector<Partition> partitions);

  std::size_t num_players() const { return partitions_.size(); }
  std::size_t num_ground_states() const { return ground_states_.size(); }
  std::size_t num_payoff_states() const { return payoff_states_.size(); }
  const std::vector<std::string>& payoff_states() const {
    return payoff_states_;
  }
  const std::vector<GroundState>& ground_states() const {
    return ground_states_;
  }
  const std::vector<Rational>& prior() const { return prior_; }
  const Partition& partition(std::size_t player) const;
  std::size_t cell_of(std::size_t player, std::size_t ground_state) const;
  Rational cell_mass(std::size_t player, std::size_t cell) const;
  std::size_t ground_index(std::string_view name) const;

 private:
  std::vector<std::string> payoff_states_;
  std::vector<GroundState> ground_states_;
  std::vector<Rational> prior_;
  std::vector<Partition> partitions_;
  std::vector<std::vector<std::size_t>> cell_of_;  // [player][ground]
};

// The cells containing `ground_state`, one per player.
CellProfile ProfileAt(const PartitionModel& model, std::size_t ground_state);

inline constexpr std::size_t kNoType = std::numeric_limits<std::size_t>::max();

// One point in the support of a belief: a payoff state and the types of the
// other players, in player order.
struct BeliefOutcome {
  std::size_t payoff = 0;
  std::vector<std::size_t> others;

  friend auto operator<=>(const BeliefOutcome&, const BeliefOutcome&) = default;
};

// Sorted by outcome, probabilities positive and summing to one.
using BeliefRecord = std::vector<std::pair<BeliefOutcome, Rational>>;

// Hash-consing table of types. Two types get the same id exactly when they
// have the same order, player and belief record, so ids are comparable
// across every model analysed with the same catalog.
class TypeCatalog {
 public:
  struct Entry {
    std::size_t order;
    std::size_t player;
    BeliefRecord record;
  };

  std::size_t Intern(std::size_t order, std::size_t player,
                     BeliefRecord record);
  const Entry& entry(std::size_t id) const { return entries_.at(id); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::tuple<std::size_t, std::size_t, BeliefRecord>, std::size_t>
      index_;
  std::vector<Entry> entries_;
};

// Order-k type ids for every player and cell. Order-1 records are beliefs
// over payoff states; order-(k+1) records are beliefs over payoff states and
// the other players' order-k types. Cells of zero prior mass get kNoType.
std::vector<std::vector<std::size_t>> TypeIds(const PartitionModel& model,
                                              std::size_t order,
                                              TypeCatalog& catalog);

struct OrderKTypes {
  std::size_t order = 0;
  // [player][cell]: class label, dense from 0 in order of first appearance;
  // kNoType for cells of zero prior mass.
  std::vector<std::vector<std::size_t>> cell_class;
  // [player][ground state]: class label of the cell containing the state.
  std::vector<std::vector<std::size_t>> ground_class;
  // [player][class]: belief record, with the other players' types given as
  // their order-(k-1) class labels (empty `others` at order 1).
  std::vector<std::vector<BeliefRecord>> class_records;
  std::vector<std::string> warnings;

  std::size_t num_classes(std::size_t player) const {
    return class_records.at(player).size();
  }
};

OrderKTypes KthOrderTypes(const PartitionModel& model, std::size_t order);

// True iff every player's order-j types at the two profiles coincide for all
// j <= `order`.
bool HierarchiesEqualUpTo(const PartitionModel& model_a,
                          const CellProfile& profile_a,
                          const PartitionModel& model_b,
                          const CellProfile& profile_b, std::size_t order);

// Largest order up to which the two profiles' hierarchies agree, or nullopt
// when they agree at every order.
std::optional<std::size_t> AgreementDepth(const PartitionModel& model_a,
                                          const CellProfile& profile_a,
                                          const PartitionModel& model_b,
                                          const CellProfile& profile_b);

// Prior conditioned on the intersection of the profile's cells, as a
// distribution over payoff states. Throws Error("incompatible profile") when
// the intersection has zero prior mass.
std::vector<Rational> ExactFullInfoPosterior(const PartitionModel& model,
                                             const CellProfile& profile);
BeliefVector FullInfoPosterior(const PartitionModel& model,
                               const CellProfile& profile);

// Infinite hierarchies of a single model: types at the order where the
// partition into classes stops refining, with each type's belief over payoff
// states and the other players' full types.
class FullHierarchies {
 public:
  explicit FullHierarchies(const PartitionModel& model);

  std::size_t stable_order() const { return stable_order_; }
  // Full type of the player at the cell; kNoType for zero-mass cells.
  std::size_t type_of(std::size_t player, std::size_t cell) const;
  // Belief of a full type; throws for ids that are not full types of the
  // player in this model.
  const BeliefRecord& belief(std::size_t player, std::size_t type) const;
  // Positive-mass cells of the player carrying the type.
  std::vector<std::size_t> cells_of(std::size_t player, std::size_t type) const;

 private:
  std::size_t stable_order_ = 0;
  std::vector<std::vector<std::size_t>> types_;               // [player][cell]
  std::vector<std::map<std::size_t, BeliefRecord>> beliefs_;  // [player]
};

// A payoff state together with a full type profile.
struct ClosureNode {
  std::size_t payoff = 0;
  std::vector<std::size_t> types;

  friend auto operator<=>(const ClosureNode&, const ClosureNode&) = default;
};

struct RecoveryResult {
  std::set<ClosureNode> closure;
  std::vector<Rational> exact_posterior;
  BeliefVector posterior;
  CellProfile identified_profile;
};

// Recovers the pooled posterior from a reported profile of full types, using
// only the reported players' beliefs and the beliefs of types they reach.
// Throws Error("unidentifiable hierarchy") when a reported type is carried by
// more than one positive-mass cell, and Error("zero-probability profile")
// when the reported types cannot occur together.
RecoveryResult RecoverFromHierarchy(const PartitionModel& model,
                                    const FullHierarchies& hierarchies,
                                    const std::vector<std::size_t>& reported);
// Convenience: reports the full types held at `profile`.
RecoveryResult RecoverFromHierarchy(const PartitionModel& model,
                                    const CellProfile& profile);

struct LipmanPair {
  PartitionModel base;     // uniform prior over 2^(n+1) states
  PartitionModel shifted;  // primed-state extension
  CellProfile base_profile;
  CellProfile shifted_profile;
  std::size_t requested_order = 0;
  // Order the construction was run at: m itself for m = 2 and odd m, m + 1
  // for even m >= 4.
  std::size_t construction_order = 0;
  Rational x;  // prior of the designated shifted states
};

// Throws Error("lipman order must be at least 2") for m < 2.
LipmanPair BuildLipman(std::size_t m);

// The shifted model with players and payoff states exchanged, and the
// profile corresponding to the designated one.
std::pair<PartitionModel, CellProfile> BuildLipmanMirror(
    const LipmanPair& pair);

}  // namespace beliefagg

#endif  // BELIEFAGG_HIERARCHY_HPP_
