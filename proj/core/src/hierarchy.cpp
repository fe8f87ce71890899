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

#include "beliefagg/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

#include "beliefagg/error.hpp"

namespace beliefagg {
namespace {

using TypeTable = std::vector<std::vector<std::size_t>>;  // [player][cell]

Rational Pow10(std::size_t digits) {
  Rational r = 1;
  for (std::size_t i = 0; i < digits; ++i) r *= 10;
  return r;
}

Rational ParseInteger(std::string_view text) {
  if (text.empty()) throw Error("invalid rational ''");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error("invalid rational '" + std::string(text) + "'");
    }
  }
  return Rational(boost::multiprecision::cpp_int(std::string(text)));
}

// Next-order type ids given the current ones (order 1 when `previous` is
// empty).
TypeTable NextTypeIds(const PartitionModel& model, std::size_t order,
                      const TypeTable& previous, TypeCatalog& catalog) {
  TypeTable ids(model.num_players());
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    const Partition& cells = model.partition(i);
    ids[i].resize(cells.size(), kNoType);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Rational mass = model.cell_mass(i, c);
      if (mass == 0) continue;
      std::map<BeliefOutcome, Rational> belief;
      for (std::size_t g : cells[c]) {
        if (model.prior()[g] == 0) continue;
        BeliefOutcome outcome{model.ground_states()[g].payoff, {}};
        if (!previous.empty()) {
          for (std::size_t j = 0; j < model.num_players(); ++j) {
            if (j != i)
              outcome.others.push_back(previous[j][model.cell_of(j, g)]);
          }
        }
        belief[outcome] += model.prior()[g] / mass;
      }
      ids[i][c] =
          catalog.Intern(order, i, BeliefRecord(belief.begin(), belief.end()));
    }
  }
  return ids;
}

std::size_t CountDistinct(const TypeTable& ids) {
  std::set<std::size_t> seen;
  for (const auto& row : ids) {
    for (std::size_t id : row) {
      if (id != kNoType) seen.insert(id);
    }
  }
  return seen.size();
}

bool SameShape(const PartitionModel& a, const PartitionModel& b) {
  return a.num_players() == b.num_players() &&
         a.payoff_states() == b.payoff_states();
}

void CheckProfile(const PartitionModel& model, const CellProfile& profile) {
  if (profile.size() != model.num_players()) {
    throw Error("profile must name one cell per player");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= model.partition(i).size()) {
      throw Error("cell index out of range");
    }
  }
}

bool AgreeAt(const TypeTable& a, const CellProfile& profile_a,
             const TypeTable& b, const CellProfile& profile_b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i][profile_a[i]] != b[i][profile_b[i]]) return false;
  }
  return true;
}

// Both models' type tables at each order from 1, stopping once `stop`
// returns true or the joint partition into types stops refining.
template <typename Stop>
std::optional<std::size_t> IterateJointly(const PartitionModel& model_a,
                                          const PartitionModel& model_b,
                                          std::size_t max_order, Stop stop) {
  TypeCatalog catalog;
  TypeTable a, b;
  std::size_t previous_count = 0;
  for (std::size_t k = 1; k <= max_order; ++k) {
    a = NextTypeIds(model_a, k, a, catalog);
    b = NextTypeIds(model_b, k, b, catalog);
    if (stop(k, a, b)) return k;
    TypeTable both = a;
    both.insert(both.end(), b.begin(), b.end());
    const std::size_t count = CountDistinct(both);
    if (count == previous_count) return std::nullopt;
    previous_count = count;
  }
  return std::nullopt;
}

struct LipmanKey {
  int row;  // 1 or 2, also the payoff state
  std::size_t column;
  bool primed;

  friend auto operator<=>(const LipmanKey&, const LipmanKey&) = default;
};

std::string LipmanName(const LipmanKey& key) {
  std::ostringstream out;
  out << '(' << key.row << ',' << key.column << ')' << (key.primed ? "'" : "");
  return out.str();
}

PartitionModel LipmanModel(
    const std::vector<LipmanKey>& states, const std::vector<Rational>& prior,
    const std::vector<std::vector<std::vector<LipmanKey>>>& partitions) {
  std::map<LipmanKey, std::size_t> index;
  std::vector<GroundState> ground;
  for (const auto& key : states) {
    index.emplace(key, ground.size());
    ground.push_back({LipmanName(key), static_cast<std::size_t>(key.row - 1)});
  }
  std::vector<Partition> converted;
  for (const auto& cells : partitions) {
    Partition partition;
    for (const auto& cell : cells) {
      Cell converted_cell;
      for (const auto& key : cell) converted_cell.push_back(index.at(key));
      partition.push_back(std::move(converted_cell));
    }
    converted.push_back(std::move(partition));
  }
  return PartitionModel({"w1", "w2"}, std::move(ground), prior,
                        std::move(converted));
}

std::size_t Pow2(std::size_t e) { return std::size_t{1} << e; }

PartitionModel LipmanBase(std::size_t m) {
  const std::size_t top = Pow2(m), half = Pow2(m - 1);
  std::vector<LipmanKey> states;
  for (int l = 1; l <= 2; ++l) {
    for (std::size_t k = 1; k <= top; ++k) states.push_back({l, k, false});
  }
  const std::vector<Rational> prior(states.size(), Rational(1, Pow2(m + 1)));
  std::vector<std::vector<LipmanKey>> first, second;
  for (std::size_t k = 1; k <= half; ++k) {
    first.push_back({{1, 2 * k - 1, false}, {1, 2 * k, false}, {2, k, false}});
    second.push_back({{2, 2 * k - 1, false}, {2, 2 * k, false}, {1, k, false}});
  }
  std::vector<LipmanKey> first_tail, second_tail;
  for (std::size_t k = half + 1; k <= top; ++k) {
    first_tail.push_back({2, k, false});
    second_tail.push_back({1, k, false});
  }
  first.push_back(first_tail);
  second.push_back(second_tail);
  return LipmanModel(states, prior, {first, second});
}

PartitionModel LipmanShiftedOrderTwo() {
  const LipmanKey p14{1, 4, true}, p13{1, 3, true}, p22{2, 2, true},
      p11{1, 1, true}, u11{1, 1, false}, u21{2, 1, false}, u12{1, 2, false},
      u23{2, 3, false}, u24{2, 4, false};
  const std::vector<LipmanKey> states = {p14, p13, p22, p11, u11,
                                         u21, u12, u23, u24};
  const std::vector<Rational> prior = {
      Rational(1, 20), Rational(1, 20), Rational(1, 10), Rational(1, 10), 0,
      Rational(1, 10), Rational(1, 5),  Rational(1, 5),  Rational(1, 5)};
  return LipmanModel(states, prior,
                     {{{p14, p13, p22, p11}, {u11, u21, u12}, {u23, u24}},
                      {{p14, p13}, {p22, p11, u11, u21}, {u12, u23, u24}}});
}

PartitionModel LipmanShifted(std::size_t m, const Rational& x) {
  const std::size_t top = Pow2(m), half = Pow2(m - 1);
  auto p = [](int l, std::size_t k) { return LipmanKey{l, k, true}; };
  auto u = [](int l, std::size_t k) { return LipmanKey{l, k, false}; };
  std::vector<std::vector<LipmanKey>> first = {
      {u(1, 1), u(2, 1), u(1, 2)}, {p(1, 1), p(2, 2), p(1, 3), p(1, 4)}};
  for (std::size_t n = 3; n + 1 < m; n += 2) {
    for (std::size_t k = Pow2(n - 1) + 1; k <= Pow2(n); ++k) {
      first.push_back({p(1, 2 * k - 1), p(1, 2 * k), p(2, k)});
    }
  }
  for (std::size_t n = 2; n < m; n += 2) {
    for (std::size_t k = Pow2(n - 1) + 1; k <= Pow2(n); ++k) {
      first.push_back({u(1, 2 * k - 1), u(1, 2 * k), u(2, k)});
    }
  }
  std::vector<LipmanKey> first_tail;
  for (std::size_t k = half + 1; k <= top; ++k) first_tail.push_back(p(2, k));
  first.push_back(first_tail);

  std::vector<std::vector<LipmanKey>> second = {
      {u(1, 1), u(2, 1), p(1, 1), p(2, 2)}};
  for (std::size_t n = 2; n < m; n += 2) {
    for (std::size_t k = Pow2(n - 1) + 1; k <= Pow2(n); ++k) {
      second.push_back({p(2, 2 * k - 1), p(2, 2 * k), p(1, k)});
    }
  }
  for (std::size_t n = 1; n + 1 < m; n += 2) {
    for (std::size_t k = Pow2(n - 1) + 1; k <= Pow2(n); ++k) {
      second.push_back({u(2, 2 * k - 1), u(2, 2 * k), u(1, k)});
    }
  }
  std::vector<LipmanKey> second_tail;
  for (std::size_t k = half + 1; k <= top; ++k) second_tail.push_back(u(1, k));
  second.push_back(second_tail);

  std::set<LipmanKey> used;
  for (const auto& cell : first) used.insert(cell.begin(), cell.end());
  const std::vector<LipmanKey> states(used.begin(), used.end());
  std::vector<Rational> prior;
  for (const auto& key : states) {
    if (key == u(1, 1)) {
      prior.push_back(0);
    } else if (key == u(2, 1) || key == p(1, 1) || key == p(2, 2)) {
      prior.push_back(x);
    } else if (key.primed) {
      prior.push_back(x / 2);
    } else {
      prior.push_back(2 * x);
    }
  }
  return LipmanModel(states, prior, {first, second});
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational denominator = ParseInteger(text.substr(slash + 1));
    if (denominator == 0) {
      throw Error("invalid rational '" + original + "': zero denominator");
    }
    value = ParseInteger(text.substr(0, slash)) / denominator;
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view fraction = text.substr(dot + 1);
    if (whole.empty() && fraction.empty()) {
      throw Error("invalid rational '" + original + "'");
    }
    value =
        (whole.empty() ? Rational(0) : ParseInteger(whole)) +
        (fraction.empty() ? Rational(0)
                          : ParseInteger(fraction) / Pow10(fraction.size()));
  } else {
    value = ParseInteger(text);
  }
  return negative ? Rational(-value) : value;
}

std::string FormatRational(const Rational& value) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(value);
  if (boost::multiprecision::denominator(value) != 1) {
    out << '/' << boost::multiprecision::denominator(value);
  }
  return out.str();
}

double ToDouble(const Rational& value) { return value.convert_to<double>(); }

PartitionModel::PartitionModel(std::vector<std::string> payoff_states,
                               std::vector<GroundState> ground_states,
                               std::vector<Rational> prior,
                               std::vector<Partition> partitions)
    : payoff_states_(std::move(payoff_states)),
      ground_states_(std::move(ground_states)),
      prior_(std::move(prior)),
      partitions_(std::move(partitions)) {
  if (payoff_states_.empty()) throw Error("model needs a payoff state");
  if (std::set<std::string>(payoff_states_.begin(), payoff_states_.end())
          .size() != payoff_states_.size()) {
    throw Error("duplicate payoff state");
  }
  if (ground_states_.empty()) throw Error("model needs a ground state");
  std::set<std::string> names;
  for (const auto& g : ground_states_) {
    if (!names.insert(g.name).second) {
      throw Error("duplicate ground state '" + g.name + "'");
    }
    if (g.payoff >= payoff_states_.size()) {
      throw Error("ground state '" + g.name + "' has unknown payoff state");
    }
  }
  if (prior_.size() != ground_states_.size()) {
    throw Error("prior has wrong length");
  }
  Rational total = 0;
  for (const auto& p : prior_) {
    if (p < 0) throw Error("prior: negative probability");
    total += p;
  }
  if (total != 1) {
    throw Error("prior: sums to " + FormatRational(total) + ", not 1");
  }
  if (partitions_.empty()) throw Error("model needs at least one player");
  cell_of_.assign(partitions_.size(),
                  std::vector<std::size_t>(ground_states_.size(), kNoType));
  for (std::size_t i = 0; i < partitions_.size(); ++i) {
    for (std::size_t c = 0; c < partitions_[i].size(); ++c) {
      if (partitions_[i][c].empty()) {
        throw Error("player " + std::to_string(i + 1) + " has an empty cell");
      }
      for (std::size_t g : partitions_[i][c]) {
        if (g >= ground_states_.size()) {
          throw Error("cell names an unknown ground state");
        }
        if (cell_of_[i][g] != kNoType) {
          throw Error("player " + std::to_string(i + 1) + ": ground state '" +
                      ground_states_[g].name + "' is in two cells");
        }
        cell_of_[i][g] = c;
      }
    }
    for (std::size_t g = 0; g < ground_states_.size(); ++g) {
      if (cell_of_[i][g] == kNoType) {
        throw Error("player " + std::to_string(i + 1) +
                    ": partition misses ground state '" +
                    ground_states_[g].name + "'");
      }
    }
  }
}

const Partition& PartitionModel::partition(std::size_t player) const {
  if (player >= partitions_.size()) throw Error("player index out of range");
  return partitions_[player];
}

std::size_t PartitionModel::cell_of(std::size_t player,
                                    std::size_t ground_state) const {
  return cell_of_.at(player).at(ground_state);
}

Rational PartitionModel::cell_mass(std::size_t player, std::size_t cell) const {
  Rational mass = 0;
  for (std::size_t g : partition(player).at(cell)) mass += prior_[g];
  return mass;
}

std::size_t PartitionModel::ground_index(std::string_view name) const {
  for (std::size_t g = 0; g < ground_states_.size(); ++g) {
    if (ground_states_[g].name == name) return g;
  }
  throw Error("unknown ground state '" + std::string(name) + "'");
}

CellProfile ProfileAt(const PartitionModel& model, std::size_t ground_state) {
  if (ground_state >= model.num_ground_states()) {
    throw Error("ground state index out of range");
  }
  CellProfile profile(model.num_players());
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    profile[i] = model.cell_of(i, ground_state);
  }
  return profile;
}

std::size_t TypeCatalog::Intern(std::size_t order, std::size_t player,
                                BeliefRecord record) {
  auto key = std::make_tuple(order, player, record);
  auto [it, inserted] = index_.emplace(std::move(key), entries_.size());
  if (inserted) entries_.push_back({order, player, std::move(record)});
  return it->second;
}

std::vector<std::vector<std::size_t>> TypeIds(const PartitionModel& model,
                                              std::size_t order,
                                              TypeCatalog& catalog) {
  if (order < 1) throw Error("order must be at least 1");
  TypeTable ids;
  for (std::size_t k = 1; k <= order; ++k) {
    ids = NextTypeIds(model, k, ids, catalog);
  }
  return ids;
}

OrderKTypes KthOrderTypes(const PartitionModel& model, std::size_t order) {
  if (order < 1) throw Error("order must be at least 1");
  TypeCatalog catalog;
  TypeTable previous, current;
  std::vector<std::map<std::size_t, std::size_t>> previous_labels;
  std::vector<std::map<std::size_t, std::size_t>> labels;
  for (std::size_t k = 1; k <= order; ++k) {
    previous = std::move(current);
    previous_labels = std::move(labels);
    current = NextTypeIds(model, k, previous, catalog);
    labels.assign(model.num_players(), {});
    for (std::size_t i = 0; i < model.num_players(); ++i) {
      for (std::size_t id : current[i]) {
        if (id != kNoType) labels[i].emplace(id, labels[i].size());
      }
    }
  }

  OrderKTypes types;
  types.order = order;
  types.cell_class.resize(model.num_players());
  types.ground_class.resize(model.num_players());
  types.class_records.resize(model.num_players());
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    for (std::size_t c = 0; c < current[i].size(); ++c) {
      const std::size_t id = current[i][c];
      if (id == kNoType) {
        types.cell_class[i].push_back(kNoType);
        types.warnings.push_back("player " + std::to_string(i + 1) + " cell " +
                                 std::to_string(c + 1) +
                                 " has zero prior mass and is dropped");
        continue;
      }
      const std::size_t label = labels[i].at(id);
      types.cell_class[i].push_back(label);
      if (label < types.class_records[i].size()) continue;
      BeliefRecord record = catalog.entry(id).record;
      for (auto& [outcome, probability] : record) {
        if (outcome.others.empty()) continue;
        std::size_t position = 0;
        for (std::size_t j = 0; j < model.num_players(); ++j) {
          if (j == i) continue;
          std::size_t& other = outcome.others[position++];
          other = previous_labels[j].at(other);
        }
      }
      std::sort(record.begin(), record.end());
      types.class_records[i].push_back(std::move(record));
    }
    for (std::size_t g = 0; g < model.num_ground_states(); ++g) {
      types.ground_class[i].push_back(types.cell_class[i][model.cell_of(i, g)]);
    }
  }
  return types;
}

bool HierarchiesEqualUpTo(const PartitionModel& model_a,
                          const CellProfile& profile_a,
                          const PartitionModel& model_b,
                          const CellProfile& profile_b, std::size_t order) {
  CheckProfile(model_a, profile_a);
  CheckProfile(model_b, profile_b);
  if (!SameShape(model_a, model_b)) return false;
  const auto differs =
      IterateJointly(model_a, model_b, order,
                     [&](std::size_t, const TypeTable& a, const TypeTable& b) {
                       return !AgreeAt(a, profile_a, b, profile_b);
                     });
  return !differs.has_value();
}

std::optional<std::size_t> AgreementDepth(const PartitionModel& model_a,
                                          const CellProfile& profile_a,
                                          const PartitionModel& model_b,
                                          const CellProfile& profile_b) {
  CheckProfile(model_a, profile_a);
  CheckProfile(model_b, profile_b);
  if (!SameShape(model_a, model_b)) return 0;
  std::size_t total_cells = 2;
  for (std::size_t i = 0; i < model_a.num_players(); ++i) {
    total_cells += model_a.partition(i).size() + model_b.partition(i).size();
  }
  const auto first_difference =
      IterateJointly(model_a, model_b, total_cells,
                     [&](std::size_t, const TypeTable& a, const TypeTable& b) {
                       return !AgreeAt(a, profile_a, b, profile_b);
                     });
  if (!first_difference) return std::nullopt;
  return *first_difference - 1;
}

std::vector<Rational> ExactFullInfoPosterior(const PartitionModel& model,
                                             const CellProfile& profile) {
  CheckProfile(model, profile);
  std::vector<Rational> posterior(model.num_payoff_states(), Rational(0));
  Rational mass = 0;
  for (std::size_t g = 0; g < model.num_ground_states(); ++g) {
    bool inside = true;
    for (std::size_t i = 0; i < profile.size() && inside; ++i) {
      inside = model.cell_of(i, g) == profile[i];
    }
    if (!inside) continue;
    posterior[model.ground_states()[g].payoff] += model.prior()[g];
    mass += model.prior()[g];
  }
  if (mass == 0) throw Error("incompatible profile");
  for (auto& p : posterior) p /= mass;
  return posterior;
}

BeliefVector FullInfoPosterior(const PartitionModel& model,
                               const CellProfile& profile) {
  const auto exact = ExactFullInfoPosterior(model, profile);
  Vector v(static_cast<Eigen::Index>(exact.size()));
  for (std::size_t w = 0; w < exact.size(); ++w) {
    v[static_cast<Eigen::Index>(w)] = ToDouble(exact[w]);
  }
  return BeliefVector(std::move(v));
}

FullHierarchies::FullHierarchies(const PartitionModel& model) {
  TypeCatalog catalog;
  TypeTable current = NextTypeIds(model, 1, {}, catalog);
  std::size_t order = 1;
  while (true) {
    TypeTable next = NextTypeIds(model, order + 1, current, catalog);
    if (CountDistinct(next) == CountDistinct(current)) {
      stable_order_ = order;
      types_ = current;
      beliefs_.resize(model.num_players());
      for (std::size_t i = 0; i < model.num_players(); ++i) {
        for (std::size_t c = 0; c < current[i].size(); ++c) {
          if (current[i][c] == kNoType) continue;
          beliefs_[i].emplace(current[i][c], catalog.entry(next[i][c]).record);
        }
      }
      return;
    }
    current = std::move(next);
    ++order;
  }
}

std::size_t FullHierarchies::type_of(std::size_t player,
                                     std::size_t cell) const {
  return types_.at(player).at(cell);
}

const BeliefRecord& FullHierarchies::belief(std::size_t player,
                                            std::size_t type) const {
  const auto& beliefs = beliefs_.at(player);
  auto it = beliefs.find(type);
  if (it == beliefs.end()) {
    throw Error("unknown type for player " + std::to_string(player + 1));
  }
  return it->second;
}

std::vector<std::size_t> FullHierarchies::cells_of(std::size_t player,
                                                   std::size_t type) const {
  std::vector<std::size_t> cells;
  const auto& row = types_.at(player);
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (row[c] == type) cells.push_back(c);
  }
  return cells;
}

RecoveryResult RecoverFromHierarchy(const PartitionModel& model,
                                    const FullHierarchies& hierarchies,
                                    const std::vector<std::size_t>& reported) {
  const std::size_t num_players = model.num_players();
  if (reported.size() != num_players) {
    throw Error("report must name one hierarchy per player");
  }
  RecoveryResult result;
  for (std::size_t i = 0; i < num_players; ++i) {
    hierarchies.belief(i, reported[i]);
    const auto cells = hierarchies.cells_of(i, reported[i]);
    if (cells.size() != 1) throw Error("unidentifiable hierarchy");
    result.identified_profile.push_back(cells.front());
  }

  auto outcome_of = [](const ClosureNode& node, std::size_t player) {
    BeliefOutcome outcome{node.payoff, {}};
    for (std::size_t j = 0; j < node.types.size(); ++j) {
      if (j != player) outcome.others.push_back(node.types[j]);
    }
    return outcome;
  };
  auto probability = [](const BeliefRecord& record,
                        const BeliefOutcome& outcome) -> Rational {
    auto it = std::lower_bound(record.begin(), record.end(), outcome,
                               [](const auto& entry, const BeliefOutcome& o) {
                                 return entry.first < o;
                               });
    if (it == record.end() || it->first != outcome) return 0;
    return it->second;
  };

  // Seed with a payoff state the first player considers possible alongside
  // the reported types of the others.
  std::map<ClosureNode, Rational> weight;
  std::deque<ClosureNode> queue;
  for (const auto& [outcome, p] : hierarchies.belief(0, reported[0])) {
    ClosureNode node{outcome.payoff, reported};
    if (outcome_of(node, 0) == outcome) {
      weight.emplace(node, Rational(1));
      queue.push_back(node);
      break;
    }
  }
  if (queue.empty()) throw Error("zero-probability profile");

  while (!queue.empty()) {
    const ClosureNode node = queue.front();
    queue.pop_front();
    const Rational node_weight = weight.at(node);
    for (std::size_t j = 0; j < num_players; ++j) {
      const BeliefRecord& record = hierarchies.belief(j, node.types[j]);
      const Rational base = probability(record, outcome_of(node, j));
      if (base == 0) throw Error("inconsistent hierarchies");
      for (const auto& [outcome, p] : record) {
        ClosureNode next{outcome.payoff, {}};
        std::size_t position = 0;
        for (std::size_t k = 0; k < num_players; ++k) {
          next.types.push_back(k == j ? node.types[j]
                                      : outcome.others[position++]);
        }
        const Rational next_weight = node_weight * p / base;
        auto [it, inserted] = weight.emplace(next, next_weight);
        if (inserted) {
          queue.push_back(next);
        } else if (it->second != next_weight) {
          throw Error("inconsistent hierarchies");
        }
      }
    }
  }

  result.exact_posterior.assign(model.num_payoff_states(), Rational(0));
  Rational total = 0;
  for (const auto& [node, w] : weight) {
    result.closure.insert(node);
    if (node.types == reported) {
      result.exact_posterior[node.payoff] += w;
      total += w;
    }
  }
  Vector v(static_cast<Eigen::Index>(model.num_payoff_states()));
  for (std::size_t w = 0; w < result.exact_posterior.size(); ++w) {
    result.exact_posterior[w] /= total;
    v[static_cast<Eigen::Index>(w)] = ToDouble(result.exact_posterior[w]);
  }
  result.posterior = BeliefVector(std::move(v));
  return result;
}

RecoveryResult RecoverFromHierarchy(const PartitionModel& model,
                                    const CellProfile& profile) {
  CheckProfile(model, profile);
  const FullHierarchies hierarchies(model);
  std::vector<std::size_t> reported(model.num_players());
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    reported[i] = hierarchies.type_of(i, profile[i]);
    if (reported[i] == kNoType) throw Error("zero-probability profile");
  }
  return RecoverFromHierarchy(model, hierarchies, reported);
}

LipmanPair BuildLipman(std::size_t m) {
  if (m < 2) throw Error("lipman order must be at least 2");
  const std::size_t n = (m == 2 || m % 2 == 1) ? m : m + 1;
  const Rational x(2, 5 * Pow2(n));
  PartitionModel base = LipmanBase(n);
  PartitionModel shifted =
      n == 2 ? LipmanShiftedOrderTwo() : LipmanShifted(n, x);
  CellProfile base_profile = ProfileAt(base, base.ground_index("(1,1)"));
  CellProfile shifted_profile =
      ProfileAt(shifted, shifted.ground_index("(1,1)"));
  return {std::move(base),
          std::move(shifted),
          std::move(base_profile),
          std::move(shifted_profile),
          m,
          n,
          x};
}

std::pair<PartitionModel, CellProfile> BuildLipmanMirror(
    const LipmanPair& pair) {
  const PartitionModel& source = pair.shifted;
  std::vector<GroundState> ground = source.ground_states();
  for (auto& g : ground) g.payoff = 1 - g.payoff;
  std::vector<Partition> partitions = {source.partition(1),
                                       source.partition(0)};
  PartitionModel mirror(source.payoff_states(), std::move(ground),
                        source.prior(), std::move(partitions));
  CellProfile profile = ProfileAt(mirror, mirror.ground_index("(1,1)"));
  return {std::move(mirror), std::move(profile)};
}

}  // namespace beliefagg
