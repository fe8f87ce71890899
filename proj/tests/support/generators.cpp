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

#include "support/generators.hpp"

#include <algorithm>
#include <string>

#include "beliefagg/error.hpp"

namespace beliefagg::testgen {

Vector RandomSimplexPoint(Rng& rng, std::size_t size) {
  std::exponential_distribution<double> exponential(1.0);
  Vector v(static_cast<Eigen::Index>(size));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = exponential(rng) + 1e-9;
  return v / v.sum();
}

InfoStructure RandomStructure(Rng& rng, std::size_t num_states,
                              std::size_t num_signals) {
  std::vector<std::string> states, signals;
  for (std::size_t w = 0; w < num_states; ++w) {
    states.push_back("w" + std::to_string(w + 1));
  }
  for (std::size_t s = 0; s < num_signals; ++s) {
    signals.push_back("s" + std::to_string(s + 1));
  }
  const auto l = static_cast<Eigen::Index>(num_states);
  Vector prior = 0.5 * RandomSimplexPoint(rng, num_states) +
                 0.5 * Vector::Constant(l, 1.0 / static_cast<double>(l));
  prior /= prior.sum();
  Matrix likelihood(static_cast<Eigen::Index>(num_signals), l);
  for (Eigen::Index w = 0; w < l; ++w) {
    likelihood.col(w) = RandomSimplexPoint(rng, num_signals);
  }
  return InfoStructure(StateSpace(states), signals, prior, likelihood);
}

InfoStructure RandomAssumedStructure(Rng& rng, std::size_t num_states,
                                     std::size_t num_signals, double delta) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    InfoStructure structure = RandomStructure(rng, num_states, num_signals);
    if (CheckAssumptions(structure, delta).satisfied()) return structure;
  }
  throw Error("could not sample a structure passing the assumptions");
}

PartitionModel RandomPartitionModel(Rng& rng, std::size_t players,
                                    std::size_t max_payoff,
                                    std::size_t max_cells) {
  std::uniform_int_distribution<std::size_t> payoff_count(1, max_payoff);
  std::uniform_int_distribution<std::size_t> ground_count(2, 7);
  std::uniform_int_distribution<int> weight(0, 4);
  while (true) {
    const std::size_t num_payoff = payoff_count(rng);
    const std::size_t num_ground = ground_count(rng);
    std::vector<std::string> payoff_states;
    for (std::size_t w = 0; w < num_payoff; ++w) {
      payoff_states.push_back("w" + std::to_string(w + 1));
    }
    std::uniform_int_distribution<std::size_t> pick_payoff(0, num_payoff - 1);
    std::vector<GroundState> ground;
    std::vector<int> weights;
    int total = 0;
    for (std::size_t g = 0; g < num_ground; ++g) {
      ground.push_back({"g" + std::to_string(g + 1), pick_payoff(rng)});
      weights.push_back(weight(rng));
      total += weights.back();
    }
    if (total == 0) continue;
    std::vector<Rational> prior;
    for (int w : weights) prior.emplace_back(w, total);

    std::vector<Partition> partitions;
    for (std::size_t i = 0; i < players; ++i) {
      std::uniform_int_distribution<std::size_t> pick_cell(0, max_cells - 1);
      Partition cells(max_cells);
      for (std::size_t g = 0; g < num_ground; ++g) {
        cells[pick_cell(rng)].push_back(g);
      }
      cells.erase(std::remove_if(cells.begin(), cells.end(),
                                 [](const Cell& c) { return c.empty(); }),
                  cells.end());
      partitions.push_back(std::move(cells));
    }
    return PartitionModel(payoff_states, std::move(ground), std::move(prior),
                          std::move(partitions));
  }
}

Vector OraclePosterior(const InfoStructure& structure, std::size_t signal) {
  const auto l = static_cast<Eigen::Index>(structure.num_states());
  const auto s = static_cast<Eigen::Index>(signal);
  Vector joint(l);
  double total = 0.0;
  for (Eigen::Index w = 0; w < l; ++w) {
    joint[w] = structure.prior()[w] * structure.likelihood()(s, w);
    total += joint[w];
  }
  return joint / total;
}

Matrix OracleExpectedBeliefMatrix(const InfoStructure& structure) {
  const auto l = static_cast<Eigen::Index>(structure.num_states());
  Matrix e = Matrix::Zero(l, l);
  for (std::size_t s = 0; s < structure.num_signals(); ++s) {
    const Vector posterior = OraclePosterior(structure, s);
    for (Eigen::Index j = 0; j < l; ++j) {
      const double weight =
          structure.likelihood()(static_cast<Eigen::Index>(s), j);
      for (Eigen::Index i = 0; i < l; ++i) e(i, j) += weight * posterior[i];
    }
  }
  return e;
}

std::vector<Rational> OracleFullInfoPosterior(const PartitionModel& model,
                                              const CellProfile& profile) {
  std::vector<Rational> joint(model.num_payoff_states(), Rational(0));
  Rational total = 0;
  for (std::size_t g = 0; g < model.num_ground_states(); ++g) {
    bool inside = true;
    for (std::size_t i = 0; i < model.num_players(); ++i) {
      const Cell& cell = model.partition(i)[profile[i]];
      inside = inside && std::find(cell.begin(), cell.end(), g) != cell.end();
    }
    if (!inside) continue;
    joint[model.ground_states()[g].payoff] += model.prior()[g];
    total += model.prior()[g];
  }
  if (total == 0) throw Error("oracle: zero-mass profile");
  for (auto& p : joint) p /= total;
  return joint;
}

}  // namespace beliefagg::testgen
