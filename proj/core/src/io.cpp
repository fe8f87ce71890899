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

#include "beliefagg/io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "beliefagg/error.hpp"

namespace beliefagg {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

class Context {
 public:
  explicit Context(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Fail(const YAML::Node& node,
                         const std::string& message) const {
    std::ostringstream out;
    out << source_ << ':';
    if (node.IsDefined() && node.Mark().line >= 0) {
      out << node.Mark().line + 1 << ": ";
    } else {
      out << ' ';
    }
    out << message;
    throw Error(out.str());
  }

  YAML::Node Require(const YAML::Node& map, const std::string& key) const {
    YAML::Node child = map[key];
    if (!child.IsDefined() || child.IsNull()) {
      Fail(map, "missing key '" + key + "'");
    }
    return child;
  }

  std::vector<std::string> Names(const YAML::Node& node,
                                 const std::string& what) const {
    if (!node.IsSequence()) Fail(node, what + " must be a list");
    std::vector<std::string> names;
    for (const auto& item : node) {
      if (!item.IsScalar()) Fail(item, what + " entries must be names");
      names.push_back(item.as<std::string>());
    }
    return names;
  }

  Rational Exact(const YAML::Node& node) const {
    if (!node.IsScalar()) Fail(node, "expected a number");
    try {
      return ParseRational(node.as<std::string>());
    } catch (const Error& e) {
      Fail(node, e.what());
    }
  }

  double Number(const YAML::Node& node) const {
    if (!node.IsScalar()) Fail(node, "expected a number");
    const std::string text = node.as<std::string>();
    if (text.find('/') != std::string::npos) return ToDouble(Exact(node));
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return value;
    } catch (const std::exception&) {
      Fail(node, "expected a number, got '" + text + "'");
    }
  }

  Vector Probabilities(const YAML::Node& node, std::size_t size, bool normalize,
                       const std::string& what) const {
    if (!node.IsSequence() || node.size() != size) {
      Fail(node,
           what + " must be a list of " + std::to_string(size) + " numbers");
    }
    Vector v(Idx(size));
    for (std::size_t i = 0; i < size; ++i) {
      v[Idx(i)] = Number(node[i]);
      if (!std::isfinite(v[Idx(i)]) || v[Idx(i)] < 0.0) {
        Fail(node[i], what + " entries must be nonnegative");
      }
    }
    const double total = v.sum();
    if (!(total > 0.0)) Fail(node, what + " sums to zero");
    if (!normalize && std::abs(total - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << what << " sums to " << std::setprecision(12) << total
          << ", not 1 (set normalize: true to rescale)";
      Fail(node, msg.str());
    }
    return v / total;
  }

  Matrix Table(const YAML::Node& node, std::size_t rows, std::size_t cols,
               const std::string& what) const {
    if (!node.IsSequence() || node.size() != rows) {
      Fail(node, what + " must have " + std::to_string(rows) + " rows");
    }
    Matrix m(Idx(rows), Idx(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const YAML::Node row = node[r];
      if (!row.IsSequence() || row.size() != cols) {
        Fail(row,
             what + " rows must have " + std::to_string(cols) + " entries");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(Idx(r), Idx(c)) = Number(row[c]);
        if (!std::isfinite(m(Idx(r), Idx(c))) || m(Idx(r), Idx(c)) < 0.0) {
          Fail(row[c], what + " entries must be nonnegative");
        }
      }
    }
    return m;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

YAML::Node ParseDocument(const std::string& text, const Context& context) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) context.Fail(root, "document must be a mapping");
    return root;
  } catch (const YAML::Exception& e) {
    throw Error(context.source() + ":" + std::to_string(e.mark.line + 1) +
                ": " + e.msg);
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void NormalizeColumns(Matrix& m, bool normalize, const Context& context,
                      const YAML::Node& node, const std::string& what) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double total = m.col(c).sum();
    if (!(total > 0.0)) context.Fail(node, what + " column sums to zero");
    if (!normalize && std::abs(total - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << what << " column " << c + 1 << " sums to " << std::setprecision(12)
          << total << ", not 1";
      context.Fail(node, msg.str());
    }
    m.col(c) /= total;
  }
}

void NormalizeRows(Matrix& m, bool normalize, const Context& context,
                   const YAML::Node& node, const std::string& what) {
  Matrix transposed = m.transpose();
  NormalizeColumns(transposed, normalize, context, node, what + " row");
  m = transposed.transpose();
}

}  // namespace

std::string FormatNumber(double value) {
  std::ostringstream out;
  out << std::setprecision(6) << value;
  return out.str();
}

InfoStructure ParseStructure(const std::string& text,
                             const std::string& source) {
  const Context context(source);
  const YAML::Node root = ParseDocument(text, context);
  for (const auto& entry : root) {
    const std::string key = entry.first.as<std::string>();
    if (key != "states" && key != "signals" && key != "prior" &&
        key != "likelihood" && key != "posterior_override" &&
        key != "normalize") {
      context.Fail(entry.first, "unknown key '" + key + "'");
    }
  }
  bool normalize = false;
  if (root["normalize"]) {
    try {
      normalize = root["normalize"].as<bool>();
    } catch (const YAML::Exception&) {
      context.Fail(root["normalize"], "normalize must be true or false");
    }
  }
  const auto states = context.Names(context.Require(root, "states"), "states");
  const auto signals =
      context.Names(context.Require(root, "signals"), "signals");
  const YAML::Node prior_node = context.Require(root, "prior");
  const Vector prior =
      context.Probabilities(prior_node, states.size(), normalize, "prior");
  const YAML::Node likelihood_node = context.Require(root, "likelihood");
  Matrix likelihood = context.Table(likelihood_node, signals.size(),
                                    states.size(), "likelihood");
  NormalizeColumns(likelihood, normalize, context, likelihood_node,
                   "likelihood");
  std::optional<Matrix> override_table;
  if (root["posterior_override"] && !root["posterior_override"].IsNull()) {
    const YAML::Node node = root["posterior_override"];
    Matrix q = context.Table(node, signals.size(), states.size(),
                             "posterior_override");
    NormalizeRows(q, normalize, context, node, "posterior_override");
    override_table = std::move(q);
  }
  try {
    return InfoStructure(StateSpace(states), signals, prior, likelihood,
                         override_table);
  } catch (const Error& e) {
    context.Fail(root, e.what());
  }
}

InfoStructure LoadStructure(const std::string& path) {
  return ParseStructure(ReadFile(path), path);
}

PartitionModel ParsePartitionModel(const std::string& text,
                                   const std::string& source) {
  const Context context(source);
  const YAML::Node root = ParseDocument(text, context);
  const auto payoff_states =
      context.Names(context.Require(root, "payoff_states"), "payoff_states");
  std::map<std::string, std::size_t> payoff_index;
  for (std::size_t w = 0; w < payoff_states.size(); ++w) {
    payoff_index.emplace(payoff_states[w], w);
  }

  const YAML::Node ground_node = context.Require(root, "ground_states");
  if (!ground_node.IsSequence()) {
    context.Fail(ground_node, "ground_states must be a list");
  }
  std::vector<GroundState> ground;
  std::vector<Rational> prior;
  std::map<std::string, std::size_t> ground_index;
  for (const auto& item : ground_node) {
    if (!item.IsMap()) context.Fail(item, "ground state must be a mapping");
    const std::string name = context.Require(item, "name").as<std::string>();
    const YAML::Node payoff_node = context.Require(item, "payoff");
    auto it = payoff_index.find(payoff_node.as<std::string>());
    if (it == payoff_index.end()) {
      context.Fail(payoff_node, "unknown payoff state '" +
                                    payoff_node.as<std::string>() + "'");
    }
    if (!ground_index.emplace(name, ground.size()).second) {
      context.Fail(item, "duplicate ground state '" + name + "'");
    }
    ground.push_back({name, it->second});
    prior.push_back(context.Exact(context.Require(item, "prior")));
  }

  const YAML::Node partitions_node = context.Require(root, "partitions");
  if (!partitions_node.IsSequence()) {
    context.Fail(partitions_node, "partitions must be a list");
  }
  std::vector<Partition> partitions;
  for (const auto& player : partitions_node) {
    if (!player.IsSequence()) {
      context.Fail(player, "each partition must be a list of cells");
    }
    Partition partition;
    for (const auto& cell_node : player) {
      Cell cell;
      for (const auto& name : context.Names(cell_node, "cell")) {
        auto it = ground_index.find(name);
        if (it == ground_index.end()) {
          context.Fail(cell_node, "unknown ground state '" + name + "'");
        }
        cell.push_back(it->second);
      }
      partition.push_back(std::move(cell));
    }
    partitions.push_back(std::move(partition));
  }
  try {
    return PartitionModel(payoff_states, std::move(ground), std::move(prior),
                          std::move(partitions));
  } catch (const Error& e) {
    context.Fail(root, e.what());
  }
}

PartitionModel LoadPartitionModel(const std::string& path) {
  return ParsePartitionModel(ReadFile(path), path);
}

void WritePopulationCsv(std::ostream& out, const PopulationDraw& draw,
                        const InfoStructure& structure,
                        const std::vector<double>* payments) {
  if (payments && payments->size() != draw.reports.size()) {
    throw Error("one payment per agent required");
  }
  bool any_alpha = false, any_vote = false;
  for (const auto& report : draw.reports) {
    any_alpha = any_alpha || report.second_order.has_value();
    any_vote = any_vote || report.vote.has_value();
  }
  const auto& labels = structure.states().labels();
  out << "agent,signal";
  for (const auto& label : labels) out << ",mu_" << label;
  if (any_alpha) {
    for (const auto& label : labels) out << ",alpha_" << label;
  }
  if (any_vote) out << ",vote";
  if (payments) out << ",payment";
  out << '\n';
  for (std::size_t i = 0; i < draw.reports.size(); ++i) {
    const AgentReport& report = draw.reports[i];
    out << i << ',' << structure.signals().at(draw.signals[i]);
    for (std::size_t w = 0; w < labels.size(); ++w) {
      out << ',' << FormatNumber(report.first_order[w]);
    }
    if (any_alpha) {
      for (std::size_t w = 0; w < labels.size(); ++w) {
        out << ',';
        if (report.second_order) out << FormatNumber((*report.second_order)[w]);
      }
    }
    if (any_vote) {
      out << ',';
      if (report.vote) out << labels.at(*report.vote);
    }
    if (payments) out << ',' << FormatNumber((*payments)[i]);
    out << '\n';
  }
}

void WriteOutcome(std::ostream& out, const AggregationOutcome& outcome,
                  const StateSpace& states, std::optional<std::uint64_t> seed) {
  out << "procedure: " << outcome.procedure << '\n';
  if (seed) out << "seed: " << *seed << '\n';
  out << "recovered_state: " << states.label(outcome.recovered_state) << '\n';
  for (std::size_t w = 0; w < outcome.distances.size(); ++w) {
    out << "distance_" << states.label(w) << ": "
        << FormatNumber(outcome.distances[w]) << '\n';
  }
  out << "match_distance: " << FormatNumber(outcome.match_distance) << '\n';
  out << "runner_up_distance: " << FormatNumber(outcome.runner_up_distance)
      << '\n';
  out << "condition_number: " << FormatNumber(outcome.condition_number) << '\n';
  out << "ill_conditioned: " << (outcome.ill_conditioned ? "true" : "false")
      << '\n';
}

}  // namespace beliefagg
