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

#include "beliefagg/cli/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "beliefagg/aggregate.hpp"
#include "beliefagg/error.hpp"
#include "beliefagg/fixtures.hpp"
#include "beliefagg/io.hpp"

namespace beliefagg::cli {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string Bool(bool value) { return value ? "true" : "false"; }

std::string Status(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string StateSet(const std::vector<std::size_t>& states,
                     const std::optional<std::size_t>& most,
                     const StateSpace& names) {
  std::string text = "{";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) text += ' ';
    text += names.label(states[i]);
  }
  text += '}';
  if (most && states.size() > 1) text += " most " + names.label(*most);
  return text;
}

std::string Distribution(const std::vector<Rational>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text += ' ';
    text += FormatRational(values[i]);
  }
  return text;
}

[[noreturn]] void Fail(const std::string& source, const YAML::Node& node,
                       const std::string& message) {
  std::ostringstream out;
  out << source << ':';
  if (node.IsDefined() && node.Mark().line >= 0) {
    out << node.Mark().line + 1 << ": ";
  } else {
    out << ' ';
  }
  out << message;
  throw Error(out.str());
}

template <typename T>
T Scalar(const std::string& source, const YAML::Node& node,
         const std::string& what) {
  if (!node.IsScalar()) Fail(source, node, what + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    Fail(source, node,
         "invalid value '" + node.as<std::string>() + "' for " + what);
  }
}

std::size_t Count(const std::string& source, const YAML::Node& node,
                  const std::string& what) {
  const auto value = Scalar<long long>(source, node, what);
  if (value < 0) Fail(source, node, what + " must be nonnegative");
  return static_cast<std::size_t>(value);
}

}  // namespace

OutputFormat ParseFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "kv") return OutputFormat::kKv;
  throw Error("unknown output format '" + std::string(name) +
              "' (expected csv or kv)");
}

std::string_view FormatExtension(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "txt";
}

void Table::Add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error("table row has wrong width");
  rows.push_back(std::move(row));
}

void WriteTable(std::ostream& out, const Table& table, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c > 0 ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c > 0 ? "," : "") << row[c];
      }
      out << '\n';
    }
    return;
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (r > 0) out << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << table.columns[c] << ": " << table.rows[r][c] << '\n';
    }
  }
}

Procedure ParseProcedure(std::string_view name) {
  for (Procedure p :
       {Procedure::kPmbaBinary, Procedure::kPmbaMulti, Procedure::kActionPmba,
        Procedure::kLimitedInfoPmba, Procedure::kSurprisinglyPopular}) {
    if (ProcedureName(p) == name) return p;
  }
  throw Error("unknown procedure '" + std::string(name) + "'");
}

std::string_view ProcedureName(Procedure procedure) {
  switch (procedure) {
    case Procedure::kPmbaBinary:
      return "pmba_binary";
    case Procedure::kPmbaMulti:
      return "pmba_multi";
    case Procedure::kActionPmba:
      return "action_pmba";
    case Procedure::kLimitedInfoPmba:
      return "limited_info_pmba";
    case Procedure::kSurprisinglyPopular:
      return "surprisingly_popular";
  }
  return "";
}

void ExperimentConfig::Validate() const {
  if (trials < 1) throw Error("trials must be at least 1");
  if (population_sizes.empty()) throw Error("population_sizes is empty");
  for (std::size_t n : population_sizes) {
    if (n < 1) throw Error("population sizes must be positive");
  }
  if (!(half_width >= 0.0)) throw Error("half_width must be nonnegative");
  if (ambiguity_tol && !(*ambiguity_tol >= 0.0)) {
    throw Error("ambiguity_tol must be nonnegative");
  }
  correlation.Validate();
}

ExperimentConfig ParseExperimentConfig(const std::string& text,
                                       const std::string& source,
                                       const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) Fail(source, root, "config must be a mapping");

  ExperimentConfig config;
  bool have_structure = false, have_sizes = false;
  for (const auto& entry : root) {
    const std::string key = entry.first.as<std::string>();
    const YAML::Node value = entry.second;
    if (key == "structure") {
      std::filesystem::path path = Scalar<std::string>(source, value, key);
      if (path.is_relative() && !base_dir.empty()) {
        path = std::filesystem::path(base_dir) / path;
      }
      config.structure_path = path.string();
      have_structure = true;
    } else if (key == "procedure") {
      try {
        config.procedure =
            ParseProcedure(Scalar<std::string>(source, value, key));
      } catch (const Error& e) {
        Fail(source, value, e.what());
      }
    } else if (key == "correlation") {
      if (value.IsScalar() && value.as<std::string>() == "iid") {
        config.correlation = CorrelationSpec::Iid();
      } else if (value.IsMap() && value.size() == 1 && value["block"]) {
        config.correlation =
            CorrelationSpec::Block(Count(source, value["block"], "block"));
      } else {
        Fail(source, value, "correlation must be 'iid' or {block: <size>}");
      }
      try {
        config.correlation.Validate();
      } catch (const Error& e) {
        Fail(source, value, e.what());
      }
    } else if (key == "population_sizes") {
      if (!value.IsSequence())
        Fail(source, value, "population_sizes must be a list");
      for (const auto& item : value) {
        const std::size_t n = Count(source, item, "population size");
        if (n < 1) Fail(source, item, "population sizes must be positive");
        config.population_sizes.push_back(n);
      }
      if (config.population_sizes.empty()) {
        Fail(source, value, "population_sizes is empty");
      }
      have_sizes = true;
    } else if (key == "trials") {
      config.trials = Count(source, value, key);
      if (config.trials < 1) Fail(source, value, "trials must be at least 1");
    } else if (key == "seed") {
      config.seed = Scalar<std::uint64_t>(source, value, key);
    } else if (key == "half_width") {
      config.half_width = Scalar<double>(source, value, key);
      if (!(config.half_width >= 0.0)) {
        Fail(source, value, "half_width must be nonnegative");
      }
    } else if (key == "ambiguity_tol") {
      if (value.IsScalar() && value.as<std::string>() == "auto") {
        config.ambiguity_tol.reset();
      } else {
        config.ambiguity_tol = Scalar<double>(source, value, key);
        if (!(*config.ambiguity_tol >= 0.0)) {
          Fail(source, value, "ambiguity_tol must be nonnegative");
        }
      }
    } else if (key == "threads") {
      config.threads = Count(source, value, key);
    } else if (key == "output") {
      if (!value.IsMap()) Fail(source, value, "output must be a mapping");
      for (const auto& field : value) {
        const std::string name = field.first.as<std::string>();
        if (name == "path") {
          config.output_path = Scalar<std::string>(source, field.second, name);
        } else if (name == "format") {
          try {
            config.format =
                ParseFormat(Scalar<std::string>(source, field.second, name));
          } catch (const Error& e) {
            Fail(source, field.second, e.what());
          }
        } else {
          Fail(source, field.first, "unknown output key '" + name + "'");
        }
      }
    } else {
      Fail(source, entry.first, "unknown key '" + key + "'");
    }
  }
  if (!have_structure) Fail(source, root, "missing key 'structure'");
  if (!have_sizes) Fail(source, root, "missing key 'population_sizes'");
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(
      buffer.str(), path, std::filesystem::path(path).parent_path().string());
}

std::uint64_t TrialSeed(std::uint64_t master, std::size_t num_agents,
                        std::size_t trial) {
  const auto n = static_cast<std::uint64_t>(num_agents);
  const auto t = static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(n),
                    static_cast<std::uint32_t>(n >> 32),
                    static_cast<std::uint32_t>(t),
                    static_cast<std::uint32_t>(t >> 32),
                    static_cast<std::uint32_t>(StreamPurpose::kTrialSeed)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

TrialResult RunTrial(const InfoStructure& structure, Procedure procedure,
                     const CorrelationSpec& correlation, std::size_t num_agents,
                     std::uint64_t seed, double half_width,
                     std::optional<double> ambiguity_tol) {
  const std::size_t num_states = structure.num_states();
  PopulationDraw draw =
      SamplePopulation(structure, correlation, num_agents, std::nullopt, seed);
  TrialResult result;
  result.true_state = draw.true_state;
  MatchOptions options;
  options.ambiguity_tol =
      ambiguity_tol.value_or(MonteCarloAmbiguity(num_states, num_agents));
  try {
    std::optional<AggregationOutcome> outcome;
    switch (procedure) {
      case Procedure::kPmbaBinary:
      case Procedure::kPmbaMulti: {
        const auto reporters =
            SelectReporters(draw.reports, num_states, options.rank_tol);
        AttachTruthfulAlphas(draw, structure, reporters);
        outcome =
            procedure == Procedure::kPmbaBinary
                ? PmbaBinary(draw.reports, reporters[0], reporters[1], options)
                : PmbaMulti(draw.reports, reporters, options);
        break;
      }
      case Procedure::kActionPmba: {
        AttachVotes(draw);
        const auto [a, b] = SelectOppositeVoters(draw.reports);
        const std::size_t pair[] = {a, b};
        AttachExpectedVoteShares(draw, structure, pair);
        outcome = ActionPmba(draw.reports, a, b, options);
        break;
      }
      case Procedure::kLimitedInfoPmba:
        AttachMisspecifiedAlphas(draw, ComputeExpectedBeliefMatrix(structure),
                                 MisspecSpec{half_width, true}, seed);
        outcome = LimitedInfoPmba(draw.reports, options);
        break;
      case Procedure::kSurprisinglyPopular: {
        const BeliefVector alpha =
            TruthfulAlpha(draw.reports.front().first_order,
                          ComputeExpectedBeliefMatrix(structure));
        result.recovered = SurprisinglyPopular(PopulationMean(draw.reports),
                                               alpha) == draw.true_state;
        return result;
      }
    }
    result.recovered = outcome->recovered_state == draw.true_state;
    result.match_distance = outcome->match_distance;
  } catch (const Error& e) {
    result.error = e.what();
  }
  return result;
}

const std::vector<std::string>& SweepErrorKinds() {
  static const std::vector<std::string> kinds = {"ambiguous state match",
                                                 "degenerate reporter pair",
                                                 "rank-deficient population",
                                                 "herding detected",
                                                 "degenerate grouping",
                                                 "no surprise",
                                                 "other"};
  return kinds;
}

std::vector<SweepRow> RunSweep(const InfoStructure& structure,
                               const ExperimentConfig& config) {
  config.Validate();
  if (config.half_width > 0.0 &&
      config.procedure == Procedure::kLimitedInfoPmba) {
    CheckMisspecGuard(ComputeExpectedBeliefMatrix(structure),
                      MisspecSpec{config.half_width, true});
  }
  const std::size_t num_threads = std::max<std::size_t>(
      1, std::min<std::size_t>(config.threads > 0
                                   ? config.threads
                                   : std::thread::hardware_concurrency(),
                               config.trials));
  const auto& kinds = SweepErrorKinds();
  std::vector<SweepRow> rows;
  for (std::size_t n : config.population_sizes) {
    std::vector<TrialResult> results(config.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t t = next++; t < config.trials; t = next++) {
        results[t] = RunTrial(structure, config.procedure, config.correlation,
                              n, TrialSeed(config.seed, n, t),
                              config.half_width, config.ambiguity_tol);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < num_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& thread : pool) thread.join();

    SweepRow row;
    row.num_agents = n;
    row.trials = config.trials;
    row.errors.assign(kinds.size(), 0);
    double distance_total = 0.0;
    std::size_t distance_count = 0;
    for (const auto& result : results) {
      if (result.recovered) ++row.correct;
      if (result.match_distance) {
        distance_total += *result.match_distance;
        ++distance_count;
      }
      if (!result.error.empty()) {
        auto it = std::find(kinds.begin(), kinds.end() - 1, result.error);
        ++row.errors[static_cast<std::size_t>(it - kinds.begin())];
      }
    }
    row.recovery_rate =
        static_cast<double>(row.correct) / static_cast<double>(row.trials);
    if (distance_count > 0) {
      row.mean_match_distance =
          distance_total / static_cast<double>(distance_count);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Report SweepReport(const std::vector<SweepRow>& rows) {
  Report report;
  report.table.columns = {"n", "trials", "correct", "recovery_rate",
                          "mean_match_distance"};
  for (const auto& kind : SweepErrorKinds()) {
    std::string column = "errors_" + kind;
    std::replace(column.begin(), column.end(), ' ', '_');
    std::replace(column.begin(), column.end(), '-', '_');
    report.table.columns.push_back(column);
  }
  for (const auto& row : rows) {
    std::vector<std::string> cells = {
        std::to_string(row.num_agents), std::to_string(row.trials),
        std::to_string(row.correct), FormatNumber(row.recovery_rate),
        row.mean_match_distance ? FormatNumber(*row.mean_match_distance)
                                : "na"};
    for (std::size_t count : row.errors) cells.push_back(std::to_string(count));
    report.table.Add(std::move(cells));
  }
  return report;
}

Report RunExample1(double tolerance) {
  const InfoStructure structure = fixtures::ThreeStateExample();
  const StateSpace& states = structure.states();
  const ExpectedBeliefMatrix means = ComputeExpectedBeliefMatrix(structure);
  const Matrix published_means = fixtures::ThreeStatePublishedMeans();
  const Matrix published_alpha = fixtures::ThreeStatePublishedAlpha();

  Report report;
  report.table.columns = {"check", "item", "expected", "computed", "status"};
  auto add = [&](std::string check, std::string item, std::string expected,
                 std::string computed, bool pass) {
    report.passed = report.passed && pass;
    report.table.Add({std::move(check), std::move(item), std::move(expected),
                      std::move(computed), Status(pass)});
  };

  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double expected = published_means(Idx(i), Idx(j));
      const double computed = means(i, j);
      add("mu_bar", states.label(i) + "|" + states.label(j),
          FormatNumber(expected), FormatNumber(computed),
          std::abs(expected - computed) <= tolerance);
    }
  }
  for (std::size_t s = 0; s < 3; ++s) {
    const BeliefVector alpha = ExpectedAlpha(structure, s);
    for (std::size_t i = 0; i < 3; ++i) {
      const double expected = published_alpha(Idx(i), Idx(s));
      add("alpha", states.label(i) + "|" + structure.signals()[s],
          FormatNumber(expected), FormatNumber(alpha[i]),
          std::abs(expected - alpha[i]) <= tolerance);
    }
  }
  const auto grid = fixtures::ThreeStatePublishedSpGrid();
  for (std::size_t s = 0; s < 3; ++s) {
    const BeliefVector alpha = ExpectedAlpha(structure, s);
    for (std::size_t w = 0; w < 3; ++w) {
      const SpVerdict verdict = SpSets(BeliefVector(means.column(w)), alpha);
      const auto& cell = grid[s][w];
      const bool pass = verdict.sp_states == cell.sp_states &&
                        (!cell.most_surprising ||
                         verdict.most_surprising == cell.most_surprising);
      add("sp_set", structure.signals()[s] + "|" + states.label(w),
          StateSet(cell.sp_states, cell.most_surprising, states),
          StateSet(verdict.sp_states, verdict.most_surprising, states), pass);
    }
  }
  const Vector votes = VoteShareMatrix(structure).col(0);
  const Vector scores =
      PredictionNormalizedVotes(votes, PredictedVoteMatrix(structure));
  add("pnv", "score(w2) > score(w1) at w1", "true",
      FormatNumber(scores[1]) + " > " + FormatNumber(scores[0]),
      scores[1] > scores[0]);
  return report;
}

Report RunLipman(std::size_t order) {
  const LipmanPair pair = BuildLipman(order);
  const bool equal = HierarchiesEqualUpTo(
      pair.base, pair.base_profile, pair.shifted, pair.shifted_profile, order);
  const auto depth = AgreementDepth(pair.base, pair.base_profile, pair.shifted,
                                    pair.shifted_profile);
  const auto base_posterior =
      ExactFullInfoPosterior(pair.base, pair.base_profile);
  const auto shifted_posterior =
      ExactFullInfoPosterior(pair.shifted, pair.shifted_profile);
  const auto [mirror, mirror_profile] = BuildLipmanMirror(pair);
  const bool mirror_equal = HierarchiesEqualUpTo(pair.base, pair.base_profile,
                                                 mirror, mirror_profile, order);
  const auto mirror_posterior = ExactFullInfoPosterior(mirror, mirror_profile);

  const std::vector<Rational> half = {Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> second = {Rational(0), Rational(1)};
  const std::vector<Rational> first = {Rational(1), Rational(0)};
  Report report;
  report.passed = equal && depth.has_value() && *depth >= order &&
                  base_posterior == half && shifted_posterior == second &&
                  mirror_equal && mirror_posterior == first;
  report.table.columns = {"item", "value"};
  report.table.Add({"requested_order", std::to_string(order)});
  report.table.Add(
      {"construction_order", std::to_string(pair.construction_order)});
  report.table.Add({"x", FormatRational(pair.x)});
  report.table.Add(
      {"base_ground_states", std::to_string(pair.base.num_ground_states())});
  report.table.Add({"shifted_ground_states",
                    std::to_string(pair.shifted.num_ground_states())});
  report.table.Add({"hierarchies_equal_up_to_order", Bool(equal)});
  report.table.Add(
      {"agreement_depth", depth ? std::to_string(*depth) : "unbounded"});
  report.table.Add({"base_posterior", Distribution(base_posterior)});
  report.table.Add({"shifted_posterior", Distribution(shifted_posterior)});
  report.table.Add({"mirror_equal_up_to_order", Bool(mirror_equal)});
  report.table.Add({"mirror_posterior", Distribution(mirror_posterior)});
  report.table.Add({"identification_failure", Bool(report.passed)});
  return report;
}

Report RunAssumptions(const InfoStructure& structure, double delta) {
  const AssumptionReport checked = CheckAssumptions(structure, delta);
  bool continuous = true;
  for (const auto& row : checked.mutually_continuous) {
    for (bool value : row) continuous = continuous && value;
  }
  Report report;
  report.passed = checked.satisfied();
  report.table.columns = {"item", "value"};
  report.table.Add({"states", std::to_string(structure.num_states())});
  report.table.Add({"signals", std::to_string(structure.num_signals())});
  report.table.Add({"mutually_continuous", Bool(continuous)});
  report.table.Add({"informative", Bool(checked.informative)});
  report.table.Add({"delta", FormatNumber(delta)});
  report.table.Add({"min_tv_distance", FormatNumber(checked.min_tv_distance)});
  report.table.Add(
      {"minimal_information", Bool(checked.minimal_information())});
  report.table.Add({"distinct_means", FormatNumber(checked.distinct_means)});
  report.table.Add({"posterior_rank", std::to_string(checked.posterior_rank)});
  report.table.Add({"full_rank", Bool(checked.full_rank())});
  report.table.Add({"satisfied", Bool(report.passed)});
  return report;
}

Report RunRecover(const PartitionModel& model) {
  const FullHierarchies hierarchies(model);
  Report report;
  report.table.columns = {"profile", "status", "recovered", "direct", "match"};
  std::vector<CellProfile> profiles = {{}};
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    std::vector<CellProfile> next;
    for (const auto& prefix : profiles) {
      for (std::size_t c = 0; c < model.partition(i).size(); ++c) {
        if (model.cell_mass(i, c) == 0) continue;
        CellProfile extended = prefix;
        extended.push_back(c);
        next.push_back(std::move(extended));
      }
    }
    profiles = std::move(next);
  }
  for (const CellProfile& profile : profiles) {
    std::string label;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      label += (i > 0 ? "/" : "") + std::string("c") +
               std::to_string(profile[i] + 1);
    }
    std::vector<Rational> direct;
    try {
      direct = ExactFullInfoPosterior(model, profile);
    } catch (const Error&) {
      continue;
    }
    std::vector<std::size_t> reported;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      reported.push_back(hierarchies.type_of(i, profile[i]));
    }
    try {
      const RecoveryResult result =
          RecoverFromHierarchy(model, hierarchies, reported);
      const bool match = result.exact_posterior == direct &&
                         result.identified_profile == profile;
      report.passed = report.passed && match;
      report.table.Add({label, "recovered",
                        Distribution(result.exact_posterior),
                        Distribution(direct), Bool(match)});
    } catch (const Error& e) {
      report.table.Add({label, e.what(), "na", Distribution(direct), "na"});
    }
  }
  return report;
}

}  // namespace beliefagg::cli
