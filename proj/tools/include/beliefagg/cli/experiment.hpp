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

// Experiment runner behind the command-line tool: sweep configuration,
// seeded Monte Carlo trials, and the report-producing subcommands.
//
// Sweep configuration files (YAML):
//   structure: binary_symmetric.yaml   # relative to the config file
//   procedure: pmba_binary
//   correlation: iid                   # or {block: 5}
//   population_sizes: [100, 1000, 10000]
//   trials: 1000
//   seed: 7
//   half_width: 0.02                   # limited_info_pmba only
//   ambiguity_tol: auto                # or a number
//   threads: 0                         # 0 uses every hardware thread
//   output: {path: sweep.csv, format: csv}

#ifndef BELIEFAGG_CLI_EXPERIMENT_HPP_
#define BELIEFAGG_CLI_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beliefagg/hierarchy.hpp"
#include "beliefagg/model.hpp"
#include "beliefagg/population.hpp"

namespace beliefagg::cli {

enum class OutputFormat { kCsv, kKv };

OutputFormat ParseFormat(std::string_view name);
std::string_view FormatExtension(OutputFormat format);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void Add(std::vector<std::string> row);
};

// csv: header row then one line per row. kv: one `column: value` line per
// cell, rows separated by blank lines.
void WriteTable(std::ostream& out, const Table& table, OutputFormat format);

struct Report {
  Table table;
  bool passed = true;
};

enum class Procedure {
  kPmbaBinary,
  kPmbaMulti,
  kActionPmba,
  kLimitedInfoPmba,
  kSurprisinglyPopular,
};

Procedure ParseProcedure(std::string_view name);
std::string_view ProcedureName(Procedure procedure);

struct ExperimentConfig {
  std::string structure_path;
  Procedure procedure = Procedure::kPmbaBinary;
  CorrelationSpec correlation;
  std::vector<std::size_t> population_sizes;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double half_width = 0.0;
  // Unset: 3 sqrt(L/n).
  std::optional<double> ambiguity_tol;
  std::size_t threads = 0;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::kCsv;

  void Validate() const;
};

// Errors are reported as "<source>:<line>: <message>". Relative structure
// paths are resolved against `base_dir`.
ExperimentConfig ParseExperimentConfig(const std::string& text,
                                       const std::string& source = "<string>",
                                       const std::string& base_dir = "");
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Per-trial seed derived from the master seed, population size and index.
std::uint64_t TrialSeed(std::uint64_t master, std::size_t num_agents,
                        std::size_t trial);

struct TrialResult {
  std::size_t true_state = 0;
  bool recovered = false;
  // Distance to the matched column; unset for the surprisingly-popular
  // procedure and for failed trials.
  std::optional<double> match_distance;
  // Error message when the procedure threw.
  std::string error;
};

TrialResult RunTrial(const InfoStructure& structure, Procedure procedure,
                     const CorrelationSpec& correlation, std::size_t num_agents,
                     std::uint64_t seed, double half_width = 0.0,
                     std::optional<double> ambiguity_tol = std::nullopt);

struct SweepRow {
  std::size_t num_agents = 0;
  std::size_t trials = 0;
  std::size_t correct = 0;
  double recovery_rate = 0.0;
  std::optional<double> mean_match_distance;
  // Counts per error kind, in the order of SweepErrorKinds().
  std::vector<std::size_t> errors;
};

const std::vector<std::string>& SweepErrorKinds();

// Rows ordered by population size as listed in the config, independent of
// the thread count.
std::vector<SweepRow> RunSweep(const InfoStructure& structure,
                               const ExperimentConfig& config);
Report SweepReport(const std::vector<SweepRow>& rows);

// Recomputes the three-state example tables and compares them with the
// published values at `tolerance`.
Report RunExample1(double tolerance = 0.002);

// Builds the order-m model pair and checks that hierarchies agree to order m
// while the pooled posteriors are (1/2, 1/2) and (0, 1).
Report RunLipman(std::size_t order);

Report RunAssumptions(const InfoStructure& structure, double delta);

// Recovery from reported hierarchies at every positive-mass profile,
// compared with direct conditioning.
Report RunRecover(const PartitionModel& model);

}  // namespace beliefagg::cli

#endif  // BELIEFAGG_CLI_EXPERIMENT_HPP_
