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

// beliefagg: experiment runner.
//
//   beliefagg example1 [--tolerance 0.002]
//   beliefagg sweep --config sweep.yaml [--seed N] [--trials N]
//   beliefagg lipman --order 3
//   beliefagg assumptions --config structure.yaml [--delta 0.05]
//   beliefagg recover --config model.yaml
//
// Every subcommand accepts --out and --format {csv,kv}. Without --out,
// output goes to $BELIEFAGG_OUTPUT_DIR/<subcommand>.<ext> when that variable
// is set, and to stdout otherwise. Exit status is 1 when a check fails and
// 2 on invalid input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "beliefagg/cli/experiment.hpp"
#include "beliefagg/error.hpp"
#include "beliefagg/io.hpp"

namespace {

using beliefagg::cli::OutputFormat;
using beliefagg::cli::Report;

struct CommonOptions {
  std::string out;
  std::string format;
};

void AddCommon(CLI::App* command, CommonOptions& options) {
  command->add_option("--out", options.out, "Output file");
  command->add_option("--format", options.format, "csv or kv")
      ->check(CLI::IsMember({"csv", "kv"}));
}

int Emit(const std::string& name, const Report& report,
         const CommonOptions& options,
         std::optional<std::string> config_path = std::nullopt,
         OutputFormat config_format = OutputFormat::kCsv) {
  const OutputFormat format = options.format.empty()
                                  ? config_format
                                  : beliefagg::cli::ParseFormat(options.format);
  std::optional<std::filesystem::path> path;
  if (!options.out.empty()) {
    path = options.out;
  } else if (config_path) {
    path = *config_path;
  } else if (const char* dir = std::getenv("BELIEFAGG_OUTPUT_DIR");
             dir != nullptr && *dir != '\0') {
    path = std::filesystem::path(dir) /
           (name + "." + std::string(beliefagg::cli::FormatExtension(format)));
  }
  if (path) {
    if (path->has_parent_path()) {
      std::filesystem::create_directories(path->parent_path());
    }
    std::ofstream file(*path);
    if (!file) throw beliefagg::Error("cannot write '" + path->string() + "'");
    beliefagg::cli::WriteTable(file, report.table, format);
  } else {
    beliefagg::cli::WriteTable(std::cout, report.table, format);
  }
  std::cerr << name << ": " << (report.passed ? "PASS" : "FAIL") << '\n';
  return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief aggregation experiments"};
  app.require_subcommand(1);

  CommonOptions example1_options;
  double tolerance = 0.002;
  auto* example1 = app.add_subcommand(
      "example1", "Reproduce the three-state example tables");
  example1->add_option("--tolerance", tolerance, "Per-entry tolerance")
      ->check(CLI::NonNegativeNumber);
  AddCommon(example1, example1_options);

  CommonOptions sweep_options;
  std::string sweep_config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  auto* sweep = app.add_subcommand("sweep", "Seeded Monte Carlo sweep");
  sweep->add_option("--config", sweep_config, "Sweep configuration")
      ->required();
  sweep->add_option("--seed", seed, "Master seed");
  sweep->add_option("--trials", trials, "Trials per population size");
  sweep->add_option("--threads", threads, "Worker threads (0 = all)");
  AddCommon(sweep, sweep_options);

  CommonOptions lipman_options;
  std::size_t order = 2;
  auto* lipman = app.add_subcommand(
      "lipman", "Hierarchies that agree to an order but pool differently");
  lipman->add_option("-m,--order", order, "Agreement order (>= 2)");
  AddCommon(lipman, lipman_options);

  CommonOptions assumptions_options;
  std::string structure_path;
  double delta = 0.05;
  auto* assumptions = app.add_subcommand(
      "assumptions", "Check an information structure's assumptions");
  assumptions->add_option("--config", structure_path, "Structure file")
      ->required();
  assumptions->add_option("--delta", delta, "Minimal-information bound");
  AddCommon(assumptions, assumptions_options);

  CommonOptions recover_options;
  std::string model_path;
  auto* recover = app.add_subcommand(
      "recover", "Recover pooled posteriors from full hierarchies");
  recover->add_option("--config", model_path, "Partition-model file")
      ->required();
  AddCommon(recover, recover_options);

  CLI11_PARSE(app, argc, argv);

  try {
    if (example1->parsed()) {
      return Emit("example1", beliefagg::cli::RunExample1(tolerance),
                  example1_options);
    }
    if (sweep->parsed()) {
      auto config = beliefagg::cli::LoadExperimentConfig(sweep_config);
      if (seed) config.seed = *seed;
      if (trials) config.trials = *trials;
      if (threads) config.threads = *threads;
      const auto structure = beliefagg::LoadStructure(config.structure_path);
      const auto rows = beliefagg::cli::RunSweep(structure, config);
      return Emit("sweep", beliefagg::cli::SweepReport(rows), sweep_options,
                  config.output_path, config.format);
    }
    if (lipman->parsed()) {
      return Emit("lipman", beliefagg::cli::RunLipman(order), lipman_options);
    }
    if (assumptions->parsed()) {
      return Emit("assumptions",
                  beliefagg::cli::RunAssumptions(
                      beliefagg::LoadStructure(structure_path), delta),
                  assumptions_options);
    }
    if (recover->parsed()) {
      return Emit(
          "recover",
          beliefagg::cli::RunRecover(beliefagg::LoadPartitionModel(model_path)),
          recover_options);
    }
  } catch (const beliefagg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
