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

#include <random>
#include <vector>

#include "beliefagg/aggregate.hpp"
#include "beliefagg/model.hpp"
#include "beliefagg/population.hpp"
#include "benchmark/benchmark.h"

namespace beliefagg {
namespace {

// Random structure with L states and L signals, likelihood columns drawn
// uniformly from the simplex.
InfoStructure MakeStructure(std::size_t l, std::mt19937_64& rng) {
  std::exponential_distribution<double> draw(1.0);
  Matrix likelihood(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
  for (Eigen::Index w = 0; w < likelihood.cols(); ++w) {
    for (Eigen::Index s = 0; s < likelihood.rows(); ++s) {
      likelihood(s, w) = draw(rng) + (s == w ? 1.0 : 0.0);
    }
    likelihood.col(w) /= likelihood.col(w).sum();
  }
  std::vector<std::string> labels, signals;
  for (std::size_t i = 0; i < l; ++i) {
    labels.push_back("w" + std::to_string(i + 1));
    signals.push_back("s" + std::to_string(i + 1));
  }
  return InfoStructure(StateSpace(labels), signals,
                       Vector::Constant(static_cast<Eigen::Index>(l),
                                        1.0 / static_cast<double>(l)),
                       likelihood);
}

void BM_PmbaMultiLimitInputs(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(l);
  const InfoStructure structure = MakeStructure(l, rng);
  const ExpectedBeliefMatrix means = ComputeExpectedBeliefMatrix(structure);
  const Matrix q = PosteriorMatrix(structure);
  std::vector<AgentReport> reporters;
  for (std::size_t s = 0; s < l; ++s) {
    BeliefVector mu(q.row(static_cast<Eigen::Index>(s)).transpose());
    BeliefVector alpha = TruthfulAlpha(mu, means);
    reporters.push_back({std::move(mu), std::move(alpha), std::nullopt});
  }
  const BeliefVector mean(means.column(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(PmbaMulti(mean, reporters));
  }
}
BENCHMARK(BM_PmbaMultiLimitInputs)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_ExpectedBeliefMatrix(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(l);
  const InfoStructure structure = MakeStructure(l, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeExpectedBeliefMatrix(structure));
  }
}
BENCHMARK(BM_ExpectedBeliefMatrix)->Arg(2)->Arg(8)->Arg(32);

}  // namespace
}  // namespace beliefagg

BENCHMARK_MAIN();
