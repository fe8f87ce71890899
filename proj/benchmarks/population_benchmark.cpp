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

#include "beliefagg/fixtures.hpp"
#include "beliefagg/population.hpp"
#include "benchmark/benchmark.h"

namespace beliefagg {
namespace {

void BM_SamplePopulation(benchmark::State& state) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SamplePopulation(structure, CorrelationSpec::Iid(), n, 0, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePopulation)->Range(1 << 10, 1 << 17);

void BM_SampleBlockPopulation(benchmark::State& state) {
  const InfoStructure structure = fixtures::BinarySymmetric(0.7);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SamplePopulation(structure, CorrelationSpec::Block(5), n, 0, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBlockPopulation)->Range(1 << 10, 1 << 17);

}  // namespace
}  // namespace beliefagg

BENCHMARK_MAIN();
