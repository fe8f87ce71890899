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
#include "benchmark/benchmark.h"

namespace beliefagg {
namespace {

void BM_BuildLipman(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildLipman(m));
  }
}
BENCHMARK(BM_BuildLipman)->DenseRange(2, 7);

void BM_KthOrderTypes(benchmark::State& state) {
  const LipmanPair pair = BuildLipman(5);
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(KthOrderTypes(pair.shifted, order));
  }
}
BENCHMARK(BM_KthOrderTypes)->DenseRange(1, 6);

void BM_RecoverFromHierarchy(benchmark::State& state) {
  const LipmanPair pair = BuildLipman(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RecoverFromHierarchy(pair.shifted, pair.shifted_profile));
  }
}
BENCHMARK(BM_RecoverFromHierarchy)->DenseRange(2, 5);

}  // namespace
}  // namespace beliefagg

BENCHMARK_MAIN();
