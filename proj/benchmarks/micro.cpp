// Copyright 2026 The fibbraid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fibbraid/baselines.hpp"
#include "fibbraid/search.hpp"
#include "fibbraid/two_qubit.hpp"

namespace fb = fibbraid;

namespace {

const fb::GateSet& gates() {
  static const fb::GateSet g = fb::fibonacci_gateset();
  return g;
}

std::vector<fb::UnitQuaternion> states(std::size_t n) {
  std::vector<fb::UnitQuaternion> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(fb::unitary_to_quaternion(fb::random_su2(i)));
  return out;
}

void BM_QuaternionDistance(benchmark::State& st) {
  const auto s = states(256);
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(fb::quaternion_distance(s[i & 255], s[(i + 1) & 255]));
    ++i;
  }
}
BENCHMARK(BM_QuaternionDistance);

void BM_ApplyAction(benchmark::State& st) {
  fb::UnitQuaternion q;
  int k = 0;
  for (auto _ : st) {
    q = fb::apply_action(q, fb::kAllActions[k++ & 3], gates());
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_ApplyAction);

void BM_ForwardDesk(benchmark::State& st) {
  fb::MLPNetwork net(fb::NetworkSpec::desk_scale());
  net.initialize(1);
  net.set_mode(fb::Mode::Eval);
  const auto s = states(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(net.forward(s));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ForwardDesk)->Arg(1)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& st) {
  const fb::Unitary2 t = fb::random_su2(3);
  for (auto _ : st)
    benchmark::DoNotOptimize(fb::bruteforce_compile(t, static_cast<int>(st.range(0)), std::nullopt, gates()));
}
BENCHMARK(BM_BruteForce)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_SearchBfsHeuristic(benchmark::State& st) {
  static const fb::BfsTable table = fb::BfsTable::build(8, gates());
  const fb::BfsCostToGo h(table);
  fb::SearchConfig cfg;
  cfg.D_max = static_cast<int>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(fb::search(fb::random_su2(seed++), h, gates(), cfg));
}
BENCHMARK(BM_SearchBfsHeuristic)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_KakDecompose(benchmark::State& st) {
  const fb::Unitary4 u = fb::random_su4(5);
  for (auto _ : st) benchmark::DoNotOptimize(fb::kak_decompose(u));
}
BENCHMARK(BM_KakDecompose)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
