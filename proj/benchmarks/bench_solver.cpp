#include <benchmark/benchmark.h>

#include "depletion/depletion.hpp"

using namespace depletion;

namespace {

Instance sized_instance(int types, int capacity, int horizon) {
  RandomFamilyParams params;
  params.max_types = types;
  params.max_capacity = capacity;
  params.max_horizon = horizon;
  params.max_activities = 6;
  // Draw until the sampled sizes hit the requested maxima.
  for (std::uint64_t seed = 0;; ++seed) {
    auto inst = random_submodular_instance(seed, params);
    if (static_cast<int>(inst.num_types()) == types && inst.horizon == horizon) {
      bool full = true;
      for (int c : inst.capacities) full = full && c == capacity;
      if (full) return inst;
    }
  }
}

void BM_SolveClairvoyant(benchmark::State& state) {
  const auto inst = sized_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(solve_clairvoyant(inst));
  state.counters["states"] = static_cast<double>(StateIndexer(inst.capacities).size());
}
BENCHMARK(BM_SolveClairvoyant)->Args({2, 2})->Args({3, 2})->Args({3, 4})->Args({4, 3})->Unit(benchmark::kMillisecond);

void BM_EvaluateMyopic(benchmark::State& state) {
  const auto inst = sized_instance(3, static_cast<int>(state.range(0)), 6);
  const auto policy = myopic_policy();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_policy_exact(inst, policy));
}
BENCHMARK(BM_EvaluateMyopic)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CheckIr(benchmark::State& state) {
  const auto inst = sized_instance(3, static_cast<int>(state.range(0)), 6);
  const auto table = solve_clairvoyant(inst);
  for (auto _ : state) benchmark::DoNotOptimize(check_ir(inst, table));
}
BENCHMARK(BM_CheckIr)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto inst = sized_instance(3, 3, 6);
  const auto policy = myopic_policy();
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_value(inst, policy, 1000, 1));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
