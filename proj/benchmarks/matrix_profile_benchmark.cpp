#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ceeds/matrix_profile.hpp"

namespace {

std::vector<double> random_walk(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> step(-1.0, 1.0);
  std::vector<double> x(n);
  double v = 0.0;
  for (auto& e : x) e = (v += step(rng));
  return x;
}

void BM_Mpx(benchmark::State& state) {
  const auto x = random_walk(static_cast<std::size_t>(state.range(0)));
  constexpr std::size_t m = 35;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ceeds::mp::mpx(x, m, ceeds::mp::default_exclusion_radius(m)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Mpx)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

void BM_BruteForce(benchmark::State& state) {
  const auto x = random_walk(static_cast<std::size_t>(state.range(0)));
  constexpr std::size_t m = 35;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ceeds::mp::brute_force_profile(x, m, ceeds::mp::default_exclusion_radius(m)));
  }
}
BENCHMARK(BM_BruteForce)->RangeMultiplier(2)->Range(256, 1024);

void BM_DistanceProfile(benchmark::State& state) {
  const auto x = random_walk(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> query(x.begin() + 10, x.begin() + 45);
  for (auto _ : state) benchmark::DoNotOptimize(ceeds::mp::distance_profile(x, query));
}
BENCHMARK(BM_DistanceProfile)->Arg(600)->Arg(4096);

}  // namespace
