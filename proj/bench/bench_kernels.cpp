// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the pool.

#include <benchmark/benchmark.h>

#include <cmath>

#include "mmnoma/array.hpp"
#include "mmnoma/beamformer.hpp"
#include "mmnoma/channel_gen.hpp"
#include "mmnoma/evaluation.hpp"

using namespace mmnoma;

namespace {

BeamformingRequest sweep_request(int n, int phases) {
  return {steering_vector(n, -0.7), steering_vector(n, 0.5), 0.6 * std::sqrt(double(n)), phases,
          kDefaultSolverTol};
}

void BM_Sweep_Serial(benchmark::State& state) {
  const auto req = sweep_request(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(reference::solve_cm_beamforming(req));
}

void BM_Sweep_Parallel(benchmark::State& state) {
  const auto req = sweep_request(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cm_beamforming(req));
}

void BM_GainMonteCarlo_Serial(benchmark::State& state) {
  GainTrialConfig cfg;
  cfg.num_antennas = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_monte_carlo(cfg, 200, 1));
}

void BM_GainMonteCarlo_Parallel(benchmark::State& state) {
  GainTrialConfig cfg;
  cfg.num_antennas = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(cfg, 200, 1));
}

RateTrialConfig rate_config() {
  RateTrialConfig cfg;
  cfg.params.max_power = std::pow(10.0, 2.5);
  cfg.params.min_rate1 = cfg.params.min_rate2 = 2.0;
  cfg.user1 = los_scenario(32, 4, 1.0);
  cfg.user2 = los_scenario(32, 4, 0.3);
  return cfg;
}

void BM_RateMonteCarlo_Serial(benchmark::State& state) {
  const auto cfg = rate_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_monte_carlo(cfg, 200, 1));
}

void BM_RateMonteCarlo_Parallel(benchmark::State& state) {
  const auto cfg = rate_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(cfg, 200, 1));
}

void BM_BeamPattern_Serial(benchmark::State& state) {
  Rng rng(RngSeed{1});
  std::vector<Complex> w(64);
  for (auto& x : w) x = rng.unit_phase() / 8.0;
  const ComplexVector v(w);
  const auto grid = uniform_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::beam_pattern(v, grid));
}

void BM_BeamPattern_Parallel(benchmark::State& state) {
  Rng rng(RngSeed{1});
  std::vector<Complex> w(64);
  for (auto& x : w) x = rng.unit_phase() / 8.0;
  const ComplexVector v(w);
  const auto grid = uniform_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(beam_pattern(v, grid));
}

void BM_BruteForce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a1 = steering_vector(n, -0.3);
  const auto a2 = steering_vector(n, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_beamformer(a1, a2, 1.0, 64));
}

}  // namespace

BENCHMARK(BM_Sweep_Serial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_Sweep_Parallel)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_GainMonteCarlo_Serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GainMonteCarlo_Parallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateMonteCarlo_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateMonteCarlo_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BeamPattern_Serial)->Arg(1001)->Arg(10001);
BENCHMARK(BM_BeamPattern_Parallel)->Arg(1001)->Arg(10001);
BENCHMARK(BM_BruteForce)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
