// Serial reference kernels against their OpenMP counterparts, plus the full
// FRS / ALRS steps they feed. Run with OMP_NUM_THREADS set to compare.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "efk/flows.hpp"
#include "efk/kernels.hpp"
#include "efk/lowrank.hpp"
#include "efk/problems.hpp"

namespace {

namespace k = efk::kernels;

std::vector<double> random_values(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v)
    x = dist(rng);
  return v;
}

template <bool Parallel>
void BM_NonlinearFlow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0) * state.range(0));
  const auto in = random_values(n);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::parallel::nonlinear_flow(in, out, 0.01);
    else
      k::serial::nonlinear_flow(in, out, 0.01);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void BM_LaplacianStencil(benchmark::State& state) {
  const long rows = state.range(0);
  const auto in = random_values(static_cast<std::size_t>(rows * rows));
  std::vector<double> out(in.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      k::parallel::laplacian_stencil(in, out, rows, 0.1, 0.1);
    else
      k::serial::laplacian_stencil(in, out, rows, 0.1, 0.1);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * rows * rows);
}

template <bool Parallel>
void BM_EnergySum(benchmark::State& state) {
  const long rows = state.range(0);
  const auto w = random_values(static_cast<std::size_t>(rows * rows));
  const auto lap = random_values(w.size());
  for (auto _ : state) {
    double e = Parallel ? k::parallel::energy_density_sum(w, lap, rows, 0.01)
                        : k::serial::energy_density_sum(w, lap, rows, 0.01);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * rows * rows);
}

template <bool Parallel>
void BM_ExpMultiplier(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0) * state.range(0));
  auto eig = random_values(n);
  for (double& x : eig)
    x = -std::abs(x) * 100.0;
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::parallel::exp_multiplier(eig, 0.01, out);
    else
      k::serial::exp_multiplier(eig, 0.01, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_FrsStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = efk::build_grid(0, 32, 0, 32, n, n);
  const efk::SpectrumTables spec(grid, 0.01);
  efk::Field u = efk::example1_initial(grid);
  for (auto _ : state) {
    u = efk::frs_step(u, 1.0 / 128, spec);
    benchmark::DoNotOptimize(u.values.data());
  }
}

void BM_AlrsStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = efk::build_grid(0, 32, 0, 32, n, n);
  const efk::SpectrumTables spec(grid, 0.01);
  efk::LowRankState x = efk::truncate_fixed(efk::example1_initial(grid), 4);
  const efk::TruncationPolicy policy;
  for (auto _ : state) {
    x = efk::alrs_step(x, 1.0 / 128, spec, policy);
    benchmark::DoNotOptimize(x.core.data());
  }
  state.counters["rank"] = x.rank();
}

}  // namespace

BENCHMARK(BM_NonlinearFlow<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_NonlinearFlow<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_LaplacianStencil<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_LaplacianStencil<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_EnergySum<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_EnergySum<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_ExpMultiplier<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_ExpMultiplier<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_FrsStep)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlrsStep)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
