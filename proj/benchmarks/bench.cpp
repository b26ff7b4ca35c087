#include <benchmark/benchmark.h>

#include <cstdint>

#include "droplin/eig.hpp"
#include "droplin/equalize.hpp"
#include "droplin/generate.hpp"
#include "droplin/matrix.hpp"
#include "droplin/rng.hpp"
#include "droplin/sgd.hpp"
#include "droplin/solver.hpp"
#include "droplin/svd.hpp"
#include "droplin/verify.hpp"

using droplin::DenseMatrix;

namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  droplin::SplitMix64 g(seed);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = g.next_gaussian();
  return m;
}

DenseMatrix psd(std::size_t d, std::uint64_t seed) {
  const DenseMatrix b = gaussian(d, d, seed);
  return droplin::multiply_a_bt(b, b);
}

}  // namespace

static void BM_sym_eig(benchmark::State& state) {
  const DenseMatrix m = psd(std::size_t(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(droplin::sym_eig(m));
}
BENCHMARK(BM_sym_eig)->Arg(16)->Arg(48);

static void BM_svd_compact(benchmark::State& state) {
  const DenseMatrix m =
      gaussian(std::size_t(state.range(0)), std::size_t(state.range(1)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(droplin::svd_compact(m));
}
BENCHMARK(BM_svd_compact)->Args({24, 16})->Args({64, 40});

static void BM_eqz(benchmark::State& state) {
  const DenseMatrix u = gaussian(200, std::size_t(state.range(0)), 13);
  for (auto _ : state) benchmark::DoNotOptimize(droplin::eqz(u));
}
BENCHMARK(BM_eqz)->Arg(8)->Arg(16);

static void BM_solve_general(benchmark::State& state) {
  const DenseMatrix m = gaussian(48, 32, 14);
  for (auto _ : state)
    benchmark::DoNotOptimize(droplin::solve_general(m, 16, 0.5));
}
BENCHMARK(BM_solve_general);

static void BM_sgd_steps(benchmark::State& state) {
  const DenseMatrix m = droplin::generated_instance(30, 20, 0.0, 2026);
  droplin::SgdConfig cfg;
  cfg.eta = 1e-2;
  cfg.steps = 2000;
  cfg.seed = 1;
  cfg.theta = 2.0 / 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(droplin::dropout_sgd(m, 5, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_sgd_steps);

static void BM_landscape_grid(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        droplin::landscape_grid(2.0, 0.6, -2.0, 2.0, 256));
}
BENCHMARK(BM_landscape_grid);

BENCHMARK_MAIN();
