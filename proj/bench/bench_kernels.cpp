// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wproj/ball_geometry.hpp"
#include "wproj/kernels.hpp"

namespace {

std::vector<double> coords(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <auto Kernel>
void BM_CostMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int dim = 3;
  const auto a = coords(n * dim, 1);
  const auto b = coords(n * dim, 2);
  std::vector<double> out(n * n);
  for (auto _ : state) {
    Kernel(a, b, dim, 1.3, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <auto Kernel>
void BM_CellAveragedCost(benchmark::State& state) {
  const auto grid = wproj::GridSpec::centered({0.0, 0.0}, 1.2, 0.02);
  const auto src = coords(8, 3);
  std::vector<double> out(4 * grid.cell_count());
  for (auto _ : state) {
    Kernel(src, grid, static_cast<double>(state.range(0)) / 10.0, 4, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void BM_CellHits(benchmark::State& state) {
  const double r = wproj::rad_ball(2, 0.5);
  const auto balls = wproj::BallUnionMeasure::create({{0.0, 0.0}, {2.0 * r, 0.0}}, {r, r}, 1.0);
  const auto grid = wproj::GridSpec::from_bounds({-0.5, -0.5}, {1.3, 0.5}, {180, 100});
  std::vector<std::uint32_t> out(grid.cell_count());
  for (auto _ : state) {
    Kernel(grid, balls, static_cast<int>(state.range(0)), out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void BM_ShellCount(benchmark::State& state) {
  const wproj::kernels::CylinderShell shell{0.3, 0.4, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(5, 0.8, shell, static_cast<std::uint64_t>(state.range(0)), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

using namespace wproj::kernels;

BENCHMARK(BM_CostMatrix<cost_matrix>)->Name("cost_matrix/omp")->Arg(500)->Arg(2000)->UseRealTime();
BENCHMARK(BM_CostMatrix<cost_matrix_serial>)->Name("cost_matrix/serial")->Arg(500)->Arg(2000)->UseRealTime();
BENCHMARK(BM_CellAveragedCost<cell_averaged_cost>)->Name("cell_averaged_cost/omp")->Arg(15)->Arg(20)->UseRealTime();
BENCHMARK(BM_CellAveragedCost<cell_averaged_cost_serial>)->Name("cell_averaged_cost/serial")->Arg(15)->Arg(20)->UseRealTime();
BENCHMARK(BM_CellHits<count_cell_hits>)->Name("count_cell_hits/omp")->Arg(3)->Arg(8)->UseRealTime();
BENCHMARK(BM_CellHits<count_cell_hits_serial>)->Name("count_cell_hits/serial")->Arg(3)->Arg(8)->UseRealTime();
BENCHMARK(BM_ShellCount<count_ball_samples_in_shell>)->Name("shell_count/omp")->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_ShellCount<count_ball_samples_in_shell_serial>)->Name("shell_count/serial")->Arg(1 << 20)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
