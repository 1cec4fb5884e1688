// Serial reference vs OpenMP paths of the batch kernels. Set
// OMP_NUM_THREADS to control the thread count of the parallel variants.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "soqn/rmfs.hpp"
#include "soqn/sweep.hpp"

namespace {

using soqn::Execution;

std::vector<soqn::SweepPoint> turnover_points() {
  std::vector<soqn::SweepPoint> points;
  const double lambda = soqn::rmfs::default_parameters().task_rate_per_s();
  for (int n = 17; n <= 80; ++n) {
    points.push_back({n, lambda});
  }
  return points;
}

void BM_TurnoverSweep(benchmark::State& state, Execution execution) {
  const auto model = soqn::rmfs::build_network(soqn::rmfs::StationLayout::TwoStationTypes,
                                               soqn::rmfs::default_parameters());
  const auto points = turnover_points();
  const auto picks = soqn::rmfs::pick_labels();
  for (auto _ : state) {
    auto reports = soqn::evaluate_sweep(model.inner, points, picks,
                                        soqn::TurnoverDefinition::Full, execution);
    benchmark::DoNotOptimize(reports.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points.size()));
}

void BM_Replications(benchmark::State& state, Execution execution) {
  soqn::rmfs::RmfsParameters params = soqn::rmfs::default_parameters();
  params.robots = 25;
  soqn::SimConfig config;
  config.model = soqn::rmfs::build_network(soqn::rmfs::StationLayout::CombiStations, params);
  config.pick_labels = soqn::rmfs::pick_labels();
  config.horizon_s = 1e5;
  config.warmup_s = 1e4;
  config.replications = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto runs = soqn::run_replications(config, execution);
    benchmark::DoNotOptimize(runs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_TurnoverSweep, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TurnoverSweep, openmp, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replications, serial, Execution::Serial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replications, openmp, Execution::Parallel)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
