#include <gtest/gtest.h>

#include "soqn/rmfs.hpp"
#include "soqn/sweep.hpp"

namespace soqn {
namespace {

InnerNetwork inner(rmfs::StationLayout layout) {
  return rmfs::build_network(layout, rmfs::default_parameters()).inner;
}

TEST(Sweep, StabilityCurveMatchesFlowEquivalentRates) {
  const InnerNetwork net = inner(rmfs::StationLayout::TwoStationTypes);
  const auto curve = stability_curve(net, 10, 60);
  const auto fes = flow_equivalent_rates(net, 60);
  ASSERT_EQ(curve.size(), 51u);
  for (int n = 10; n <= 60; ++n) {
    EXPECT_DOUBLE_EQ(curve[static_cast<std::size_t>(n - 10)], fes.rate(n));
  }
}

TEST(Sweep, EvaluateMatchesSinglePointsInBothModes) {
  const InnerNetwork net = inner(rmfs::StationLayout::CombiStations);
  std::vector<SweepPoint> points;
  for (int n = 14; n <= 40; n += 2) {
    points.push_back({n, 0.13});
    points.push_back({n, 0.1});
  }
  const auto picks = rmfs::pick_labels();
  const auto serial =
      evaluate_sweep(net, points, picks, TurnoverDefinition::Full, Execution::Serial);
  const auto parallel =
      evaluate_sweep(net, points, picks, TurnoverDefinition::Full, Execution::Parallel);
  ASSERT_EQ(serial.size(), points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto single = evaluate(SoqnModel{net, points[k].robots, points[k].arrival_rate}, picks);
    EXPECT_EQ(serial[k].stable, single.stable);
    EXPECT_EQ(parallel[k].stable, single.stable);
    if (single.stable) {
      EXPECT_EQ(serial[k].turnover_s, single.turnover_s);
      EXPECT_EQ(parallel[k].turnover_s, single.turnover_s);
    }
  }
}

TEST(Sweep, SimulationMatchesReplicateInBothModes) {
  const InnerNetwork net = inner(rmfs::StationLayout::TwoStationTypes);
  SimConfig base;
  base.pick_labels = rmfs::pick_labels();
  base.horizon_s = 1e4;
  base.warmup_s = 1e3;
  base.replications = 3;
  const std::vector<SweepPoint> points{{18, 0.13}, {22, 0.13}, {22, 0.1}};
  const auto serial = simulate_sweep(net, points, base, Execution::Serial);
  const auto parallel = simulate_sweep(net, points, base, Execution::Parallel);
  ASSERT_EQ(serial.size(), points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    SimConfig config = base;
    config.model = SoqnModel{net, points[k].robots, points[k].arrival_rate};
    const auto direct = replicate(config, Execution::Serial);
    EXPECT_EQ(serial[k].turnover_s.mean, direct.turnover_s.mean);
    EXPECT_EQ(parallel[k].turnover_s.mean, direct.turnover_s.mean);
    EXPECT_EQ(parallel[k].turnover_s.half_width, direct.turnover_s.half_width);
  }
}

}  // namespace
}  // namespace soqn
