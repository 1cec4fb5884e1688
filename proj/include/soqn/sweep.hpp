#pragma once

#include <span>
#include <string>
#include <vector>

#include "soqn/approximation.hpp"
#include "soqn/execution.hpp"
#include "soqn/simulator.hpp"

namespace soqn {

/// One (robots, arrival rate) combination of a sweep.
struct SweepPoint {
  int robots = 1;
  double arrival_rate = 0.0;  // tasks per second
};

/// nu(n) for n = n_lo..n_hi from a single MVA pass up to n_hi.
std::vector<double> stability_curve(const InnerNetwork& inner, int n_lo, int n_hi);

/// Runs `evaluate` for every point. Reports come back in point order.
std::vector<PerformanceReport> evaluate_sweep(const InnerNetwork& inner,
                                              std::span<const SweepPoint> points,
                                              std::span<const std::string> pick_labels,
                                              TurnoverDefinition definition,
                                              Execution execution = Execution::Parallel);

/// Replicated simulation of every point. The (point, replication) pairs are
/// flattened into one work list on the parallel path; `base` supplies the
/// horizon, warmup, seed and replication count.
std::vector<ReplicationSummary> simulate_sweep(const InnerNetwork& inner,
                                               std::span<const SweepPoint> points,
                                               const SimConfig& base,
                                               Execution execution = Execution::Parallel);

}  // namespace soqn
