#include "soqn/sweep.hpp"

#include <fmt/format.h>

#include "soqn/error.hpp"
#include "soqn/parallel_for.hpp"

namespace soqn {

std::vector<double> stability_curve(const InnerNetwork& inner, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) {
    throw ConfigError(fmt::format("robot range {}..{} is empty or starts below 1", n_lo, n_hi));
  }
  const FlowEquivalentServer fes = flow_equivalent_rates(inner, n_hi);
  return {fes.rates().begin() + (n_lo - 1), fes.rates().end()};
}


std::vector<PerformanceReport> evaluate_sweep(const InnerNetwork& inner,
                                              std::span<const SweepPoint> points,
                                              std::span<const std::string> pick_labels,
                                              TurnoverDefinition definition,
                                              Execution execution) {
  std::vector<PerformanceReport> reports(points.size());
  parallel_for(points.size(), execution, [&](std::size_t i) {
    const SoqnModel model{inner, points[i].robots, points[i].arrival_rate};
    reports[i] = evaluate(model, pick_labels, definition);
  });
  return reports;
}

std::vector<ReplicationSummary> simulate_sweep(const InnerNetwork& inner,
                                               std::span<const SweepPoint> points,
                                               const SimConfig& base, Execution execution) {
  std::vector<SimConfig> configs;
  configs.reserve(points.size());
  for (const auto& p : points) {
    SimConfig c = base;
    c.model = SoqnModel{inner, p.robots, p.arrival_rate};
    validate(c);
    configs.push_back(std::move(c));
  }

  const auto reps = static_cast<std::size_t>(base.replications);
  std::vector<SimStats> runs(points.size() * reps);
  parallel_for(runs.size(), execution, [&](std::size_t k) {
    runs[k] = simulate(configs[k / reps], static_cast<int>(k % reps));
  });

  std::vector<ReplicationSummary> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.push_back(summarize(std::span<const SimStats>(runs).subspan(i * reps, reps)));
  }
  return out;
}

}  // namespace soqn
