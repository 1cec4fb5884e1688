#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "soqn/execution.hpp"
#include "soqn/model.hpp"

namespace soqn {

inline constexpr double kDefaultHorizonS = 1e6;
inline constexpr int kDefaultReplications = 20;
/// Robot utilization above which a run is flagged as unreliable.
inline constexpr double kNearInstabilityUtilization = 0.97;

struct SimConfig {
  SoqnModel model;
  std::vector<std::string> pick_labels;
  double horizon_s = kDefaultHorizonS;
  double warmup_s = 0.1 * kDefaultHorizonS;
  std::uint64_t seed = 1;
  int replications = kDefaultReplications;
  /// Verify robot conservation and pool/queue synchronization after every
  /// event; throws std::logic_error on violation.
  bool check_invariants = false;
};

/// Throws ConfigError for an invalid model, unknown pick labels, or
/// inconsistent horizon/warmup/replications.
void validate(const SimConfig& config);

/// Observations over [warmup, horizon]. Task means cover tasks that arrived
/// after warmup and finished picking before the horizon.
struct SimStats {
  double mean_external_wait_s = 0.0;
  double mean_turnover_s = 0.0;
  double mean_inner_processing_s = 0.0;
  std::vector<std::pair<std::string, double>> per_node_mean_queue;  // time averages
  double mean_external_queue = 0.0;  // time-average backlog
  double robot_utilization = 0.0;    // fraction of robots outside the pool
  std::int64_t completed_tasks = 0;
  double task_throughput = 0.0;  // completed_tasks / (horizon - warmup)
  bool near_instability = false;

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

/// One replication. Replication `r` draws from keys derived from
/// (seed, r), independent of how many other replications exist.
SimStats simulate(const SimConfig& config, int replication = 0);

struct Estimate {
  double mean = 0.0;
  std::optional<double> half_width;  // 95% Student-t; empty for one replication

  double lo() const { return half_width ? mean - *half_width : mean; }
  double hi() const { return half_width ? mean + *half_width : mean; }
  bool contains(double value) const { return half_width && lo() <= value && value <= hi(); }
};

struct ReplicationSummary {
  int replications = 0;
  Estimate external_wait_s;
  Estimate turnover_s;
  Estimate inner_processing_s;
  Estimate robot_utilization;
  Estimate task_throughput;
  Estimate completed_tasks;
  std::vector<std::pair<std::string, Estimate>> per_node_mean_queue;
  bool near_instability = false;
};

/// Aggregates per-replication statistics into point estimates and 95%
/// confidence half-widths.
ReplicationSummary summarize(std::span<const SimStats> runs);

/// Runs config.replications replications (OpenMP across replications on the
/// parallel path) and summarizes them. Both paths give identical results.
ReplicationSummary replicate(const SimConfig& config, Execution execution = Execution::Parallel);

/// The raw per-replication statistics behind `replicate`.
std::vector<SimStats> run_replications(const SimConfig& config,
                                       Execution execution = Execution::Parallel);

}  // namespace soqn
