#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "soqn/closed_network.hpp"
#include "soqn/model.hpp"

namespace soqn {

/// Norton aggregate of the inner network: nu(n) is the closed throughput
/// of the inner stations at population n with the pool short-circuited.
class FlowEquivalentServer {
 public:
  FlowEquivalentServer() = default;
  explicit FlowEquivalentServer(std::vector<double> rates) : rates_(std::move(rates)) {}

  int max_population() const { return static_cast<int>(rates_.size()); }
  /// nu(min(n, N)) for n ≥ 1.
  double rate(int n) const;
  /// nu(N), the supremum of stable arrival rates.
  double capacity() const { return rates_.back(); }
  const std::vector<double>& rates() const { return rates_; }

 private:
  std::vector<double> rates_;
};

FlowEquivalentServer flow_equivalent_rates(const InnerNetwork& inner, int max_population);

/// Stationary law of the reduced birth-death chain on the total number of
/// tasks (in the external queue or being served by a robot).
struct ExternalQueueDistribution {
  std::vector<double> pi;  // states 0..N
  double rho_tail = 0.0;   // lambda / nu(N); pi(N + k) = pi(N) rho_tail^k
  double mean_backlog = 0.0;
  double mean_wait = 0.0;  // seconds

  /// Mass of states above N.
  double tail_mass() const { return pi.back() * rho_tail / (1.0 - rho_tail); }
};

/// Throws UnstableError when lambda >= nu(N).
ExternalQueueDistribution external_queue_distribution(const FlowEquivalentServer& fes,
                                                      double lambda, int pool_size);

/// Closed network used in the lost-customer step: the pool becomes a FCFS
/// station with rate `pool_rate` and visit ratio 1, followed by the inner
/// stations.
ClosedNetworkInstance lost_customer_instance(const InnerNetwork& inner, const VisitRatios& eta,
                                             double pool_rate, int pool_size);

inline constexpr double kBisectionRelTolerance = 1e-10;
inline constexpr int kBisectionMaxIterations = 200;
inline constexpr double kBisectionUpperFactor = 1e6;

/// The pool rate lambda_adj for which the lost-customer network carries
/// throughput lambda at population N. Solved by bisection on
/// (lambda, 1e6 lambda]. Throws UnstableError when lambda >= nu(N).
double adjusted_arrival_fixed_point(const SoqnModel& model);

enum class TurnoverDefinition {
  Full,          // arrival until picking completes, travel included
  ExcludeTravel  // infinite-server (travel) stations on the way to picking not counted
};

std::string_view to_string(TurnoverDefinition d);

/// Expected time from a robot leaving the pool until it completes service
/// at one of `pick_labels`, using MVA sojourn times of the lost-customer
/// network at population N. Stations after picking only act through
/// congestion.
///
/// Throws ConfigError when a label is unknown, not FCFS, or when the pool
/// can be re-entered before any picking station is reached.
double inner_processing_time(const SoqnModel& model, double adjusted_rate,
                             std::span<const std::string> pick_labels,
                             TurnoverDefinition definition = TurnoverDefinition::Full);

struct PerformanceReport {
  bool stable = false;
  double capacity = 0.0;  // nu(N), tasks per second
  double arrival_rate = 0.0;
  double external_wait_s = 0.0;
  double inner_processing_s = 0.0;
  double turnover_s = 0.0;
  double adjusted_arrival_rate = 0.0;
  TurnoverDefinition definition = TurnoverDefinition::Full;
  std::vector<std::pair<std::string, double>> per_node_utilization;  // FCFS stations
};

/// Full pipeline. Instability is reported, not thrown: an unstable report
/// has NaN times.
PerformanceReport evaluate(const SoqnModel& model, std::span<const std::string> pick_labels,
                           TurnoverDefinition definition = TurnoverDefinition::Full);

/// nu(N).
double max_stable_arrival(const InnerNetwork& inner, int pool_size);

inline constexpr int kDefaultRobotCap = 550;

/// Smallest N ≤ cap with nu(N) > lambda, or nullopt if the cap is too low.
/// Throws UnstableError("no finite N suffices") when lambda is at or above
/// the bottleneck throughput.
std::optional<int> min_robots(const InnerNetwork& inner, double lambda,
                              int cap = kDefaultRobotCap);

}  // namespace soqn
