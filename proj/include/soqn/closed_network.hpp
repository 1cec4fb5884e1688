#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "soqn/model.hpp"

namespace soqn {

/// A closed Gordon-Newell network: stations with visit ratios and a fixed
/// population. Throughput is measured per unit visit ratio, so with eta
/// normalized at the pool it equals the task completion rate.
struct ClosedNetworkInstance {
  std::vector<NodeSpec> nodes;
  std::vector<double> eta;
  int population = 0;

  /// Relative service demand eta_j / mu_j.
  double demand(std::size_t j) const { return eta[j] / nodes[j].rate; }
};

/// The inner stations of `network` with their visit ratios.
ClosedNetworkInstance closed_instance(const InnerNetwork& network, const VisitRatios& eta,
                                      int population);

/// Throughput, mean queue length and mean sojourn per population level.
/// Populations are 1-based: X(1) is the first entry.
class ThroughputProfile {
 public:
  ThroughputProfile() = default;
  ThroughputProfile(int population, std::size_t nodes)
      : population_(population),
        nodes_(nodes),
        throughput_(static_cast<std::size_t>(population), 0.0),
        queue_(static_cast<std::size_t>(population) * nodes, 0.0),
        sojourn_(static_cast<std::size_t>(population) * nodes, 0.0) {}

  int population() const { return population_; }
  std::size_t nodes() const { return nodes_; }
  bool empty() const { return population_ == 0; }

  double throughput(int n) const { return throughput_.at(index(n)); }
  double mean_queue(int n, std::size_t j) const { return queue_.at(index(n) * nodes_ + j); }
  double mean_sojourn(int n, std::size_t j) const { return sojourn_.at(index(n) * nodes_ + j); }

  double& throughput(int n) { return throughput_.at(index(n)); }
  double& mean_queue(int n, std::size_t j) { return queue_.at(index(n) * nodes_ + j); }
  double& mean_sojourn(int n, std::size_t j) { return sojourn_.at(index(n) * nodes_ + j); }

  const std::vector<double>& throughputs() const { return throughput_; }

 private:
  static std::size_t index(int n) { return static_cast<std::size_t>(n - 1); }

  int population_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> throughput_;
  std::vector<double> queue_;
  std::vector<double> sojourn_;
};

/// Exact mean-value analysis for FCFS single-server and infinite-server
/// stations, n = 1..population.
ThroughputProfile mva(const ClosedNetworkInstance& instance);

/// Normalizing constants G(0..N) of the product-form distribution, held in
/// the log domain so that large populations stay finite.
class NormalizingConstants {
 public:
  NormalizingConstants() = default;
  explicit NormalizingConstants(std::vector<double> log_g) : log_g_(std::move(log_g)) {}

  int population() const { return static_cast<int>(log_g_.size()) - 1; }
  double log_g(int n) const { return log_g_.at(static_cast<std::size_t>(n)); }
  /// G(n); overflows to +inf for very large instances, use log_g there.
  double g(int n) const;
  /// X(n) = G(n-1) / G(n).
  double throughput(int n) const;

 private:
  std::vector<double> log_g_;
};

/// Buzen's convolution: FCFS factor rho^k, IS factor rho^k / k!.
NormalizingConstants buzen_normalizing_constants(const ClosedNetworkInstance& instance);

/// Upper bound on CTMC states accepted by `ctmc_oracle`.
inline constexpr std::size_t kCtmcStateLimit = 200'000;

/// C(n + J - 1, n), saturating at SIZE_MAX.
std::size_t closed_state_count(std::size_t stations, int population);

/// Brute-force reference: builds the continuous-time Markov chain over
/// occupancy vectors, solves global balance for every population 1..N and
/// derives throughput, queue lengths and sojourn times from the stationary
/// distribution. Routing between stations is r(i,j) = eta_j / sum(eta),
/// which has `instance.eta` as its visit ratios.
///
/// Throws NumericError when the state space exceeds kCtmcStateLimit.
ThroughputProfile ctmc_oracle(const ClosedNetworkInstance& instance);

/// As above with an explicit station-to-station routing matrix. Its
/// stationary visit ratios must be proportional to `instance.eta`.
ThroughputProfile ctmc_oracle(const ClosedNetworkInstance& instance,
                              const std::vector<std::vector<double>>& routing);

}  // namespace soqn
