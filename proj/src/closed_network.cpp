#include "soqn/closed_network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soqn/error.hpp"

namespace soqn {

ClosedNetworkInstance closed_instance(const InnerNetwork& network, const VisitRatios& eta,
                                      int population) {
  ClosedNetworkInstance instance;
  instance.nodes = network.nodes();
  instance.eta.assign(eta.inner().begin(), eta.inner().end());
  instance.population = population;
  return instance;
}

ThroughputProfile mva(const ClosedNetworkInstance& instance) {
  const std::size_t J = instance.nodes.size();
  const int N = std::max(instance.population, 0);
  ThroughputProfile profile(N, J);

  std::vector<double> queue(J, 0.0);  // L_j(n - 1)
  std::vector<double> sojourn(J, 0.0);
  for (int n = 1; n <= N; ++n) {
    double cycle = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      const NodeSpec& node = instance.nodes[j];
      sojourn[j] = node.is_fcfs() ? (1.0 + queue[j]) / node.rate : 1.0 / node.rate;
      cycle += instance.eta[j] * sojourn[j];
    }
    const double x = static_cast<double>(n) / cycle;
    profile.throughput(n) = x;
    for (std::size_t j = 0; j < J; ++j) {
      queue[j] = x * instance.eta[j] * sojourn[j];
      profile.mean_queue(n, j) = queue[j];
      profile.mean_sojourn(n, j) = sojourn[j];
    }
  }
  return profile;
}

double NormalizingConstants::g(int n) const { return std::exp(log_g(n)); }

double NormalizingConstants::throughput(int n) const {
  return std::exp(log_g(n - 1) - log_g(n));
}

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) {
    return b;
  }
  if (b == -std::numeric_limits<double>::infinity()) {
    return a;
  }
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

NormalizingConstants buzen_normalizing_constants(const ClosedNetworkInstance& instance) {
  const int N = std::max(instance.population, 0);
  const auto size = static_cast<std::size_t>(N) + 1;
  constexpr double kLogZero = -std::numeric_limits<double>::infinity();

  // Empty network: only the zero-population state exists.
  std::vector<double> log_g(size, kLogZero);
  log_g[0] = 0.0;

  std::vector<double> next(size);
  for (std::size_t j = 0; j < instance.nodes.size(); ++j) {
    const double log_rho = std::log(instance.demand(j));
    if (instance.nodes[j].is_fcfs()) {
      // g'(k) = g(k) + rho * g'(k - 1)
      next[0] = log_g[0];
      for (std::size_t k = 1; k < size; ++k) {
        next[k] = log_add(log_g[k], log_rho + next[k - 1]);
      }
    } else {
      // g'(k) = sum_i g(k - i) rho^i / i!
      std::vector<double> log_factor(size);
      for (std::size_t i = 0; i < size; ++i) {
        log_factor[i] = static_cast<double>(i) * log_rho - std::lgamma(static_cast<double>(i) + 1.0);
      }
      for (std::size_t k = 0; k < size; ++k) {
        double acc = kLogZero;
        for (std::size_t i = 0; i <= k; ++i) {
          acc = log_add(acc, log_g[k - i] + log_factor[i]);
        }
        next[k] = acc;
      }
    }
    log_g.swap(next);
  }
  return NormalizingConstants(std::move(log_g));
}

std::size_t closed_state_count(std::size_t stations, int population) {
  if (stations == 0 || population < 0) {
    return population == 0 ? 1 : 0;
  }
  // C(n + J - 1, J - 1) built incrementally; each partial product is an
  // exact binomial so integer division is exact.
  const std::size_t n = static_cast<std::size_t>(population);
  std::size_t count = 1;
  for (std::size_t k = 1; k < stations; ++k) {
    const std::size_t factor = n + k;
    if (count > std::numeric_limits<std::size_t>::max() / factor) {
      return std::numeric_limits<std::size_t>::max();
    }
    count = count * factor / k;
  }
  return count;
}

}  // namespace soqn
