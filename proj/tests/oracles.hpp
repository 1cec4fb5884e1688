#pragma once

// Reference computations used only by tests. None of these call into the
// solver code paths they are used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "soqn/closed_network.hpp"
#include "soqn/model.hpp"

namespace soqn::testing {

/// M/M/1 mean waiting time in queue.
inline double mm1_wait(double lambda, double mu) { return lambda / (mu * (mu - lambda)); }

/// M/M/c mean waiting time in queue via the Erlang C formula.
inline double erlang_c_wait(double lambda, double mu, int c) {
  const double a = lambda / mu;
  const double rho = a / c;
  double sum = 0.0;
  double term = 1.0;  // a^k / k!
  for (int k = 0; k < c; ++k) {
    sum += term;
    term *= a / (k + 1);
  }
  const double tail = term / (1.0 - rho);  // a^c / c! / (1 - rho)
  const double prob_wait = tail / (sum + tail);
  return prob_wait / (c * mu - lambda);
}

/// Visits every occupancy vector of `stations` stations holding `population`.
inline void for_each_occupancy(std::size_t stations, int population,
                               const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> occ(stations, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == stations) {
      occ[j] = left;
      visit(occ);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      occ[j] = k;
      rec(j + 1, left - k);
    }
  };
  rec(0, population);
}

/// G(n) by direct summation of the product-form weights over all states.
inline double brute_force_g(const ClosedNetworkInstance& inst, int population) {
  double total = 0.0;
  for_each_occupancy(inst.nodes.size(), population, [&](const std::vector<int>& occ) {
    double w = 1.0;
    for (std::size_t j = 0; j < occ.size(); ++j) {
      const double rho = inst.eta[j] / inst.nodes[j].rate;
      w *= std::pow(rho, occ[j]);
      if (!inst.nodes[j].is_fcfs()) {
        w /= std::tgamma(occ[j] + 1.0);
      }
    }
    total += w;
  });
  return total;
}

/// Stationary vector of the lazy chain (I + R) / 2 by power iteration,
/// rescaled so entry 0 equals 1.
inline std::vector<double> visit_ratios_by_power_iteration(const RoutingMatrix& r,
                                                           int iterations = 20000) {
  const std::size_t n = r.size();
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.5 * x[j];
      for (std::size_t i = 0; i < n; ++i) {
        s += 0.5 * x[i] * r(i, j);
      }
      next[j] = s;
    }
    x.swap(next);
  }
  const double base = x[0];
  for (double& v : x) {
    v /= base;
  }
  return x;
}

/// Random closed instance: 1..max_stations stations, mixed disciplines,
/// demands spread over two orders of magnitude.
inline ClosedNetworkInstance random_instance(std::mt19937_64& rng, std::size_t max_stations,
                                             int population) {
  std::uniform_int_distribution<std::size_t> count(1, max_stations);
  std::uniform_real_distribution<double> log_rate(std::log(0.05), std::log(5.0));
  std::uniform_real_distribution<double> visits(0.1, 2.0);
  std::bernoulli_distribution fcfs(0.6);

  ClosedNetworkInstance inst;
  const std::size_t J = count(rng);
  for (std::size_t j = 0; j < J; ++j) {
    NodeSpec node;
    node.id = NodeId{j + 1};
    node.label = "n" + std::to_string(j + 1);
    node.discipline =
        fcfs(rng) ? ServiceDiscipline::FcfsSingleServer : ServiceDiscipline::InfiniteServer;
    node.rate = std::exp(log_rate(rng));
    inst.nodes.push_back(node);
    inst.eta.push_back(visits(rng));
  }
  inst.population = population;
  return inst;
}

/// Random irreducible network: a random stochastic matrix mixed with the
/// uniform matrix (weight eps), with r(0,0) forced to zero.
inline InnerNetwork random_network(std::mt19937_64& rng, std::size_t stations, double eps = 0.05) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> log_rate(std::log(0.05), std::log(5.0));
  const std::size_t n = stations + 1;
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][j] = (i == 0 && j == 0) ? 0.0 : u(rng) * u(rng);
      sum += rows[i][j];
    }
    const double uniform = 1.0 / static_cast<double>(i == 0 ? n - 1 : n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == 0 && j == 0) {
        continue;
      }
      rows[i][j] = (1.0 - eps) * rows[i][j] / sum + eps * uniform;
      total += rows[i][j];
    }
    for (double& v : rows[i]) {
      v /= total;
    }
  }
  std::vector<NodeSpec> nodes;
  std::bernoulli_distribution fcfs(0.5);
  for (std::size_t j = 0; j < stations; ++j) {
    nodes.push_back(NodeSpec{NodeId{j + 1}, "n" + std::to_string(j + 1),
                             fcfs(rng) ? ServiceDiscipline::FcfsSingleServer
                                       : ServiceDiscipline::InfiniteServer,
                             std::exp(log_rate(rng))});
  }
  return InnerNetwork(std::move(nodes), RoutingMatrix(rows));
}

}  // namespace soqn::testing
