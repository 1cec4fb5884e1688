#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "soqn/closed_network.hpp"
#include "soqn/error.hpp"

namespace soqn {

namespace {

using Occupancy = std::vector<int>;

void enumerate_states(std::size_t station, int remaining, Occupancy& current,
                      std::vector<Occupancy>& out) {
  if (station + 1 == current.size()) {
    current[station] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[station] = k;
    enumerate_states(station + 1, remaining - k, current, out);
  }
}

struct Stationary {
  double throughput;
  std::vector<double> queue;
};

Stationary solve_population(const ClosedNetworkInstance& instance,
                            const std::vector<std::vector<double>>& routing, int population) {
  const std::size_t J = instance.nodes.size();
  std::vector<Occupancy> states;
  Occupancy scratch(J, 0);
  enumerate_states(0, population, scratch, states);

  std::map<Occupancy, Eigen::Index> index;
  for (std::size_t s = 0; s < states.size(); ++s) {
    index.emplace(states[s], static_cast<Eigen::Index>(s));
  }

  auto departure_rate = [&](const Occupancy& s, std::size_t i) {
    if (s[i] == 0) {
      return 0.0;
    }
    const NodeSpec& node = instance.nodes[i];
    return node.is_fcfs() ? node.rate : node.rate * s[i];
  };

  // Transposed generator with the last balance equation replaced by the
  // normalization sum(pi) = 1.
  const auto n_states = static_cast<Eigen::Index>(states.size());
  const Eigen::Index last = n_states - 1;
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index s = 0; s < n_states; ++s) {
    const Occupancy& from = states[static_cast<std::size_t>(s)];
    double outflow = 0.0;
    for (std::size_t i = 0; i < J; ++i) {
      const double rate = departure_rate(from, i);
      if (rate == 0.0) {
        continue;
      }
      for (std::size_t j = 0; j < J; ++j) {
        const double q = rate * routing[i][j];
        if (i == j || q == 0.0) {
          continue;
        }
        Occupancy to = from;
        --to[i];
        ++to[j];
        const Eigen::Index t = index.at(to);
        if (t != last) {
          triplets.emplace_back(t, s, q);
        }
        outflow += q;
      }
    }
    if (s != last) {
      triplets.emplace_back(s, s, -outflow);
    }
    triplets.emplace_back(last, s, 1.0);
  }

  Eigen::SparseMatrix<double> a(n_states, n_states);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_states);
  rhs(last) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw NumericError("ctmc oracle: balance equations are singular");
  }
  const Eigen::VectorXd pi = lu.solve(rhs);

  Stationary result{0.0, std::vector<double>(J, 0.0)};
  double departures = 0.0;
  for (Eigen::Index s = 0; s < n_states; ++s) {
    const Occupancy& occ = states[static_cast<std::size_t>(s)];
    for (std::size_t j = 0; j < J; ++j) {
      result.queue[j] += pi(s) * occ[j];
      departures += pi(s) * departure_rate(occ, j);
    }
  }
  const double eta_sum = std::accumulate(instance.eta.begin(), instance.eta.end(), 0.0);
  result.throughput = departures / eta_sum;
  return result;
}

}  // namespace

ThroughputProfile ctmc_oracle(const ClosedNetworkInstance& instance,
                              const std::vector<std::vector<double>>& routing) {
  const std::size_t J = instance.nodes.size();
  const int N = std::max(instance.population, 0);
  if (J == 0) {
    throw NumericError("ctmc oracle: instance has no stations");
  }
  const std::size_t states = closed_state_count(J, N);
  if (states > kCtmcStateLimit) {
    throw NumericError(fmt::format(
        "ctmc oracle: state space of {} stations at population {} has {} states (limit {})", J,
        N, states, kCtmcStateLimit));
  }
  if (routing.size() != J) {
    throw NumericError("ctmc oracle: routing dimension does not match the station count");
  }

  ThroughputProfile profile(N, J);
  for (int n = 1; n <= N; ++n) {
    const Stationary st = solve_population(instance, routing, n);
    profile.throughput(n) = st.throughput;
    for (std::size_t j = 0; j < J; ++j) {
      profile.mean_queue(n, j) = st.queue[j];
      profile.mean_sojourn(n, j) = st.queue[j] / (st.throughput * instance.eta[j]);
    }
  }
  return profile;
}

ThroughputProfile ctmc_oracle(const ClosedNetworkInstance& instance) {
  const std::size_t J = instance.nodes.size();
  const double eta_sum = std::accumulate(instance.eta.begin(), instance.eta.end(), 0.0);
  std::vector<std::vector<double>> routing(J, std::vector<double>(J));
  for (std::size_t i = 0; i < J; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      routing[i][j] = instance.eta[j] / eta_sum;
    }
  }
  return ctmc_oracle(instance, routing);
}

}  // namespace soqn
