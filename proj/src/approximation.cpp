#include "soqn/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "soqn/error.hpp"

namespace soqn {

double FlowEquivalentServer::rate(int n) const {
  const int clamped = std::min(n, max_population());
  return rates_.at(static_cast<std::size_t>(clamped - 1));
}

FlowEquivalentServer flow_equivalent_rates(const InnerNetwork& inner, int max_population) {
  if (max_population < 1) {
    throw ConfigError(fmt::format("max_population {} < 1", max_population));
  }
  const VisitRatios eta = solve_visit_ratios(inner);
  const ThroughputProfile profile = mva(closed_instance(inner, eta, max_population));
  return FlowEquivalentServer(profile.throughputs());
}

ExternalQueueDistribution external_queue_distribution(const FlowEquivalentServer& fes,
                                                      double lambda, int pool_size) {
  if (pool_size < 1 || pool_size > fes.max_population()) {
    throw ConfigError(fmt::format("pool size {} outside the flow-equivalent range 1..{}",
                                  pool_size, fes.max_population()));
  }
  const double nu_n = fes.rate(pool_size);
  const double rho = lambda / nu_n;
  if (!(rho < 1.0)) {
    throw UnstableError(fmt::format("unstable: arrival rate {} >= capacity nu(N) = {}", lambda,
                                    nu_n));
  }

  // Unnormalized log pi(n) = sum_{i <= n} log(lambda / nu(i)).
  const auto size = static_cast<std::size_t>(pool_size) + 1;
  std::vector<double> log_w(size, 0.0);
  for (int n = 1; n <= pool_size; ++n) {
    log_w[static_cast<std::size_t>(n)] =
        log_w[static_cast<std::size_t>(n) - 1] + std::log(lambda / fes.rate(n));
  }
  const double peak = *std::max_element(log_w.begin(), log_w.end());

  ExternalQueueDistribution dist;
  dist.rho_tail = rho;
  dist.pi.resize(size);
  double total = 0.0;
  for (std::size_t n = 0; n < size; ++n) {
    dist.pi[n] = std::exp(log_w[n] - peak);
    total += dist.pi[n];
  }
  total += dist.pi.back() * rho / (1.0 - rho);
  for (double& p : dist.pi) {
    p /= total;
  }
  dist.mean_backlog = dist.pi.back() * rho / ((1.0 - rho) * (1.0 - rho));
  dist.mean_wait = dist.mean_backlog / lambda;
  return dist;
}

ClosedNetworkInstance lost_customer_instance(const InnerNetwork& inner, const VisitRatios& eta,
                                             double pool_rate, int pool_size) {
  ClosedNetworkInstance instance;
  instance.nodes.reserve(inner.size() + 1);
  instance.nodes.push_back(
      NodeSpec{NodeId::pool(), "0", ServiceDiscipline::FcfsSingleServer, pool_rate});
  instance.nodes.insert(instance.nodes.end(), inner.nodes().begin(), inner.nodes().end());
  instance.eta.assign(eta.all().begin(), eta.all().end());
  instance.population = pool_size;
  return instance;
}

namespace {

void require_stable(double lambda, double capacity) {
  if (!(lambda < capacity)) {
    throw UnstableError(
        fmt::format("arrival rate exceeds capacity nu(N): {} >= {}", lambda, capacity));
  }
}

double fixed_point(const InnerNetwork& inner, const VisitRatios& eta, double lambda, int N) {
  auto throughput = [&](double pool_rate) {
    return mva(lost_customer_instance(inner, eta, pool_rate, N)).throughput(N);
  };

  double lo = lambda;
  double hi = kBisectionUpperFactor * lambda;
  if (throughput(hi) < lambda) {
    throw NumericError(fmt::format(
        "adjusted arrival rate lies above the bisection bracket {} (arrival rate too close to "
        "capacity)",
        hi));
  }
  for (int it = 0; it < kBisectionMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (throughput(mid) < lambda) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= kBisectionRelTolerance * hi) {
      break;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<bool> pick_mask(const InnerNetwork& inner, std::span<const std::string> pick_labels) {
  if (pick_labels.empty()) {
    throw ConfigError("no picking stations given");
  }
  std::vector<bool> is_pick(inner.size() + 1, false);
  for (const auto& label : pick_labels) {
    const auto index = inner.find(label);
    if (!index) {
      throw ConfigError(fmt::format("picking station '{}' not found", label));
    }
    if (!inner.node(*index).is_fcfs()) {
      throw ConfigError(fmt::format("picking station '{}' is not FCFS", label));
    }
    is_pick[*index] = true;
  }
  return is_pick;
}

// Expected accumulated `cost` from leaving the pool until the first picking
// station completes. cost[j] is charged once per visit to station j.
double time_to_first_pick(const InnerNetwork& inner, const std::vector<bool>& is_pick,
                          const std::vector<double>& cost) {
  const RoutingMatrix& r = inner.routing();
  const std::size_t J = inner.size();

  // Stations visited before any pick, reachable from the pool.
  std::vector<std::size_t> transient;
  std::vector<long> slot(J + 1, -1);
  std::vector<std::size_t> stack;
  for (std::size_t k = 1; k <= J; ++k) {
    if (r(0, k) > 0.0 && !is_pick[k] && slot[k] < 0) {
      slot[k] = static_cast<long>(transient.size());
      transient.push_back(k);
      stack.push_back(k);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (r(i, 0) > 0.0) {
      throw ConfigError(fmt::format(
          "station '{}' returns robots to the pool before any picking station", inner.label_of(i)));
    }
    for (std::size_t k = 1; k <= J; ++k) {
      if (r(i, k) > 0.0 && !is_pick[k] && slot[k] < 0) {
        slot[k] = static_cast<long>(transient.size());
        transient.push_back(k);
        stack.push_back(k);
      }
    }
  }

  // T_i = c_i + sum_k r(i,k) (pick_k ? c_k : T_k) over transient stations.
  const auto m = static_cast<Eigen::Index>(transient.size());
  Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
  if (m > 0) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd b(m);
    for (Eigen::Index row = 0; row < m; ++row) {
      const std::size_t i = transient[static_cast<std::size_t>(row)];
      b(row) = cost[i];
      for (std::size_t k = 1; k <= J; ++k) {
        if (r(i, k) == 0.0) {
          continue;
        }
        if (is_pick[k]) {
          b(row) += r(i, k) * cost[k];
        } else {
          a(row, slot[k]) -= r(i, k);
        }
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
      throw ConfigError("picking stations are not reached with probability 1");
    }
    t = lu.solve(b);
  }

  double total = 0.0;
  for (std::size_t k = 1; k <= J; ++k) {
    if (r(0, k) > 0.0) {
      total += r(0, k) * (is_pick[k] ? cost[k] : t(slot[k]));
    }
  }
  return total;
}

double inner_time_from_profile(const InnerNetwork& inner, const std::vector<bool>& is_pick,
                               const ThroughputProfile& profile, int N,
                               TurnoverDefinition definition) {
  std::vector<double> cost(inner.size() + 1, 0.0);
  for (std::size_t k = 1; k <= inner.size(); ++k) {
    const bool travel = !inner.node(k).is_fcfs();
    if (definition == TurnoverDefinition::ExcludeTravel && travel) {
      continue;
    }
    cost[k] = profile.mean_sojourn(N, k);  // profile index k: pool occupies slot 0
  }
  return time_to_first_pick(inner, is_pick, cost);
}

}  // namespace

double adjusted_arrival_fixed_point(const SoqnModel& model) {
  const VisitRatios eta = solve_visit_ratios(model.inner);
  const double capacity =
      mva(closed_instance(model.inner, eta, model.pool_size)).throughput(model.pool_size);
  require_stable(model.arrival_rate, capacity);
  return fixed_point(model.inner, eta, model.arrival_rate, model.pool_size);
}

std::string_view to_string(TurnoverDefinition d) {
  return d == TurnoverDefinition::Full ? "full" : "exclude-travel";
}

double inner_processing_time(const SoqnModel& model, double adjusted_rate,
                             std::span<const std::string> pick_labels,
                             TurnoverDefinition definition) {
  const std::vector<bool> is_pick = pick_mask(model.inner, pick_labels);
  const VisitRatios eta = solve_visit_ratios(model.inner);
  const ThroughputProfile profile =
      mva(lost_customer_instance(model.inner, eta, adjusted_rate, model.pool_size));
  return inner_time_from_profile(model.inner, is_pick, profile, model.pool_size, definition);
}

PerformanceReport evaluate(const SoqnModel& model, std::span<const std::string> pick_labels,
                           TurnoverDefinition definition) {
  const ValidationResult validation = validate_model(model);
  if (!validation) {
    throw ConfigError("invalid model: " + validation.summary());
  }
  const std::vector<bool> is_pick = pick_mask(model.inner, pick_labels);
  const VisitRatios eta = solve_visit_ratios(model.inner);
  const int N = model.pool_size;
  const double lambda = model.arrival_rate;
  const FlowEquivalentServer fes(mva(closed_instance(model.inner, eta, N)).throughputs());

  PerformanceReport report;
  report.definition = definition;
  report.arrival_rate = lambda;
  report.capacity = fes.capacity();
  report.stable = lambda < report.capacity;
  for (const auto& node : model.inner.nodes()) {
    if (node.is_fcfs()) {
      report.per_node_utilization.emplace_back(node.label,
                                               lambda * eta[node.id.index] / node.rate);
    }
  }
  if (!report.stable) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    report.external_wait_s = report.inner_processing_s = report.turnover_s = nan;
    report.adjusted_arrival_rate = nan;
    return report;
  }

  report.adjusted_arrival_rate = fixed_point(model.inner, eta, lambda, N);
  const ThroughputProfile lost =
      mva(lost_customer_instance(model.inner, eta, report.adjusted_arrival_rate, N));
  report.inner_processing_s = inner_time_from_profile(model.inner, is_pick, lost, N, definition);
  report.external_wait_s = external_queue_distribution(fes, lambda, N).mean_wait;
  report.turnover_s = report.external_wait_s + report.inner_processing_s;
  return report;
}

double max_stable_arrival(const InnerNetwork& inner, int pool_size) {
  return flow_equivalent_rates(inner, pool_size).capacity();
}

std::optional<int> min_robots(const InnerNetwork& inner, double lambda, int cap) {
  const VisitRatios eta = solve_visit_ratios(inner);
  if (!(lambda < bottleneck_throughput(inner, eta))) {
    throw UnstableError(fmt::format(
        "no finite N suffices: arrival rate {} is at or above the bottleneck throughput {}",
        lambda, bottleneck_throughput(inner, eta)));
  }
  if (cap < 1) {
    return std::nullopt;
  }
  const ThroughputProfile profile = mva(closed_instance(inner, eta, cap));
  for (int n = 1; n <= cap; ++n) {
    if (profile.throughput(n) > lambda) {
      return n;
    }
  }
  return std::nullopt;
}

}  // namespace soqn
