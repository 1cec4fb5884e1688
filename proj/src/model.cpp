#include "soqn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "soqn/error.hpp"

namespace soqn {

std::string_view to_string(ServiceDiscipline d) {
  switch (d) {
    case ServiceDiscipline::InfiniteServer:
      return "is";
    case ServiceDiscipline::FcfsSingleServer:
      return "fcfs";
  }
  return "?";
}

RoutingMatrix::RoutingMatrix(const std::vector<std::vector<double>>& rows, double input_tolerance)
    : n_(rows.size()) {
  p_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) {
      square_ = false;
    }
    const std::size_t cols = std::min(rows[i].size(), n_);
    std::copy_n(rows[i].begin(), cols, p_.begin() + static_cast<std::ptrdiff_t>(i * n_));

    const double sum = row_sum(i);
    if (sum != 1.0 && std::abs(sum - 1.0) <= input_tolerance && sum > 0.0) {
      for (std::size_t j = 0; j < n_; ++j) {
        p_[i * n_ + j] /= sum;
      }
    }
  }
}

double RoutingMatrix::row_sum(std::size_t from) const {
  double sum = 0.0;
  for (double v : row(from)) {
    sum += v;
  }
  return sum;
}

namespace {

// Nodes reachable from `start` along positive entries, either forward
// (following r(i,j) > 0) or backward (following r(j,i) > 0).
std::vector<bool> reachable(const RoutingMatrix& r, std::size_t start, bool forward) {
  std::vector<bool> seen(r.size(), false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double p = forward ? r(i, j) : r(j, i);
      if (p > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

bool RoutingMatrix::is_irreducible() const {
  if (n_ == 0) {
    return false;
  }
  const auto fwd = reachable(*this, 0, true);
  const auto bwd = reachable(*this, 0, false);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

InnerNetwork::InnerNetwork(std::vector<NodeSpec> nodes, RoutingMatrix routing)
    : nodes_(std::move(nodes)), routing_(std::move(routing)) {
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    nodes_[k].id = NodeId{k + 1};
  }
}

std::optional<std::size_t> InnerNetwork::find(std::string_view label) const {
  for (const auto& n : nodes_) {
    if (n.label == label) {
      return n.id.index;
    }
  }
  return std::nullopt;
}

std::string InnerNetwork::label_of(std::size_t index) const {
  if (index == 0) {
    return "0";
  }
  if (index <= nodes_.size()) {
    return nodes_[index - 1].label;
  }
  return std::to_string(index);
}

bool ValidationResult::mentions(std::string_view fragment) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.message().find(fragment) != std::string::npos;
  });
}

std::string ValidationResult::summary() const {
  if (ok()) {
    return "ok";
  }
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) {
      out += "; ";
    }
    out += v.message();
  }
  return out;
}

ValidationResult validate_network(const InnerNetwork& network) {
  ValidationResult result;
  auto add = [&](std::string where, std::string rule) {
    result.violations.push_back({std::move(where), std::move(rule)});
  };

  if (network.size() == 0) {
    add("network", "has no inner nodes (J >= 1 required)");
  }

  std::set<std::string> labels;
  for (const auto& node : network.nodes()) {
    if (node.label.empty()) {
      add(fmt::format("node {}", node.id.index), "has an empty label");
    } else if (!labels.insert(node.label).second) {
      add("node " + node.label, "label is not unique");
    }
    if (!std::isfinite(node.rate) || !(node.rate > 0.0)) {
      add("node " + node.label, fmt::format("rate {} is not finite and positive", node.rate));
    }
  }

  const RoutingMatrix& r = network.routing();
  if (!r.is_square() || r.size() != network.size() + 1) {
    add("routing", fmt::format("must be square of dimension {} (J + 1)", network.size() + 1));
    return result;
  }

  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::string row = "row " + network.label_of(i);
    bool entries_ok = true;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double p = r(i, j);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        add(row, fmt::format("entry to {} = {} is outside [0,1]", network.label_of(j), p));
        entries_ok = false;
      }
    }
    const double sum = r.row_sum(i);
    if (entries_ok && std::abs(sum - 1.0) > kRowSumTolerance) {
      add(row, fmt::format("sums to {}", sum));
    }
  }
  if (r(0, 0) != 0.0) {
    add("", "r(0,0) != 0");
  }
  if (!r.is_irreducible()) {
    add("routing", "not irreducible");
  }
  return result;
}

ValidationResult validate_model(const SoqnModel& model) {
  ValidationResult result = validate_network(model.inner);
  if (model.pool_size < 1) {
    result.violations.push_back({"pool_size", fmt::format("{} < 1", model.pool_size)});
  }
  if (!std::isfinite(model.arrival_rate) || !(model.arrival_rate > 0.0)) {
    result.violations.push_back(
        {"arrival_rate", fmt::format("{} is not finite and positive", model.arrival_rate)});
  }
  return result;
}

VisitRatios solve_visit_ratios(const InnerNetwork& network) {
  const std::size_t J = network.size();
  const RoutingMatrix& r = network.routing();
  if (J == 0 || r.size() != J + 1) {
    throw NumericError("routing not irreducible");
  }

  // eta_J (I - R_JJ) = R_0J, solved transposed: (I - R_JJ)^T eta_J = R_0J^T.
  Eigen::MatrixXd a(J, J);
  Eigen::VectorXd b(J);
  for (std::size_t i = 0; i < J; ++i) {
    b(static_cast<Eigen::Index>(i)) = r(0, i + 1);
    for (std::size_t j = 0; j < J; ++j) {
      const double identity = (i == j) ? 1.0 : 0.0;
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = identity - r(i + 1, j + 1);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw NumericError("routing not irreducible");
  }
  const Eigen::VectorXd x = lu.solve(b);

  std::vector<double> eta(J + 1);
  eta[0] = 1.0;
  for (std::size_t j = 0; j < J; ++j) {
    eta[j + 1] = x(static_cast<Eigen::Index>(j));
    if (!std::isfinite(eta[j + 1]) || eta[j + 1] <= 0.0) {
      throw NumericError("routing not irreducible");
    }
  }
  return VisitRatios(std::move(eta));
}

double traffic_residual(const InnerNetwork& network, const VisitRatios& eta) {
  const RoutingMatrix& r = network.routing();
  double worst = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    double incoming = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      incoming += eta[i] * r(i, j);
    }
    worst = std::max(worst, std::abs(eta[j] - incoming));
  }
  return worst;
}

double bottleneck_throughput(const InnerNetwork& network, const VisitRatios& eta) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& node : network.nodes()) {
    if (node.is_fcfs()) {
      best = std::min(best, node.rate / eta[node.id.index]);
    }
  }
  return best;
}

}  // namespace soqn
