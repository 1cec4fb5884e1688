#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace soqn {

/// Row tolerance accepted from hand-authored input before renormalizing.
inline constexpr double kInputRowTolerance = 1e-9;
/// Row tolerance enforced by validation.
inline constexpr double kRowSumTolerance = 1e-12;

inline constexpr double per_hour_to_per_second(double per_hour) { return per_hour / 3600.0; }
inline constexpr double per_second_to_per_hour(double per_second) { return per_second * 3600.0; }

/// Index into {0} ∪ J. Index 0 is the resource pool.
struct NodeId {
  std::size_t index = 0;

  static constexpr NodeId pool() { return NodeId{0}; }
  constexpr bool is_pool() const { return index == 0; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

enum class ServiceDiscipline {
  InfiniteServer,   // departure intensity mu * n
  FcfsSingleServer  // departure intensity mu while n > 0
};

std::string_view to_string(ServiceDiscipline d);

struct NodeSpec {
  NodeId id;
  std::string label;
  ServiceDiscipline discipline = ServiceDiscipline::InfiniteServer;
  double rate = 1.0;  // mu_j, events per second

  bool is_fcfs() const { return discipline == ServiceDiscipline::FcfsSingleServer; }
  double mean_service_s() const { return 1.0 / rate; }
};

/// Square routing matrix over {0} ∪ J, stored row-major.
///
/// Rows whose sum lies within `input_tolerance` of 1 are rescaled so they sum
/// to 1 up to rounding. Rows further off are stored untouched so validation
/// can report them.
class RoutingMatrix {
 public:
  RoutingMatrix() = default;
  explicit RoutingMatrix(const std::vector<std::vector<double>>& rows,
                         double input_tolerance = kInputRowTolerance);

  std::size_t size() const { return n_; }
  bool is_square() const { return square_; }
  double operator()(std::size_t from, std::size_t to) const { return p_[from * n_ + to]; }
  std::span<const double> row(std::size_t from) const {
    return {p_.data() + from * n_, n_};
  }
  double row_sum(std::size_t from) const;

  /// Strong connectivity of the support graph.
  bool is_irreducible() const;

 private:
  std::size_t n_ = 0;
  bool square_ = true;
  std::vector<double> p_;
};

/// Inner stations J = {1..J} plus the routing over {0} ∪ J.
class InnerNetwork {
 public:
  InnerNetwork() = default;
  /// Node ids are assigned by position: nodes[k] gets id k + 1.
  InnerNetwork(std::vector<NodeSpec> nodes, RoutingMatrix routing);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const RoutingMatrix& routing() const { return routing_; }

  /// Node by index in {0} ∪ J; index must be ≥ 1.
  const NodeSpec& node(std::size_t index) const { return nodes_.at(index - 1); }
  /// Index (≥ 1) of the inner node with this label; the pool is never matched.
  std::optional<std::size_t> find(std::string_view label) const;
  /// Label for a row index; "0" for the pool.
  std::string label_of(std::size_t index) const;

 private:
  std::vector<NodeSpec> nodes_;
  RoutingMatrix routing_;
};

struct SoqnModel {
  InnerNetwork inner;
  int pool_size = 1;          // N
  double arrival_rate = 0.0;  // lambda, tasks per second
};

struct Violation {
  std::string where;  // "row m", "node p1", "pool_size", ...
  std::string rule;   // human-readable broken rule

  std::string message() const { return where.empty() ? rule : where + " " + rule; }
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  bool mentions(std::string_view fragment) const;
  std::string summary() const;
};

ValidationResult validate_network(const InnerNetwork& network);
ValidationResult validate_model(const SoqnModel& model);

/// Relative visit frequencies over {0} ∪ J with eta[0] = 1.
class VisitRatios {
 public:
  VisitRatios() = default;
  explicit VisitRatios(std::vector<double> eta) : eta_(std::move(eta)) {}

  std::size_t size() const { return eta_.size(); }
  double operator[](std::size_t index) const { return eta_[index]; }
  std::span<const double> all() const { return eta_; }
  /// Entries for J = {1..J} only.
  std::span<const double> inner() const { return std::span<const double>(eta_).subspan(1); }

 private:
  std::vector<double> eta_;
};

/// Solves eta = eta R with eta_0 = 1. Throws NumericError("routing not
/// irreducible") when the reduced system is singular.
VisitRatios solve_visit_ratios(const InnerNetwork& network);

/// max |eta - eta R|.
double traffic_residual(const InnerNetwork& network, const VisitRatios& eta);

/// min over FCFS nodes of mu_j / eta_j; +infinity if the network has no FCFS node.
double bottleneck_throughput(const InnerNetwork& network, const VisitRatios& eta);

}  // namespace soqn
