#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "soqn/model.hpp"

namespace soqn::rmfs {

/// Two stations of each kind; per-station arrays are indexed by station.
struct RmfsParameters {
  double order_rate_per_h = 468.0;  // lambda_o
  double pod_order_ratio = 1.0;     // alpha
  double travel_to_pod_s = 18.4;
  std::array<double, 2> travel_to_pick_s{34.5, 34.5};
  std::array<double, 2> travel_pick_to_storage_s{34.5, 34.5};
  std::array<double, 2> travel_pick_to_repl_s{34.5, 34.5};
  std::array<double, 2> travel_repl_to_storage_s{34.5, 34.5};
  std::array<double, 2> pick_time_s{10.0, 10.0};
  std::array<double, 2> repl_time_s{30.0, 30.0};
  std::array<double, 2> q_pick{0.5, 0.5};
  std::array<double, 2> q_repl{0.2, 0.2};
  int robots = 20;

  /// lambda = lambda_o * alpha, tasks per second.
  double task_rate_per_s() const { return per_hour_to_per_second(order_rate_per_h * pod_order_ratio); }
};

RmfsParameters default_parameters();

/// Throws ConfigError naming the first offending field.
void validate(const RmfsParameters& params);

enum class StationLayout { TwoStationTypes, CombiStations };

std::string_view to_string(StationLayout layout);
/// Accepts "two-station" and "combi".
StationLayout parse_layout(std::string_view name);

/// Node labels, in model order.
std::vector<std::string> node_labels(StationLayout layout);
/// The picking stations, {"p1", "p2"}.
std::vector<std::string> pick_labels();

SoqnModel build_network(StationLayout layout, const RmfsParameters& params);

}  // namespace soqn::rmfs
