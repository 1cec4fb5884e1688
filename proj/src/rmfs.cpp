#include "soqn/rmfs.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "soqn/error.hpp"

namespace soqn::rmfs {

RmfsParameters default_parameters() { return RmfsParameters{}; }

namespace {

void require_positive(double value, std::string_view field) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ConfigError(fmt::format("{} must be finite and > 0 (got {})", field, value));
  }
}

void require_positive(const std::array<double, 2>& values, std::string_view field) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_positive(values[i], fmt::format("{}[{}]", field, i));
  }
}

}  // namespace

void validate(const RmfsParameters& p) {
  require_positive(p.order_rate_per_h, "order_rate_per_h");
  require_positive(p.pod_order_ratio, "pod_order_ratio");
  require_positive(p.travel_to_pod_s, "travel_to_pod_s");
  require_positive(p.travel_to_pick_s, "travel_to_pick_s");
  require_positive(p.travel_pick_to_storage_s, "travel_pick_to_storage_s");
  require_positive(p.travel_pick_to_repl_s, "travel_pick_to_repl_s");
  require_positive(p.travel_repl_to_storage_s, "travel_repl_to_storage_s");
  require_positive(p.pick_time_s, "pick_time_s");
  require_positive(p.repl_time_s, "repl_time_s");
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(p.q_pick[i] > 0.0 && p.q_pick[i] < 1.0)) {
      throw ConfigError(fmt::format("q_pick[{}] must lie in (0,1) (got {})", i, p.q_pick[i]));
    }
    if (!(p.q_repl[i] > 0.0 && p.q_repl[i] < 1.0)) {
      throw ConfigError(fmt::format("q_repl[{}] must lie in (0,1) (got {})", i, p.q_repl[i]));
    }
  }
  if (std::abs(p.q_pick[0] + p.q_pick[1] - 1.0) > kInputRowTolerance) {
    throw ConfigError(
        fmt::format("q_pick must sum to 1 (got {} + {})", p.q_pick[0], p.q_pick[1]));
  }
  if (p.robots < 1) {
    throw ConfigError(fmt::format("robots must be >= 1 (got {})", p.robots));
  }
}

std::string_view to_string(StationLayout layout) {
  return layout == StationLayout::TwoStationTypes ? "two-station" : "combi";
}

StationLayout parse_layout(std::string_view name) {
  if (name == "two-station") {
    return StationLayout::TwoStationTypes;
  }
  if (name == "combi") {
    return StationLayout::CombiStations;
  }
  throw ConfigError(fmt::format("layout: unknown preset '{}' (expected two-station or combi)", name));
}

std::vector<std::string> node_labels(StationLayout layout) {
  if (layout == StationLayout::TwoStationTypes) {
    return {"m", "sp1", "sp2", "p1", "p2", "p1s", "p2s", "p1r1", "p2r2", "r1", "r2", "r1s", "r2s"};
  }
  return {"m", "sp1", "sp2", "p1", "p2", "p1s", "p2s", "r1", "r2", "r1s", "r2s"};
}

std::vector<std::string> pick_labels() { return {"p1", "p2"}; }

SoqnModel build_network(StationLayout layout, const RmfsParameters& p) {
  validate(p);
  const bool two_station = layout == StationLayout::TwoStationTypes;
  const std::vector<std::string> labels = node_labels(layout);

  std::map<std::string, std::pair<ServiceDiscipline, double>> spec;
  auto travel = [&](const std::string& label, double mean_s) {
    spec[label] = {ServiceDiscipline::InfiniteServer, 1.0 / mean_s};
  };
  auto station = [&](const std::string& label, double mean_s) {
    spec[label] = {ServiceDiscipline::FcfsSingleServer, 1.0 / mean_s};
  };
  travel("m", p.travel_to_pod_s);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string k = std::to_string(i + 1);
    travel("sp" + k, p.travel_to_pick_s[i]);
    station("p" + k, p.pick_time_s[i]);
    travel("p" + k + "s", p.travel_pick_to_storage_s[i]);
    if (two_station) {
      travel("p" + k + "r" + k, p.travel_pick_to_repl_s[i]);
    }
    station("r" + k, p.repl_time_s[i]);
    travel("r" + k + "s", p.travel_repl_to_storage_s[i]);
  }

  std::vector<NodeSpec> nodes;
  std::map<std::string, std::size_t> index;  // label -> index in {0} ∪ J
  for (const auto& label : labels) {
    const auto& [discipline, rate] = spec.at(label);
    nodes.push_back(NodeSpec{NodeId{nodes.size() + 1}, label, discipline, rate});
    index[label] = nodes.size();
  }
  index["0"] = 0;

  const std::size_t dim = nodes.size() + 1;
  std::vector<std::vector<double>> rows(dim, std::vector<double>(dim, 0.0));
  auto set = [&](const std::string& from, const std::string& to, double prob) {
    rows[index.at(from)][index.at(to)] = prob;
  };
  set("0", "m", 1.0);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string k = std::to_string(i + 1);
    const std::string pick = "p" + k;
    const std::string repl = "r" + k;
    set("m", "sp" + k, p.q_pick[i]);
    set("sp" + k, pick, 1.0);
    set(pick, pick + "s", 1.0 - p.q_repl[i]);
    if (two_station) {
      set(pick, pick + repl, p.q_repl[i]);
      set(pick + repl, repl, 1.0);
    } else {
      set(pick, repl, p.q_repl[i]);
    }
    set(pick + "s", "0", 1.0);
    set(repl, repl + "s", 1.0);
    set(repl + "s", "0", 1.0);
  }

  SoqnModel model;
  model.inner = InnerNetwork(std::move(nodes), RoutingMatrix(rows));
  model.pool_size = p.robots;
  model.arrival_rate = p.task_rate_per_s();
  return model;
}

}  // namespace soqn::rmfs
