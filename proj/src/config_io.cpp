#include "soqn/config_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "soqn/error.hpp"

namespace soqn {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(fmt::format("{}{}: missing", where, key));
  }
  return obj.at(key);
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) {
    throw ConfigError(fmt::format("{}: expected a number", field));
  }
  return v.get<double>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("malformed JSON: {}", e.what()));
  }
}

}  // namespace

ModelConfig parse_model_json(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object()) {
    throw ConfigError("model config: top level must be an object");
  }

  const json& nodes_json = require(doc, "nodes", "");
  if (!nodes_json.is_array()) {
    throw ConfigError("nodes: expected an array");
  }
  std::vector<NodeSpec> nodes;
  for (std::size_t k = 0; k < nodes_json.size(); ++k) {
    const std::string where = fmt::format("nodes[{}].", k);
    const json& n = nodes_json[k];
    NodeSpec spec;
    const json& label = require(n, "label", where);
    if (!label.is_string()) {
      throw ConfigError(where + "label: expected a string");
    }
    spec.label = label.get<std::string>();
    const json& disc = require(n, "discipline", where);
    const std::string d = disc.is_string() ? disc.get<std::string>() : disc.dump();
    if (d == "is") {
      spec.discipline = ServiceDiscipline::InfiniteServer;
    } else if (d == "fcfs") {
      spec.discipline = ServiceDiscipline::FcfsSingleServer;
    } else {
      throw ConfigError(
          fmt::format("{}discipline: unknown discipline '{}' (expected is or fcfs)", where, d));
    }
    spec.rate = as_number(require(n, "rate_per_s", where), where + "rate_per_s");
    nodes.push_back(std::move(spec));
  }

  const json& routing_json = require(doc, "routing", "");
  if (!routing_json.is_array()) {
    throw ConfigError("routing: expected an array of rows");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < routing_json.size(); ++i) {
    const json& row = routing_json[i];
    if (!row.is_array()) {
      throw ConfigError(fmt::format("routing[{}]: expected an array", i));
    }
    std::vector<double> values;
    for (std::size_t j = 0; j < row.size(); ++j) {
      values.push_back(as_number(row[j], fmt::format("routing[{}][{}]", i, j)));
    }
    rows.push_back(std::move(values));
  }

  ModelConfig config;
  const json& pool = require(doc, "pool_size", "");
  if (!pool.is_number_integer()) {
    throw ConfigError("pool_size: expected an integer");
  }
  config.model.pool_size = pool.get<int>();
  config.model.arrival_rate =
      per_hour_to_per_second(as_number(require(doc, "arrival_rate_per_h", ""), "arrival_rate_per_h"));
  config.model.inner = InnerNetwork(std::move(nodes), RoutingMatrix(rows));

  if (doc.contains("pick_labels")) {
    const json& picks = doc.at("pick_labels");
    if (!picks.is_array()) {
      throw ConfigError("pick_labels: expected an array of strings");
    }
    for (const auto& p : picks) {
      if (!p.is_string()) {
        throw ConfigError("pick_labels: expected an array of strings");
      }
      config.pick_labels.push_back(p.get<std::string>());
    }
  }
  return config;
}

ModelConfig load_model_file(const std::filesystem::path& path) {
  return parse_model_json(read_file(path));
}

std::string model_to_json(const ModelConfig& config) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : config.model.inner.nodes()) {
    doc["nodes"].push_back(
        {{"label", n.label}, {"discipline", std::string(to_string(n.discipline))}, {"rate_per_s", n.rate}});
  }
  const RoutingMatrix& r = config.model.inner.routing();
  doc["routing"] = json::array();
  for (std::size_t i = 0; i < r.size(); ++i) {
    doc["routing"].push_back(std::vector<double>(r.row(i).begin(), r.row(i).end()));
  }
  doc["pool_size"] = config.model.pool_size;
  doc["arrival_rate_per_h"] = per_second_to_per_hour(config.model.arrival_rate);
  if (!config.pick_labels.empty()) {
    doc["pick_labels"] = config.pick_labels;
  }
  return doc.dump(2);
}

namespace {

void assign_pair(std::array<double, 2>& target, const json& v, const std::string& field) {
  if (v.is_number()) {
    target = {v.get<double>(), v.get<double>()};
    return;
  }
  if (v.is_array() && v.size() == 2) {
    target = {as_number(v[0], field + "[0]"), as_number(v[1], field + "[1]")};
    return;
  }
  throw ConfigError(fmt::format("{}: expected a number or a two-element array", field));
}

}  // namespace

rmfs::RmfsParameters apply_parameter_overrides(rmfs::RmfsParameters p, std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object()) {
    throw ConfigError("parameter overrides: top level must be an object");
  }
  for (const auto& [key, v] : doc.items()) {
    if (key == "order_rate_per_h") {
      p.order_rate_per_h = as_number(v, key);
    } else if (key == "pod_order_ratio") {
      p.pod_order_ratio = as_number(v, key);
    } else if (key == "travel_to_pod_s") {
      p.travel_to_pod_s = as_number(v, key);
    } else if (key == "travel_to_pick_s") {
      assign_pair(p.travel_to_pick_s, v, key);
    } else if (key == "travel_pick_to_storage_s") {
      assign_pair(p.travel_pick_to_storage_s, v, key);
    } else if (key == "travel_pick_to_repl_s") {
      assign_pair(p.travel_pick_to_repl_s, v, key);
    } else if (key == "travel_repl_to_storage_s") {
      assign_pair(p.travel_repl_to_storage_s, v, key);
    } else if (key == "pick_time_s") {
      assign_pair(p.pick_time_s, v, key);
    } else if (key == "repl_time_s") {
      assign_pair(p.repl_time_s, v, key);
    } else if (key == "q_pick") {
      assign_pair(p.q_pick, v, key);
    } else if (key == "q_repl") {
      assign_pair(p.q_repl, v, key);
    } else if (key == "robots") {
      if (!v.is_number_integer()) {
        throw ConfigError("robots: expected an integer");
      }
      p.robots = v.get<int>();
    } else {
      throw ConfigError(fmt::format("{}: unknown parameter", key));
    }
  }
  rmfs::validate(p);
  return p;
}

rmfs::RmfsParameters load_parameter_file(const std::filesystem::path& path,
                                         rmfs::RmfsParameters base) {
  return apply_parameter_overrides(std::move(base), read_file(path));
}

}  // namespace soqn
