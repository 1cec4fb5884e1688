#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "soqn/model.hpp"
#include "soqn/rmfs.hpp"

namespace soqn {

/// A model read from a JSON config file.
///
///   { "nodes": [{"label": str, "discipline": "is"|"fcfs", "rate_per_s": num}],
///     "routing": [[num]], "pool_size": int, "arrival_rate_per_h": num,
///     "pick_labels": [str] }
///
/// Row/column 0 of "routing" is the pool. "pick_labels" is optional.
struct ModelConfig {
  SoqnModel model;
  std::vector<std::string> pick_labels;
};

/// Throws ConfigError naming the offending field. Does not run
/// validate_model; structural problems are left to the caller.
ModelConfig parse_model_json(std::string_view text);
ModelConfig load_model_file(const std::filesystem::path& path);

std::string model_to_json(const ModelConfig& config);

/// Merges a JSON object of RmfsParameters fields over `base`. Per-station
/// fields accept a number (both stations) or a two-element array. Unknown
/// keys are rejected.
rmfs::RmfsParameters apply_parameter_overrides(rmfs::RmfsParameters base, std::string_view text);
rmfs::RmfsParameters load_parameter_file(const std::filesystem::path& path,
                                         rmfs::RmfsParameters base = rmfs::default_parameters());

}  // namespace soqn
