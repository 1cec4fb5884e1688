#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "csv.hpp"
#include "soqn/approximation.hpp"
#include "soqn/config_io.hpp"
#include "soqn/error.hpp"
#include "soqn/rmfs.hpp"
#include "soqn/simulator.hpp"
#include "soqn/sweep.hpp"

namespace soqn::cli {

namespace {

struct Options {
  std::vector<std::string> layouts;
  std::string model_file;
  std::string robots;
  std::string lambdas_per_h;
  std::string params_file;
  std::string method = "approx";
  std::uint64_t seed = 1;
  int reps = kDefaultReplications;
  double horizon_s = kDefaultHorizonS;
  std::optional<double> warmup_s;
  std::string out;
  std::string turnover_definition = "full";
  std::string format = "csv";
};

/// A model family addressed by one layout name: the inner network is fixed,
/// robots and arrival rate vary per sweep point.
struct Scenario {
  std::string name;
  InnerNetwork inner;
  std::vector<std::string> pick_labels;
  int default_robots = 1;
  double default_lambda = 0.0;  // tasks per second
};

std::vector<Scenario> resolve_scenarios(const Options& o) {
  std::vector<Scenario> scenarios;
  if (!o.model_file.empty()) {
    if (!o.layouts.empty()) {
      throw ConfigError("--layout and --model are mutually exclusive");
    }
    if (!o.params_file.empty()) {
      throw ConfigError("--params applies to layout presets only, not to --model");
    }
    ModelConfig cfg = load_model_file(o.model_file);
    const ValidationResult v = validate_model(cfg.model);
    if (!v) {
      throw ConfigError("model: " + v.summary());
    }
    scenarios.push_back(Scenario{"custom", cfg.model.inner, cfg.pick_labels, cfg.model.pool_size,
                                 cfg.model.arrival_rate});
    return scenarios;
  }

  const rmfs::RmfsParameters params =
      o.params_file.empty() ? rmfs::default_parameters() : load_parameter_file(o.params_file);
  std::vector<std::string> names;
  for (const auto& l : o.layouts.empty() ? std::vector<std::string>{"two-station"} : o.layouts) {
    if (l == "both") {
      names.insert(names.end(), {"two-station", "combi"});
    } else {
      names.push_back(l);
    }
  }
  for (const auto& name : names) {
    const SoqnModel model = rmfs::build_network(rmfs::parse_layout(name), params);
    scenarios.push_back(
        Scenario{name, model.inner, rmfs::pick_labels(), model.pool_size, model.arrival_rate});
  }
  return scenarios;
}

int parse_int(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used == text.size()) {
      return value;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("{}: '{}' is not an integer", field, text));
}

double parse_double(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) {
      return value;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("{}: '{}' is not a number", field, text));
}

std::pair<int, int> robot_range(const Options& o, const Scenario& s) {
  if (o.robots.empty()) {
    return {s.default_robots, s.default_robots};
  }
  const auto dots = o.robots.find("..");
  const int lo = parse_int(o.robots.substr(0, dots), "--robots");
  const int hi = dots == std::string::npos ? lo : parse_int(o.robots.substr(dots + 2), "--robots");
  if (lo < 1 || hi < lo) {
    throw ConfigError(fmt::format("--robots: range '{}' is empty or starts below 1", o.robots));
  }
  return {lo, hi};
}

std::vector<double> arrival_rates(const Options& o, const Scenario& s) {
  if (o.lambdas_per_h.empty()) {
    return {s.default_lambda};
  }
  std::vector<double> rates;
  std::stringstream in(o.lambdas_per_h);
  std::string item;
  while (std::getline(in, item, ',')) {
    const double per_h = parse_double(item, "--lambda-per-h");
    if (!(per_h > 0.0) || !std::isfinite(per_h)) {
      throw ConfigError(fmt::format("--lambda-per-h: {} must be finite and > 0", item));
    }
    rates.push_back(per_hour_to_per_second(per_h));
  }
  if (rates.empty()) {
    throw ConfigError("--lambda-per-h: no values given");
  }
  return rates;
}

std::vector<SweepPoint> sweep_points(const Options& o, const Scenario& s) {
  const auto [lo, hi] = robot_range(o, s);
  const std::vector<double> rates = arrival_rates(o, s);
  std::vector<SweepPoint> points;
  for (int n = lo; n <= hi; ++n) {
    for (double rate : rates) {
      points.push_back(SweepPoint{n, rate});
    }
  }
  return points;
}

TurnoverDefinition turnover_definition(const Options& o) {
  if (o.turnover_definition == "full") {
    return TurnoverDefinition::Full;
  }
  if (o.turnover_definition == "exclude-travel") {
    return TurnoverDefinition::ExcludeTravel;
  }
  throw ConfigError(fmt::format("--turnover-definition: unknown value '{}'", o.turnover_definition));
}

SimConfig sim_config(const Options& o, const Scenario& s) {
  SimConfig c;
  c.pick_labels = s.pick_labels;
  c.horizon_s = o.horizon_s;
  c.warmup_s = o.warmup_s.value_or(0.1 * o.horizon_s);
  c.seed = o.seed;
  c.replications = o.reps;
  return c;
}

void require_picks(const Scenario& s) {
  if (s.pick_labels.empty()) {
    throw ConfigError("pick_labels: the model file names no picking stations");
  }
}

ResultRow approx_row(const std::string& scenario, const Scenario& s, const SweepPoint& p,
                     const PerformanceReport& r) {
  ResultRow row;
  row.scenario = scenario;
  row.layout = s.name;
  row.robots = p.robots;
  row.lambda_per_h = per_second_to_per_hour(p.arrival_rate);
  row.method = "approx";
  row.stable = r.stable;
  row.external_wait_s = r.external_wait_s;
  row.inner_s = r.inner_processing_s;
  row.turnover_s = r.turnover_s;
  return row;
}

ResultRow sim_row(const std::string& scenario, const Scenario& s, const SweepPoint& p,
                  bool stable, const ReplicationSummary& r) {
  ResultRow row;
  row.scenario = scenario;
  row.layout = s.name;
  row.robots = p.robots;
  row.lambda_per_h = per_second_to_per_hour(p.arrival_rate);
  row.method = "sim";
  row.stable = stable;
  row.external_wait_s = r.external_wait_s.mean;
  row.inner_s = r.inner_processing_s.mean;
  row.turnover_s = r.turnover_s.mean;
  if (r.turnover_s.half_width) {
    row.ci_lo_s = r.turnover_s.lo();
    row.ci_hi_s = r.turnover_s.hi();
  }
  return row;
}

class Output {
 public:
  Output(const Options& o, std::ostream& fallback) : fallback_(fallback), path_(o.out) {}

  void line(const std::string& text) { buffer_ << text << '\n'; }

  void flush() {
    if (path_.empty()) {
      fallback_ << buffer_.str();
      return;
    }
    std::ofstream file(path_, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw ConfigError(fmt::format("--out: cannot write '{}'", path_));
    }
    file << buffer_.str();
  }

 private:
  std::ostream& fallback_;
  std::string path_;
  std::ostringstream buffer_;
};

void print_table(Output& out, const Scenario& s, const SweepPoint& p, const PerformanceReport& r) {
  out.line(fmt::format("layout                 {}", s.name));
  out.line(fmt::format("robots                 {}", p.robots));
  out.line(fmt::format("arrival rate           {:.3f} tasks/h", per_second_to_per_hour(p.arrival_rate)));
  out.line(fmt::format("capacity nu(N)         {:.3f} tasks/h", per_second_to_per_hour(r.capacity)));
  out.line(fmt::format("stable                 {}", r.stable ? "yes" : "no"));
  if (r.stable) {
    out.line(fmt::format("adjusted arrival rate  {:.3f} tasks/h",
                         per_second_to_per_hour(r.adjusted_arrival_rate)));
    out.line(fmt::format("external wait          {:.3f} s", r.external_wait_s));
    out.line(fmt::format("inner processing       {:.3f} s ({})", r.inner_processing_s,
                         to_string(r.definition)));
    out.line(fmt::format("turnover               {:.3f} s", r.turnover_s));
  }
  for (const auto& [label, u] : r.per_node_utilization) {
    out.line(fmt::format("utilization {:<10} {:.4f}", label, u));
  }
  out.line("");
}

int cmd_analyze(const Options& o, std::ostream& stdout_stream) {
  if (o.format != "csv" && o.format != "table") {
    throw ConfigError(fmt::format("--format: unknown value '{}'", o.format));
  }
  const TurnoverDefinition def = turnover_definition(o);
  Output out(o, stdout_stream);
  if (o.format == "csv") {
    out.line(result_header(false));
  }
  bool any_unstable = false;
  for (const Scenario& s : resolve_scenarios(o)) {
    require_picks(s);
    const auto points = sweep_points(o, s);
    const auto reports = evaluate_sweep(s.inner, points, s.pick_labels, def, Execution::Serial);
    for (std::size_t i = 0; i < points.size(); ++i) {
      any_unstable = any_unstable || !reports[i].stable;
      if (o.format == "csv") {
        out.line(format_row(approx_row("analyze", s, points[i], reports[i]), false));
      } else {
        print_table(out, s, points[i], reports[i]);
      }
    }
  }
  out.flush();
  return any_unstable ? kExitUnstable : kExitOk;
}

int cmd_sweep_stability(const Options& o, std::ostream& stdout_stream) {
  Output out(o, stdout_stream);
  out.line(kStabilityHeader);
  for (const Scenario& s : resolve_scenarios(o)) {
    const auto [lo, hi] = robot_range(o, s);
    const std::vector<double> curve = stability_curve(s.inner, lo, hi);
    for (int n = lo; n <= hi; ++n) {
      out.line(format_stability_row(s.name, n,
                                    per_second_to_per_hour(curve[static_cast<std::size_t>(n - lo)])));
    }
  }
  out.flush();
  return kExitOk;
}

/// Shared body of `sweep turnover`, `simulate` and `compare`.
int run_results(const Options& o, const std::string& scenario_name, bool approx, bool sim,
                bool rel_error, std::ostream& stdout_stream) {
  const TurnoverDefinition def = turnover_definition(o);
  if (sim && def != TurnoverDefinition::Full) {
    throw ConfigError("--turnover-definition exclude-travel is available for approx rows only");
  }
  Output out(o, stdout_stream);
  out.line(result_header(rel_error));
  for (const Scenario& s : resolve_scenarios(o)) {
    require_picks(s);
    const auto points = sweep_points(o, s);
    // Stability is a model property; sim rows report it too.
    const auto reports = evaluate_sweep(s.inner, points, s.pick_labels, def);
    std::vector<ReplicationSummary> sims;
    if (sim) {
      sims = simulate_sweep(s.inner, points, sim_config(o, s));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (approx) {
        out.line(format_row(approx_row(scenario_name, s, points[i], reports[i]), rel_error));
      }
      if (sim) {
        ResultRow row = sim_row(scenario_name, s, points[i], reports[i].stable, sims[i]);
        if (rel_error && reports[i].stable && row.turnover_s > 0.0) {
          row.rel_error = (reports[i].turnover_s - row.turnover_s) / row.turnover_s;
        }
        out.line(format_row(row, rel_error));
      }
    }
  }
  out.flush();
  return kExitOk;
}

void add_model_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--layout", o.layouts, "Layout preset: two-station, combi or both (repeatable)");
  cmd.add_option("--model", o.model_file, "Model config JSON (alternative to --layout)");
  cmd.add_option("--robots", o.robots, "Robot count N or range A..B");
  cmd.add_option("--lambda-per-h", o.lambdas_per_h,
                 "Task arrival rate in tasks/h; comma-separated list for sweeps");
  cmd.add_option("--params", o.params_file, "JSON parameter overrides for layout presets");
  cmd.add_option("--out", o.out, "Write output to this path instead of standard output");
}

void add_turnover_option(CLI::App& cmd, Options& o) {
  cmd.add_option("--turnover-definition", o.turnover_definition,
                 "full (default) or exclude-travel");
}

void add_sim_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--seed", o.seed, "Base seed");
  cmd.add_option("--reps", o.reps, "Replications per point");
  cmd.add_option("--horizon-s", o.horizon_s, "Simulated horizon in seconds");
  cmd.add_option("--warmup-s", o.warmup_s, "Warmup in seconds (default 10% of the horizon)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-open queueing network toolkit for robotic mobile fulfilment layouts", "soqn"};
  app.require_subcommand(1);

  Options o;
  auto* analyze = app.add_subcommand("analyze", "Evaluate one or more configurations analytically");
  add_model_options(*analyze, o);
  add_turnover_option(*analyze, o);
  analyze->add_option("--format", o.format, "csv (default) or table");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
  sweep->require_subcommand(1);
  auto* stability = sweep->add_subcommand("stability", "Maximal stable arrival rate per robot count");
  add_model_options(*stability, o);
  auto* turnover = sweep->add_subcommand("turnover", "Turnover time per robot count");
  add_model_options(*turnover, o);
  add_turnover_option(*turnover, o);
  add_sim_options(*turnover, o);
  turnover->add_option("--method", o.method, "approx (default), sim or both");

  auto* simulate = app.add_subcommand("simulate", "Replicated discrete-event simulation");
  add_model_options(*simulate, o);
  add_sim_options(*simulate, o);

  auto* compare = app.add_subcommand("compare", "Approximation and simulation side by side");
  add_model_options(*compare, o);
  add_sim_options(*compare, o);

  std::vector<const char*> argv{"soqn"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (*analyze) {
      return cmd_analyze(o, out);
    }
    if (*stability) {
      return cmd_sweep_stability(o, out);
    }
    if (*turnover) {
      if (o.method != "approx" && o.method != "sim" && o.method != "both") {
        throw ConfigError(fmt::format("--method: unknown value '{}'", o.method));
      }
      return run_results(o, "sweep-turnover", o.method != "sim", o.method != "approx", false, out);
    }
    if (*simulate) {
      return run_results(o, "simulate", false, true, false, out);
    }
    if (*compare) {
      return run_results(o, "compare", true, true, true, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace soqn::cli
