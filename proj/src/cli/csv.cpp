#include "csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace soqn::cli {

std::string format_number(double value) {
  if (std::isnan(value)) {
    return {};
  }
  return fmt::format("{:.6f}", value);
}

std::string result_header(bool with_rel_error) {
  std::string header = kResultHeader;
  if (with_rel_error) {
    header += ",rel_error";
  }
  return header;
}

std::string format_row(const ResultRow& row, bool with_rel_error) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; };
  std::string line = fmt::format("{},{},{},{},{},{},{},{},{},{},{}", row.scenario, row.layout,
                                 row.robots, format_number(row.lambda_per_h), row.method,
                                 row.stable ? "true" : "false", format_number(row.external_wait_s),
                                 format_number(row.inner_s), format_number(row.turnover_s),
                                 opt(row.ci_lo_s), opt(row.ci_hi_s));
  if (with_rel_error) {
    line += "," + opt(row.rel_error);
  }
  return line;
}

std::string format_stability_row(const std::string& layout, int robots, double max_lambda_per_h) {
  return fmt::format("{},{},{}", layout, robots, format_number(max_lambda_per_h));
}

}  // namespace soqn::cli
