#pragma once

#include <optional>
#include <string>

namespace soqn::cli {

/// One line of the result CSV. NaN numbers and empty optionals render as
/// empty fields.
struct ResultRow {
  std::string scenario;
  std::string layout;
  int robots = 0;
  double lambda_per_h = 0.0;
  std::string method;  // "approx" or "sim"
  bool stable = false;
  double external_wait_s = 0.0;
  double inner_s = 0.0;
  double turnover_s = 0.0;
  std::optional<double> ci_lo_s;
  std::optional<double> ci_hi_s;
  std::optional<double> rel_error;  // compare only
};

inline constexpr const char* kResultHeader =
    "scenario,layout,robots,lambda_per_h,method,stable,external_wait_s,inner_s,turnover_s,"
    "ci_lo_s,ci_hi_s";
inline constexpr const char* kStabilityHeader = "layout,robots,max_lambda_per_h";

std::string result_header(bool with_rel_error);
std::string format_row(const ResultRow& row, bool with_rel_error);
std::string format_stability_row(const std::string& layout, int robots, double max_lambda_per_h);

/// Fixed six-decimal rendering; NaN becomes an empty field.
std::string format_number(double value);

}  // namespace soqn::cli
