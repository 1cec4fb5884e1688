#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/csv.hpp"

namespace soqn::cli {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    result.push_back(line);
  }
  return result;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> result;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) {
    result.push_back(item);
  }
  if (!line.empty() && line.back() == ',') {
    result.emplace_back();
  }
  return result;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

TEST(Cli, AnalyzeStableCombi) {
  const Result r = invoke({"analyze", "--layout", "combi", "--robots", "16"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], kResultHeader);
  const auto row = fields(out[1]);
  ASSERT_EQ(row.size(), 11u);
  EXPECT_EQ(row[0], "analyze");
  EXPECT_EQ(row[1], "combi");
  EXPECT_EQ(row[2], "16");
  EXPECT_EQ(row[4], "approx");
  EXPECT_EQ(row[5], "true");
  EXPECT_GT(std::stod(row[8]), 0.0);
}

TEST(Cli, AnalyzeUnstableTwoStation) {
  const Result r = invoke({"analyze", "--layout", "two-station", "--robots", "16"});
  EXPECT_EQ(r.code, kExitUnstable);
  const auto row = fields(lines(r.out).at(1));
  EXPECT_EQ(row[5], "false");
  EXPECT_EQ(row[8], "");
}

TEST(Cli, AnalyzeTable) {
  const Result r = invoke({"analyze", "--layout", "both", "--robots", "20", "--format", "table"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("turnover"), std::string::npos);
  EXPECT_NE(r.out.find("combi"), std::string::npos);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(invoke({"analyze", "--layout", "triple"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"analyze", "--robots", "x"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"analyze", "--lambda-per-h", "-5"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"analyze", "--turnover-definition", "other"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"analyze", "--model", "/nonexistent.json"}).code, kExitConfigError);

  const auto params = temp_file("soqn_cli_bad_params.json");
  std::ofstream(params) << R"({"speed": 3})";
  const Result r = invoke({"analyze", "--params", params.string()});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("speed"), std::string::npos) << r.err;
  std::filesystem::remove(params);
}

TEST(Cli, StabilitySweep) {
  const Result r = invoke({"sweep", "stability", "--layout", "both", "--robots", "15..60"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto out = lines(r.out);
  EXPECT_EQ(out[0], kStabilityHeader);
  ASSERT_EQ(out.size(), 1u + 2 * 46);
  auto value = [&](const std::string& layout, int n) {
    for (const auto& line : out) {
      const auto f = fields(line);
      if (f[0] == layout && f[1] == std::to_string(n)) {
        return std::stod(f[2]);
      }
    }
    ADD_FAILURE() << layout << " " << n;
    return 0.0;
  };
  EXPECT_LT(value("two-station", 16), 468.0);
  EXPECT_GE(value("two-station", 17), 468.0);
  EXPECT_LT(value("combi", 15), 468.0);
  EXPECT_GE(value("combi", 16), 468.0);
  for (int n = 16; n <= 60; ++n) {
    EXPECT_GT(value("combi", n), value("two-station", n));
    EXPECT_GT(value("two-station", n), value("two-station", n - 1));
  }
  EXPECT_LT(value("two-station", 60), 720.0);
}

TEST(Cli, TurnoverSweepShowsLayoutGap) {
  const Result r = invoke({"sweep", "turnover", "--layout", "both", "--robots", "17..18"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 5u);
  const double two17 = std::stod(fields(out[1])[8]);
  const double two18 = std::stod(fields(out[2])[8]);
  const double combi17 = std::stod(fields(out[3])[8]);
  const double combi18 = std::stod(fields(out[4])[8]);
  EXPECT_NEAR(100.0 * (two17 - combi17) / two17, 64.0, 8.0);
  EXPECT_NEAR(100.0 * (two18 - combi18) / two18, 30.0, 8.0);
}

TEST(Cli, SimulateIsReproducible) {
  const std::vector<std::string> args{"simulate", "--layout", "combi",    "--robots", "20",
                                      "--seed",   "42",       "--reps",   "3",        "--horizon-s",
                                      "20000"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto row = fields(lines(a.out).at(1));
  EXPECT_EQ(row[0], "simulate");
  EXPECT_EQ(row[4], "sim");
  EXPECT_FALSE(row[9].empty());
  EXPECT_LE(std::stod(row[9]), std::stod(row[8]));
  EXPECT_GE(std::stod(row[10]), std::stod(row[8]));

  auto other = args;
  other[5] = "43";
  EXPECT_NE(invoke(other).out, a.out);
}

TEST(Cli, CompareAddsRelativeError) {
  const Result r = invoke({"compare", "--layout", "combi", "--robots", "20", "--reps", "3",
                           "--horizon-s", "20000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto out = lines(r.out);
  EXPECT_EQ(out[0], result_header(true));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(fields(out[1])[4], "approx");
  EXPECT_EQ(fields(out[2])[4], "sim");
  EXPECT_FALSE(fields(out[2])[11].empty());
}

TEST(Cli, ExcludeTravelIsApproximationOnly) {
  EXPECT_EQ(invoke({"simulate", "--turnover-definition", "exclude-travel", "--reps", "2",
                    "--horizon-s", "10000"})
                .code,
            kExitConfigError);
  EXPECT_EQ(invoke({"analyze", "--turnover-definition", "exclude-travel"}).code, kExitOk);
}

TEST(Cli, OutWritesFile) {
  const auto path = temp_file("soqn_cli_out.csv");
  std::filesystem::remove(path);
  const Result r = invoke({"analyze", "--layout", "both", "--out", path.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  const auto out = lines(content.str());
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], kResultHeader);
  std::filesystem::remove(path);
}

TEST(Cli, ModelFile) {
  const auto path = temp_file("soqn_cli_model.json");
  std::ofstream(path) << R"({
    "nodes": [{"label": "p", "discipline": "fcfs", "rate_per_s": 1.0}],
    "routing": [[0, 1], [1, 0]],
    "pool_size": 1,
    "arrival_rate_per_h": 1800,
    "pick_labels": ["p"]
  })";
  const Result r = invoke({"analyze", "--model", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto row = fields(lines(r.out).at(1));
  EXPECT_EQ(row[1], "custom");
  EXPECT_EQ(row[6], "1.000000");  // M/M/1 wait at rho = 0.5
  EXPECT_EQ(invoke({"analyze", "--model", path.string(), "--layout", "combi"}).code,
            kExitConfigError);
  std::filesystem::remove(path);
}

TEST(Cli, ParamsOverride) {
  const auto path = temp_file("soqn_cli_params.json");
  std::ofstream(path) << R"({"pick_time_s": 5})";
  const Result r = invoke({"sweep", "stability", "--params", path.string(), "--robots", "60"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_GT(std::stod(fields(lines(r.out).at(1))[2]), 720.0);
  std::filesystem::remove(path);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(1.5), "1.500000");
  EXPECT_EQ(format_number(std::nan("")), "");
  EXPECT_EQ(result_header(true), std::string(kResultHeader) + ",rel_error");
}

}  // namespace
}  // namespace soqn::cli
