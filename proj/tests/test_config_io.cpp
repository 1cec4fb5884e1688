#include <filesystem>
#include <functional>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "soqn/config_io.hpp"
#include "soqn/error.hpp"

namespace soqn {
namespace {

constexpr const char* kTwoNode = R"({
  "nodes": [
    {"label": "t", "discipline": "is", "rate_per_s": 0.5},
    {"label": "p", "discipline": "fcfs", "rate_per_s": 2.0}
  ],
  "routing": [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
  "pool_size": 3,
  "arrival_rate_per_h": 1800,
  "pick_labels": ["p"]
})";

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ModelJson, Parses) {
  const ModelConfig config = parse_model_json(kTwoNode);
  ASSERT_EQ(config.model.inner.size(), 2u);
  EXPECT_EQ(config.model.inner.node(1).label, "t");
  EXPECT_FALSE(config.model.inner.node(1).is_fcfs());
  EXPECT_TRUE(config.model.inner.node(2).is_fcfs());
  EXPECT_DOUBLE_EQ(config.model.inner.node(2).rate, 2.0);
  EXPECT_EQ(config.model.pool_size, 3);
  EXPECT_DOUBLE_EQ(config.model.arrival_rate, 0.5);
  EXPECT_EQ(config.pick_labels, std::vector<std::string>{"p"});
  EXPECT_TRUE(validate_model(config.model).ok());
}

TEST(ModelJson, PickLabelsAreOptional) {
  std::string text = kTwoNode;
  text.replace(text.find(",\n  \"pick_labels\""), std::string(",\n  \"pick_labels\": [\"p\"]").size(),
               "");
  const ModelConfig config = parse_model_json(text);
  EXPECT_TRUE(config.pick_labels.empty());
}

TEST(ModelJson, RejectsUnknownDiscipline) {
  std::string text = kTwoNode;
  text.replace(text.find("\"fcfs\""), 6, "\"ps\"");
  const std::string msg = error_of([&] { parse_model_json(text); });
  EXPECT_NE(msg.find("nodes[1].discipline"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'ps'"), std::string::npos) << msg;
}

TEST(ModelJson, NamesMissingAndMistypedFields) {
  EXPECT_NE(error_of([] { parse_model_json(R"({"nodes": []})"); }).find("routing"),
            std::string::npos);
  std::string text = kTwoNode;
  text.replace(text.find("0.5"), 3, "\"x\"");
  EXPECT_NE(error_of([&] { parse_model_json(text); }).find("nodes[0].rate_per_s"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_model_json("{"); }).find("malformed JSON"), std::string::npos);
  EXPECT_NE(error_of([] { load_model_file("/nonexistent/model.json"); }).find("cannot open"),
            std::string::npos);
}

TEST(ModelJson, StructuralProblemsLeftToValidation) {
  std::string text = kTwoNode;
  text.replace(text.find("[1, 0, 0]"), 9, "[0.5, 0, 0]");
  const ModelConfig config = parse_model_json(text);
  EXPECT_TRUE(validate_model(config.model).mentions("row p sums to 0.5"))
      << validate_model(config.model).summary();
}

TEST(ModelJson, RoundTrip) {
  const ModelConfig config = parse_model_json(kTwoNode);
  const ModelConfig again = parse_model_json(model_to_json(config));
  ASSERT_EQ(again.model.inner.size(), config.model.inner.size());
  for (std::size_t k = 1; k <= config.model.inner.size(); ++k) {
    EXPECT_EQ(again.model.inner.node(k).label, config.model.inner.node(k).label);
    EXPECT_EQ(again.model.inner.node(k).discipline, config.model.inner.node(k).discipline);
    EXPECT_DOUBLE_EQ(again.model.inner.node(k).rate, config.model.inner.node(k).rate);
  }
  for (std::size_t i = 0; i <= 2; ++i) {
    for (std::size_t j = 0; j <= 2; ++j) {
      EXPECT_DOUBLE_EQ(again.model.inner.routing()(i, j), config.model.inner.routing()(i, j));
    }
  }
  EXPECT_EQ(again.model.pool_size, 3);
  EXPECT_DOUBLE_EQ(again.model.arrival_rate, config.model.arrival_rate);
  EXPECT_EQ(again.pick_labels, config.pick_labels);
}

TEST(ModelJson, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "soqn_test_model.json";
  std::ofstream(path) << kTwoNode;
  EXPECT_EQ(load_model_file(path).model.pool_size, 3);
  std::filesystem::remove(path);
}

TEST(ParameterOverrides, ScalarsAndArrays) {
  const auto p = apply_parameter_overrides(
      rmfs::default_parameters(),
      R"({"robots": 25, "pick_time_s": 12, "repl_time_s": [20, 40], "order_rate_per_h": 400})");
  EXPECT_EQ(p.robots, 25);
  EXPECT_DOUBLE_EQ(p.pick_time_s[0], 12.0);
  EXPECT_DOUBLE_EQ(p.pick_time_s[1], 12.0);
  EXPECT_DOUBLE_EQ(p.repl_time_s[0], 20.0);
  EXPECT_DOUBLE_EQ(p.repl_time_s[1], 40.0);
  EXPECT_DOUBLE_EQ(p.order_rate_per_h, 400.0);
  EXPECT_DOUBLE_EQ(p.travel_to_pod_s, 18.4);  // untouched
}

TEST(ParameterOverrides, Rejections) {
  const auto base = rmfs::default_parameters();
  EXPECT_NE(error_of([&] { apply_parameter_overrides(base, R"({"speed": 1})"); })
                .find("speed: unknown parameter"),
            std::string::npos);
  EXPECT_NE(error_of([&] { apply_parameter_overrides(base, R"({"q_pick": [0.2, 0.2]})"); })
                .find("q_pick"),
            std::string::npos);
  EXPECT_NE(error_of([&] { apply_parameter_overrides(base, R"({"robots": 2.5})"); })
                .find("robots"),
            std::string::npos);
  EXPECT_NE(error_of([&] { apply_parameter_overrides(base, R"({"pick_time_s": [1, 2, 3]})"); })
                .find("pick_time_s"),
            std::string::npos);
  EXPECT_THROW(apply_parameter_overrides(base, "[]"), ConfigError);
}

}  // namespace
}  // namespace soqn
