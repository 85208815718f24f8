#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "aggrokin/config.hpp"
#include "aggrokin/errors.hpp"

using namespace aggrokin;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::configuration);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Config, ParsesEveryShippedExample) {
  const std::filesystem::path dir = std::filesystem::path(AGGROKIN_SOURCE_DIR) / "configs";
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(parse_config(entry.path())) << entry.path();
    EXPECT_EQ(to_string(parse_config(entry.path()).experiment), entry.path().stem().string());
    ++n;
  }
  EXPECT_EQ(n, 13);
}

TEST(Config, ExperimentNamesRoundTrip) {
  ASSERT_EQ(experiment_names().size(), 13u);
  for (const auto& name : experiment_names()) EXPECT_EQ(to_string(experiment_from_string(name)), name);
  EXPECT_THROW(experiment_from_string("meso"), Error);
}

TEST(Config, UnknownKeysNamePath) {
  EXPECT_TRUE(contains(config_error(R"({"experiment":"equilibria","params":{"m":1,"lambda":0.1,"mu":2},"beta":1})"),
                       "unknown key 'params.mu'"));
  EXPECT_TRUE(contains(config_error(R"({"experiment":"equilibria","params":{"m":1,"lambda":0.1},"beta":1,"extra":0})"),
                       "unknown key 'extra'"));
  EXPECT_TRUE(contains(
      config_error(R"({"experiment":"recurrence","params":{"m":1,"lambda":1},"run":{"d0":20,"replicas":3}})"),
      "run.replicas"));
}

TEST(Config, TypeErrorsNameExpectedType) {
  const auto msg = config_error(R"({"experiment":"equilibria","params":{"m":"one","lambda":0.1},"beta":1})");
  EXPECT_TRUE(contains(msg, "'params.m': expected number, got string")) << msg;
  EXPECT_TRUE(contains(config_error(R"({"experiment":"equilibria","params":{"lambda":0.1},"beta":1})"), "params.m"));
}

TEST(Config, ExperimentPreconditions) {
  EXPECT_TRUE(contains(config_error(R"({"experiment":"equilibria","params":{"m":1,"lambda":0.1}})"), "beta"));
  EXPECT_TRUE(contains(config_error(R"({"experiment":"recurrence","params":{"m":1,"lambda":1}})"), "d0"));
  const std::string micro = R"({"experiment":"micro-meso-compare","params":{"m":1,"lambda":1},
    "potential":{"kind":"indicator-box","half_width":0.5},"grid":{"L":10,"n":256},
    "initial":{"type":"constant","value":1},"run":{"replicas":10}})";
  EXPECT_TRUE(contains(config_error(micro), "64"));
  const std::string coarse = R"({"experiment":"meso-run","params":{"m":1,"lambda":1},
    "potential":{"kind":"indicator-box","half_width":0.5},"grid":{"L":10,"n":16},
    "initial":{"type":"constant","value":1}})";
  EXPECT_FALSE(config_error(coarse).empty());
  EXPECT_FALSE(config_error("{not json").empty());
}

TEST(Config, InitialShapes) {
  const auto cfg = parse_config_text(R"({"experiment":"meso-run","params":{"m":1,"lambda":0.2},
    "potential":{"kind":"indicator-box","half_width":0.5},"grid":{"L":8,"n":64},
    "initial":{"type":"bump","center":1,"width":2,"height":3,"base":0.5}})");
  const auto u = cfg.initial->build(*cfg.grid);
  EXPECT_NEAR(u.values[cfg.grid->nearest(1.0)], 3.5, 1e-12);
  EXPECT_NEAR(u.values[cfg.grid->nearest(2.0)], 0.5 + 3.0 * 0.5, 1e-12);
  EXPECT_NEAR(u.values[cfg.grid->nearest(-2.0)], 0.5, 1e-12);
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_DOUBLE_EQ(cfg.run.t_end, 1.0);
}
