#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ddsm/config_file.hpp"
#include "ddsm/trace_io.hpp"
#include "generators.hpp"

namespace ddsm {
namespace {

TEST(TraceIo, RoundTripIsIdentityOnRandomRuns) {
  std::mt19937_64 rng(0xBEEF);
  for (int i = 0; i < 200; ++i) {
    const auto rc = testing::random_case(rng);
    const Trace t = run(rc.config, registry_lookup(rc.objective));
    const std::string text = trace_to_string(t);
    const Trace back = trace_from_string(text);
    ASSERT_EQ(back, t) << "case " << i;
    ASSERT_EQ(trace_to_string(back), text) << "case " << i;
  }
}

TEST(TraceIo, InfiniteValuesAndDomainFlagsSurvive) {
  ObjectiveSpec walled{"walled", 1, [](std::span<const double> x) { return x[0] < -0.3 ? kPlusInfinity : x[0] * x[0]; },
                       [](std::span<const double> x) { return x[0] < 0.7; }};
  AlgoConfig c;
  c.x0 = {0.5};
  c.alpha0 = 0.5;
  c.poll_directions = "pm1";
  c.revealing_radius = 1.0;
  c.revealing_count = 3;
  c.max_iterations = 30;
  const Trace t = run(c, walled);
  bool saw_inf = false, saw_outside = false;
  for (const auto& r : t.records)
    for (const auto& o : r.outcomes)
      for (const auto& tr : o.trials) {
        saw_inf |= tr.in_domain && tr.value == kPlusInfinity;
        saw_outside |= !tr.in_domain;
      }
  EXPECT_TRUE(saw_inf);
  EXPECT_TRUE(saw_outside);
  EXPECT_EQ(trace_from_string(trace_to_string(t)), t);
}

TEST(TraceIo, ShortestRoundTripNumbers) {
  AlgoConfig c;
  c.x0 = {0.1};
  c.alpha0 = 1.0 / 3.0;
  c.poll_directions = "pm1";
  c.max_iterations = 3;
  const Trace t = run(c, registry_lookup("quadratic_1d"));
  const std::string text = trace_to_string(t);
  EXPECT_NE(text.find("\"x0\":[0.1]"), std::string::npos);
  EXPECT_NE(text.find("0.3333333333333333"), std::string::npos);
}

TEST(TraceIo, CorruptInputIsRejected) {
  AlgoConfig c;
  c.x0 = {0.5};
  c.poll_directions = "pm1";
  c.max_iterations = 4;
  const std::string good = trace_to_string(run(c, registry_lookup("abs")));

  EXPECT_THROW(trace_from_string(""), TraceFormatError);
  EXPECT_THROW(trace_from_string("not json\n"), TraceFormatError);
  EXPECT_THROW(trace_from_string("{\"format\":\"other\",\"version\":1}\n"), TraceFormatError);

  const std::string truncated = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
  EXPECT_THROW(trace_from_string(truncated), TraceFormatError);

  std::string broken = good;
  broken.replace(broken.find("\"poll\""), 6, "\"pole\"");
  EXPECT_THROW(trace_from_string(broken), TraceFormatError);

  std::string missing = good;
  missing.replace(missing.find("\"alpha_next\""), 12, "\"alpha_nxt\"");
  EXPECT_THROW(trace_from_string(missing), TraceFormatError);
}

constexpr const char* kGoodConfig = R"(# sample
[objective]
name = counterexample

[algorithm]
x0 = 1.25
alpha0 = 0.25
beta1 = 0.5
beta2 = 0.5
gamma = 1
revealing_radius = 2   # enables the revealing poll
revealing_count = 3
search_schedule = counterexample
poll_directions = pm1
forcing = zero
seed = 18446744073709551615
max_iterations = 52
alpha_min = 1e-9

[output]
trace_path = out.jsonl
format = jsonl
)";

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

TEST(ConfigFile, ParsesAllFields) {
  const auto cfg = parse(kGoodConfig);
  EXPECT_EQ(cfg.objective, "counterexample");
  EXPECT_EQ(cfg.algorithm.x0, Point{1.25});
  EXPECT_EQ(cfg.algorithm.alpha0, 0.25);
  EXPECT_EQ(cfg.algorithm.revealing_radius, 2.0);
  EXPECT_EQ(cfg.algorithm.revealing_count, 3u);
  EXPECT_EQ(cfg.algorithm.seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.algorithm.max_iterations, 52u);
  EXPECT_EQ(cfg.algorithm.alpha_min, 1e-9);
  EXPECT_EQ(cfg.trace_path, "out.jsonl");
}

TEST(ConfigFile, OptionalKeysDefault) {
  std::string text = kGoodConfig;
  for (const char* key : {"revealing_radius = 2   # enables the revealing poll\n", "revealing_count = 3\n",
                          "seed = 18446744073709551615\n", "alpha_min = 1e-9\n"})
    text = replace_line(text, key, "");
  const auto cfg = parse(text);
  EXPECT_FALSE(cfg.algorithm.revealing_radius.has_value());
  EXPECT_EQ(cfg.algorithm.revealing_count, 1u);
  EXPECT_EQ(cfg.algorithm.seed, 0u);
  EXPECT_EQ(cfg.algorithm.alpha_min, 0.0);
}

TEST(ConfigFile, VectorStartingPoint) {
  std::string text = replace_line(kGoodConfig, "x0 = 1.25", "x0 = 1.5, -2");
  text = replace_line(text, "name = counterexample", "name = abs");
  // Two coordinates against a 1-D objective are caught when running, not parsing.
  text = replace_line(text, "search_schedule = counterexample", "search_schedule = none");
  text = replace_line(text, "poll_directions = pm1", "poll_directions = coordinate");
  EXPECT_EQ(parse(text).algorithm.x0, (Point{1.5, -2.0}));
}

TEST(ConfigFile, StrictErrorsNameTheField) {
  EXPECT_NE(error_of(replace_line(kGoodConfig, "beta1 = 0.5", "beta1 = 0.75")).find("test.cfg:8: beta1"),
            std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "gamma = 1", "gama = 1")).find("gama"), std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "[output]", "[outputs]")).find("unknown section"), std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "alpha0 = 0.25", "alpha0 = 1/4")).find("alpha0"), std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "alpha0 = 0.25", "alpha0 = inf")).find("alpha0"), std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "max_iterations = 52", "max_iterations = -1")).find("max_iterations"),
            std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "forcing = zero", "")).find("forcing: missing"), std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "forcing = zero", "forcing = zero\nforcing = quadratic"))
                .find("duplicate"),
            std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "forcing = zero", "forcing = cubic")).find("forcing"),
            std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "name = counterexample", "name = bogus")).find("bogus"),
            std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "format = jsonl", "format = xml")).find("format"), std::string::npos);
  EXPECT_NE(error_of(std::string("x0 = 1\n") + kGoodConfig).find("outside of any section"), std::string::npos);
  EXPECT_NE(error_of(replace_line(kGoodConfig, "gamma = 1", "gamma 1")).find("key = value"), std::string::npos);
}

TEST(ConfigFile, BundledConfigsParse) {
  for (const char* name : {"counterexample.cfg", "revealing.cfg", "density.cfg", "quadratic.cfg"}) {
    const auto cfg = load_experiment_config(std::string(DDSM_CONFIG_DIR) + "/" + name);
    EXPECT_NO_THROW(cfg.algorithm.validate()) << name;
  }
  EXPECT_THROW(load_experiment_config("/nonexistent/x.cfg"), ConfigError);
}

}  // namespace
}  // namespace ddsm
