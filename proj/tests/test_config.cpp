#include "harnack/acceptance.hpp"
#include "harnack/config.hpp"
#include "harnack/experiment.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace harnack;
using ::testing::Contains;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

namespace {

constexpr double pi = std::numbers::pi;

std::string joined(const ConfigError& e) {
  std::string s;
  for (const auto& v : e.violations()) s += v + "\n";
  return s;
}

std::vector<std::string> parse_errors(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ParseConfig, MinimalUsesDefaults) {
  const auto cfg = parse_config("a = 0\n");
  EXPECT_EQ(cfg, ExperimentConfig{});
  EXPECT_EQ(cfg.geometry.kind, GeometryKind::PeriodicTorus);
  EXPECT_EQ(cfg.geometry.points, std::vector<int>{64});
  EXPECT_FALSE(cfg.A.has_value());
  EXPECT_EQ(cfg.u0.kind, InitialKind::Constant);
  EXPECT_DOUBLE_EQ(cfg.tol.q, 1e-4);
}

TEST(ParseConfig, CommentsAndBlankLines) {
  const auto cfg = parse_config("# header\n\n  a = -1   # damping\nname = demo\n");
  EXPECT_EQ(cfg.a, -1.0);
  EXPECT_EQ(cfg.name, "demo");
}

TEST(ParseConfig, PiExpressions) {
  const auto cfg = parse_config("dimension = 2\npoints = 16 32\nextent = 2*pi pi/2\na = -0.5*pi\n");
  EXPECT_EQ(cfg.geometry.points, (std::vector<int>{16, 32}));
  EXPECT_DOUBLE_EQ(cfg.geometry.extent[0], 2 * pi);
  EXPECT_DOUBLE_EQ(cfg.geometry.extent[1], pi / 2);
  EXPECT_DOUBLE_EQ(cfg.a, -0.5 * pi);
}

TEST(ParseConfig, SingleValueBroadcastsToAxes) {
  const auto cfg = parse_config("dimension = 2\npoints = 24\nextent = 4\n");
  EXPECT_EQ(cfg.geometry.points, (std::vector<int>{24, 24}));
  EXPECT_EQ(cfg.geometry.extent, (std::vector<double>{4.0, 4.0}));
}

TEST(ParseConfig, IntervalDefaults) {
  const auto cfg = parse_config("geometry = interval\n");
  EXPECT_EQ(cfg.geometry.kind, GeometryKind::NeumannInterval);
  EXPECT_EQ(cfg.geometry.points, std::vector<int>{129});
  EXPECT_DOUBLE_EQ(cfg.geometry.extent[0], pi);
}

TEST(ParseConfig, PotentialModes) {
  const auto cfg = parse_config("dimension = 2\npoints = 32\nV = modes\nV.modes = cos:3:0:2, sin:1:1:-0.5\n");
  ASSERT_EQ(cfg.V.modes.size(), 2u);
  EXPECT_TRUE(cfg.V.modes[0].cosine);
  EXPECT_EQ(cfg.V.modes[0].k[0], 3.0);
  EXPECT_EQ(cfg.V.modes[0].amplitude, 2.0);
  EXPECT_FALSE(cfg.V.modes[1].cosine);
  EXPECT_EQ(cfg.V.modes[1].k[1], 1.0);
  const auto V = potential_function(cfg.V);
  Point x(2);
  x << 0.3, 0.2;
  EXPECT_NEAR(V(x), 2 * std::cos(0.9) - 0.5 * std::sin(0.5), 1e-15);
}

TEST(ParseConfig, PositiveAIsRejected) {
  try {
    parse_config("a = 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_THAT(joined(e), HasSubstr("constant a must satisfy a <= 0 (got 1)"));
  }
}

TEST(ParseConfig, InsufficientAReportsCertifiedBound) {
  try {
    parse_config("a = -1\nV = sin\nA = 0.5\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_THAT(joined(e), HasSubstr("certified A is 1"));
  }
}

TEST(ParseConfig, CollectsEveryViolation) {
  const auto errors = parse_errors("a = 1\ndt = -1\nt_min = 0\nrecord_every = 0\n");
  EXPECT_GE(errors.size(), 4u);
}

TEST(ParseConfig, ReportsLineNumbers) {
  const auto errors = parse_errors("a = 0\n\nbogus line\nfoo = 3\ndt =\na = -1\n");
  EXPECT_THAT(errors, ElementsAre(HasSubstr("line 3: expected 'key = value'"), HasSubstr("line 4: unknown key 'foo'"),
                                  HasSubstr("line 5: 'dt' has no value"),
                                  HasSubstr("line 6: 'a' repeats the value from line 1")));
}

TEST(ParseConfig, PeriodicityOfModes) {
  EXPECT_FALSE(parse_errors("extent = 3\nV = modes\nV.modes = cos:1:1\n").empty());
  EXPECT_TRUE(parse_errors("extent = pi\nV = modes\nV.modes = cos:2:1\n").empty());
  EXPECT_FALSE(parse_errors("geometry = interval\nu0 = mode\nu0.k = 1.5\n").empty());
}

TEST(ParseConfig, KernelNeedsTorusAndFloor) {
  EXPECT_THAT(parse_errors("geometry = interval\nu0 = kernel\n"), Contains(HasSubstr("needs the torus")));
  EXPECT_THAT(parse_errors("u0 = kernel\nu0.floor = 0\n"), Contains(HasSubstr("u0.floor must be positive")));
}

TEST(Serialize, PresetsRoundTrip) {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    EXPECT_EQ(parse_config(serialize(cfg)), cfg) << name;
    EXPECT_EQ(serialize(parse_config(serialize(cfg))), serialize(cfg)) << name;
  }
  EXPECT_THAT(preset_names(), ElementsAre("theorem2_sinV", "liyau_sharpness", "theorem3_interval"));
  EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Serialize, NonTrivialValuesRoundTrip) {
  auto cfg = preset("theorem2_sinV");
  cfg.a = -1.0 / 3.0;
  cfg.A = 1.0 / 0.37;
  cfg.V.kind = PotentialKind::Modes;
  cfg.V.modes = {TrigTerm{true, {3, 0}, 2.0 / 7.0}};
  cfg.tol.evolution = 3e-4;
  cfg.out = "some/dir";
  EXPECT_EQ(parse_config(serialize(cfg)), cfg);
}

TEST(RandomInitial, BoundedAndDeterministic) {
  for (const auto& g : {build_torus(1, {64}, {2 * pi}), build_torus(2, {32, 32}, {2 * pi, 2 * pi}),
                        build_interval(129, pi)}) {
    const auto s = sample(g, random_trig_polynomial(*g, 42, 5));
    const auto again = sample(g, random_trig_polynomial(*g, 42, 5));
    const auto other = sample(g, random_trig_polynomial(*g, 43, 5));
    EXPECT_LE(s.max_abs(), 1.0 + 1e-15);
    EXPECT_GT(s.max_abs(), 0.05);
    EXPECT_TRUE((s.values() == again.values()).all());
    EXPECT_FALSE((s.values() == other.values()).all());
  }
}

TEST(RandomInitial, NeumannOnInterval) {
  const auto g = build_interval(257, pi);
  const auto s = sample(g, random_trig_polynomial(*g, 3, 4));
  const auto d = outward_normal_derivative(s);
  EXPECT_LT(std::abs(d[0]), 1e-3);
  EXPECT_LT(std::abs(d[1]), 1e-3);
}

TEST(BuildProblem, FromPreset) {
  const auto p = build_problem(preset("theorem2_sinV"));
  EXPECT_EQ(p.geometry->size(), 64);
  EXPECT_NEAR(p.A, 1.0, 1e-12);
  EXPECT_EQ(p.a, -1.0);
  EXPECT_GT(p.initial.min(), 0.0);
  EXPECT_TRUE(p.potential_fn && p.initial_fn);
}

TEST(Experiment, SinePotentialPresetPasses) {
  auto cfg = preset("theorem2_sinV");
  cfg.out = (std::filesystem::temp_directory_path() / "harnack_test_sinV").string();
  std::filesystem::remove_all(cfg.out);
  const auto result = run_experiment(cfg);
  ASSERT_TRUE(result.report.has_value()) << result.solver_error;
  EXPECT_EQ(result.exit_code(), kExitPass);
  const Verdict* q = result.report->find("theorem2_Q");
  ASSERT_NE(q, nullptr);
  EXPECT_LE(q->worst, cfg.tol.q);

  const auto csv = slurp(std::filesystem::path(cfg.out) / (cfg.name + ".csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,min_u,max_Q,argmax_Q,liyau_margin,P_margin,restated_margin,bochner_residual,"
            "evolution_residual,boundary_u_nu_0,boundary_u_nu_L");
  const auto json = nlohmann::json::parse(slurp(std::filesystem::path(cfg.out) / (cfg.name + ".json")));
  EXPECT_TRUE(json.at("passed").get<bool>());
  EXPECT_EQ(json.at("config").at("name"), cfg.name);
  EXPECT_EQ(json.at("verdicts").size(), result.report->verdicts.size());

  // Deterministic: the same config writes the same table.
  std::ostringstream again;
  write_csv(*execute(cfg).report, again);
  EXPECT_EQ(again.str(), csv);
  std::filesystem::remove_all(cfg.out);
}

TEST(Experiment, LiYauSharpnessWithinTwoPercent) {
  const auto result = execute(preset("liyau_sharpness"));
  ASSERT_TRUE(result.sharpness.has_value());
  EXPECT_TRUE(result.sharpness->pass) << result.sharpness->value;
  EXPECT_NEAR(result.sharpness->value, 1.0, 0.02);
  EXPECT_TRUE(result.report->find("liyau")->pass);
}

TEST(Experiment, IntervalPresetCertifiesQAndRecordsFlux) {
  const auto result = execute(preset("theorem3_interval"));
  ASSERT_TRUE(result.report.has_value());
  EXPECT_TRUE(result.report->find("theorem2_Q")->pass);
  EXPECT_TRUE(result.report->find("neumann_flux")->evaluated);
  std::ostringstream csv;
  write_csv(*result.report, csv);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  // Both boundary cells are filled on the interval.
  EXPECT_NE(row.back(), ',');
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
}

TEST(Acceptance, CriterionIds) {
  EXPECT_THAT(criterion_ids(), ElementsAre("1", "1t", "2", "3a", "3b", "4a", "4b", "5a", "5b", "6a", "6b", "7a",
                                           "7b", "7c", "7d", "8"));
}

TEST(Acceptance, ToleranceOverrideIsHonoured) {
  AcceptanceOptions o;
  o.only = {"7a"};
  auto s = run_acceptance_suite(o);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].id, "7a");
  EXPECT_TRUE(s.passed());
  o.tolerance["7a"] = 0.0;
  s = run_acceptance_suite(o);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_FALSE(s.rows[0].pass);
  EXPECT_FALSE(s.passed());
}

TEST(Acceptance, LinearOnlyKeepsHeatCriteria) {
  AcceptanceOptions o;
  o.linear_only = true;
  o.only = {"3b", "7a", "5a"};
  const auto s = run_acceptance_suite(o);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].id, "3b");
  std::ostringstream table;
  print_table(s, table);
  EXPECT_THAT(table.str(), HasSubstr("3b"));
}
