#include "harnack/oracles.hpp"
#include "harnack/pde_solver.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace harnack;
using ::testing::HasSubstr;

namespace {

constexpr double pi = std::numbers::pi;

GeometryPtr t1(int n = 64) { return build_torus(1, {n}, {2 * pi}); }

double zero(const Point&) { return 0.0; }
double one(const Point&) { return 1.0; }

std::string joined(const InvalidProblem& e) {
  std::string s;
  for (const auto& v : e.violations()) s += v + "\n";
  return s;
}

}  // namespace

TEST(CertifyA, Examples) {
  const auto g = t1();
  EXPECT_NEAR(certify_A(*g, sample(g, [](const Point& x) { return std::sin(x[0]); })), 1.0, 1e-12);
  EXPECT_EQ(certify_A(*g, constant_field(g, 0.0)), 0.0);
  EXPECT_NEAR(certify_A(*g, sample(g, [](const Point& x) { return 2 * std::cos(3 * x[0]); })), 18.0, 1e-11);
  EXPECT_EQ(certify_A(*g, constant_field(g, -4.0)), 0.0);
}

TEST(MakeProblem, CertifiesAWhenOmitted) {
  const auto p = make_problem(t1(), -1.0, [](const Point& x) { return std::sin(x[0]); }, one, 1.0, 1e-2);
  EXPECT_NEAR(p.A, 1.0, 1e-12);
  EXPECT_FALSE(p.is_linear_heat());
  EXPECT_TRUE(make_problem(t1(), 0.0, zero, one, 1.0, 1e-2).is_linear_heat());
}

TEST(MakeProblem, RejectsPositiveA) {
  try {
    make_problem(t1(), 1.0, zero, one, 1.0, 1e-2);
    FAIL() << "expected InvalidProblem";
  } catch (const InvalidProblem& e) {
    EXPECT_THAT(joined(e), HasSubstr("a <= 0"));
  }
}

TEST(MakeProblem, RejectsInsufficientA) {
  try {
    make_problem(t1(), -1.0, [](const Point& x) { return std::sin(x[0]); }, one, 1.0, 1e-2, 1, 0.5);
    FAIL() << "expected InvalidProblem";
  } catch (const InvalidProblem& e) {
    EXPECT_THAT(joined(e), HasSubstr("certified A is 1"));
  }
}

TEST(MakeProblem, RejectsNonPositiveInitialDatum) {
  try {
    make_problem(t1(), 0.0, zero, [](const Point& x) { return std::cos(x[0]); }, 1.0, 1e-2);
    FAIL() << "expected InvalidProblem";
  } catch (const InvalidProblem& e) {
    EXPECT_THAT(joined(e), HasSubstr("strictly positive"));
  }
}

TEST(MakeProblem, CollectsEveryViolation) {
  try {
    make_problem(t1(), 2.0, [](const Point& x) { return std::sin(x[0]); }, zero, 1.0, 1e-2, 1, 0.0);
    FAIL() << "expected InvalidProblem";
  } catch (const InvalidProblem& e) {
    EXPECT_EQ(e.violations().size(), 3u) << joined(e);
  }
}

TEST(Solve, ConstantIsStationaryForHeat) {
  const auto p = make_problem(t1(), 0.0, zero, [](const Point&) { return 3.0; }, 1.0, 0.05);
  const auto traj = solve(p);
  for (const auto& s : traj.samples) EXPECT_LT((s.u.values() - 3.0).abs().maxCoeff(), 1e-13);
}

TEST(Solve, SingleFourierModeOfHeat) {
  const auto p = make_problem(t1(), 0.0, zero, [](const Point& x) { return 2 + std::cos(x[0]); }, 1.0, 0.05);
  const auto traj = solve(p);
  ASSERT_EQ(traj.samples.size(), 21u);
  for (const auto& s : traj.samples) {
    const auto exact = sample(p.geometry, [&](const Point& x) { return 2 + std::exp(-s.t) * std::cos(x[0]); });
    EXPECT_LT((s.u.values() - exact.values()).abs().maxCoeff(), 1e-12) << "t = " << s.t;
  }
}

TEST(Solve, HomogeneousLogSolution) {
  // u = exp(q), q' = a q + V: q(t) = q0 e^{at} + (V / a)(e^{at} - 1).
  const double a = -1.0, v = 0.7, q0 = 0.4;
  const auto p = make_problem(t1(16 * 2), a, [&](const Point&) { return v; },
                              [&](const Point&) { return std::exp(q0); }, 2.0, 0.01, 10);
  const auto traj = solve(p);
  for (const auto& s : traj.samples) {
    const double q = q0 * std::exp(a * s.t) + v / a * (std::exp(a * s.t) - 1);
    EXPECT_LT((s.u.values() - std::exp(q)).abs().maxCoeff(), 1e-6) << "t = " << s.t;
  }
}

TEST(Solve, HeatKernel) {
  const auto g = t1();
  const double t0 = 0.25;
  auto p = make_problem(g, 0.0, zero, [&](const Point& x) { return torus_heat_kernel(*g, x, t0); }, 0.5, 0.01, 5);
  const auto traj = solve(p);
  for (const auto& s : traj.samples) {
    const auto exact = torus_heat_kernel_field(g, t0 + s.t);
    EXPECT_LT((s.u.values() - exact.values()).abs().maxCoeff(), 1e-6) << "t = " << s.t;
  }
}

TEST(Solve, ZeroHorizonRecordsOnlyInitialDatum) {
  const auto p = make_problem(t1(), -1.0, [](const Point& x) { return std::sin(x[0]); },
                              [](const Point& x) { return 2 + std::cos(x[0]); }, 0.0, 0.01);
  const auto traj = solve(p);
  ASSERT_EQ(traj.samples.size(), 1u);
  EXPECT_EQ(traj.samples[0].t, 0.0);
  EXPECT_TRUE((traj.samples[0].u.values() == p.initial.values()).all());
}

TEST(Solve, SampleTimesFollowRecordEvery) {
  const auto p = make_problem(t1(), 0.0, zero, one, 1.0, 0.1, 2);
  const auto times = sample_times(p);
  ASSERT_EQ(times.size(), 6u);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(times[i], 0.2 * i, 1e-12);
  const auto traj = solve(p);
  ASSERT_EQ(traj.samples.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(traj.samples[i].t, times[i], 1e-12);
}

TEST(Step, FourierModeDecaysExactlyPerStep) {
  const auto g = t1(32);
  const auto p = make_problem(g, 0.0, zero, one, 1.0, 0.03);
  const auto u = sample(g, [](const Point& x) { return 1 + 0.5 * std::cos(3 * x[0]); });
  const auto next = step(u, 0.0, 0.03, p);
  const auto exact = sample(g, [](const Point& x) { return 1 + 0.5 * std::exp(-9 * 0.03) * std::cos(3 * x[0]); });
  EXPECT_LT((next.values() - exact.values()).abs().maxCoeff(), 1e-14);
}

TEST(Step, ReactionFlowIsExact) {
  const auto g = t1(16);
  const double a = -2.0;
  const auto p = make_problem(g, a, [](const Point& x) { return std::sin(x[0]); }, one, 1.0, 0.1);
  const auto u = sample(g, [](const Point& x) { return 1.5 + std::cos(x[0]); });
  const auto r = reaction_flow(u, 0.3, p);
  for (Index j = 0; j < g->size(); ++j) {
    const double v = std::sin(g->node(j)[0]);
    const double w = std::log(u[j]) * std::exp(a * 0.3) + v / a * (std::exp(a * 0.3) - 1);
    EXPECT_NEAR(std::log(r[j]), w, 1e-14);
  }
}

TEST(Step, GuardHalvesLargeSteps) {
  // V = 3000 moves log u by 3 per nominal step; the guard accepts only after
  // two halvings.
  const auto p = make_problem(t1(16), 0.0, [](const Point&) { return 3000.0; }, one, 0.01, 1e-3);
  const auto traj = solve(p);
  EXPECT_GT(traj.stats.rejected_steps, 0u);
  const double w = std::log(traj.samples.back().u[0]);
  EXPECT_NEAR(w, 3000.0 * 0.01, 1e-9);
}

TEST(Solve, SecondOrderInTime) {
  auto make = [](double dt) {
    return make_problem(t1(), -1.0, [](const Point& x) { return std::sin(x[0]); },
                        [](const Point& x) { return 2 + std::cos(x[0]) + 0.3 * std::sin(2 * x[0]); }, 0.5, dt,
                        static_cast<int>(std::lround(0.5 / dt)));
  };
  const auto reference = solve(make(0.5 / 512)).samples.back().u.values();
  std::vector<double> errors;
  for (int steps : {16, 32, 64}) {
    errors.push_back((solve(make(0.5 / steps)).samples.back().u.values() - reference).abs().maxCoeff());
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double order = std::log2(errors[i - 1] / errors[i]);
    EXPECT_GT(order, 1.8);
    EXPECT_LT(order, 2.3);
  }
}

TEST(Solve, IntervalStaysPositiveAndConservesHeat) {
  const auto g = build_interval(129, pi);
  const auto p = make_problem(g, 0.0, zero, [](const Point& x) { return 1.01 + std::cos(x[0]); }, 1.0, 0.01, 10);
  const auto traj = solve(p);
  const double mass0 = integrate(traj.samples.front().u);
  for (const auto& s : traj.samples) {
    EXPECT_GT(s.u.min(), 0.0);
    EXPECT_NEAR(integrate(s.u), mass0, 1e-12);
  }
  EXPECT_GT(traj.stats.min_u, 0.0);
}

TEST(Solve, IntervalCosineModeDecays) {
  const auto g = build_interval(257, pi);
  const auto p = make_problem(g, 0.0, zero, [](const Point& x) { return 2 + std::cos(x[0]); }, 0.5, 0.005, 100);
  const auto traj = solve(p);
  const auto exact = sample(g, [](const Point& x) { return 2 + std::exp(-0.5) * std::cos(x[0]); });
  EXPECT_LT((traj.samples.back().u.values() - exact.values()).abs().maxCoeff(), 1e-4);
}

TEST(OutwardNormalDerivative, SecondOrderOneSided) {
  const auto g = build_interval(257, 2.0);
  const auto phi = sample(g, [](const Point& x) { return std::sin(x[0]); });
  const auto d = outward_normal_derivative(phi);
  // Outward at x = 0 is -d/dx.
  EXPECT_NEAR(d[0], -1.0, 1e-4);
  EXPECT_NEAR(d[1], std::cos(2.0), 1e-4);
}

TEST(DiffusionFlow, ConstantIsFixedOnBothGeometries) {
  for (const auto& g : {t1(), build_interval(65, 1.0)}) {
    const auto u = diffusion_flow(constant_field(g, 1.7), 0.2);
    EXPECT_LT((u.values() - 1.7).abs().maxCoeff(), 1e-14);
  }
}
