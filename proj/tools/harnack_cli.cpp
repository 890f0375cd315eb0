// harnack: run configured experiments, the acceptance suite, closed-form
// oracles and the operator self-test.

#include "harnack/acceptance.hpp"
#include "harnack/config.hpp"
#include "harnack/experiment.hpp"
#include "harnack/operators.hpp"
#include "harnack/oracles.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

using namespace harnack;

namespace {

struct Common {
  std::string config;
  std::string preset_name;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_min;
};

ExperimentConfig load(const Common& c) {
  if (c.config.empty() == c.preset_name.empty()) {
    throw ConfigError({"give exactly one of --config PATH or --preset NAME"});
  }
  ExperimentConfig cfg = c.config.empty() ? preset(c.preset_name) : load_config(c.config);
  if (!c.out.empty()) cfg.out = c.out;
  if (c.seed) cfg.u0.seed = *c.seed;
  if (c.t_min) cfg.t_min = *c.t_min;
  if (auto v = config_violations(cfg); !v.empty()) throw ConfigError(std::move(v));
  return cfg;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "experiment config file");
  app->add_option("--preset", c.preset_name, "built-in config: theorem2_sinV, liyau_sharpness, theorem3_interval");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--seed", c.seed, "seed of the random u0 preset");
  app->add_option("--t-min", c.t_min, "start of the certification window");
}

int cmd_run(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const Problem p = build_problem(cfg);
  if (p.initial.min() < 1e-8) {
    std::cerr << "warning: min u0 = " << p.initial.min()
              << " < 1e-8; f = -log u amplifies roundoff there\n";
  }
  const ExperimentResult result = run_experiment(cfg);
  std::printf("%s: %s\n", cfg.name.c_str(), summarize(p).c_str());
  if (!result.report) {
    std::printf("solver failed at t = %.6g: %s\n", result.solver_error_time, result.solver_error.c_str());
    return result.exit_code();
  }
  for (const auto& v : result.report->verdicts) {
    if (!v.evaluated) continue;
    std::printf("  %-22s worst %12.4e  tol %9.2e  t %.4f  %s\n", v.name.c_str(), v.worst, v.tolerance,
                v.t, v.pass ? "PASS" : "FAIL");
  }
  if (result.sharpness) {
    const auto& s = *result.sharpness;
    std::printf("  %-22s value %12.4e  >= %9.4f  t %.4f  %s\n", "liyau_sharpness", s.value,
                s.threshold, s.t, s.pass ? "PASS" : "FAIL");
  }
  for (const auto& w : result.report->warnings) std::printf("  warning: %s\n", w.c_str());
  std::printf("%zu steps (%zu rejected), %.2f s%s%s\n", result.stats.steps, result.stats.rejected_steps,
              result.seconds, cfg.out.empty() ? "" : ", written to ", cfg.out.c_str());
  return result.exit_code();
}

std::set<std::string> id_set(const std::vector<std::string>& ids) {
  std::set<std::string> out;
  for (const auto& s : ids) {
    std::stringstream ss(s);
    for (std::string id; std::getline(ss, id, ',');) {
      if (!id.empty()) out.insert(id);
    }
  }
  return out;
}

int cmd_accept(AcceptanceOptions o, const std::vector<std::string>& only,
               const std::vector<std::string>& exclude, const std::vector<std::string>& tols) {
  o.only = id_set(only);
  o.exclude = id_set(exclude);
  const auto ids = criterion_ids();
  for (const auto& id : o.only) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw ConfigError({"unknown criterion '" + id + "'"});
    }
  }
  for (const auto& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError({"--tol expects ID=VALUE, got '" + t + "'"});
    o.tolerance[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }
  o.log = &std::cerr;
  const AcceptanceSummary s = run_acceptance_suite(o);
  print_table(s, std::cout);
  return s.passed() ? kExitPass : kExitVerdict;
}

int cmd_oracle(const Common& c, double t, int refine) {
  const ExperimentConfig cfg = load(c);
  const Problem p = build_problem(cfg);
  const Geometry& g = *p.geometry;
  if (refine > 0) {
    const Trajectory traj = solve(p);
    const Trajectory ref = fine_grid_reference(p, refine);
    std::printf("sup |u - u_ref| over %zu shared samples: %.6e\n", traj.samples.size(),
                sup_distance(traj, ref));
    return kExitPass;
  }
  ClosedForm form;
  const auto& u0 = cfg.u0;
  const bool constant_V = cfg.V.kind == PotentialKind::Zero ||
                          (cfg.V.kind == PotentialKind::Modes && std::all_of(cfg.V.modes.begin(), cfg.V.modes.end(), [](const TrigTerm& m) {
                             return m.cosine && m.k[0] == 0.0 && m.k[1] == 0.0;
                           }));
  if (u0.kind == InitialKind::Constant && constant_V) {
    form.kind = ClosedFormKind::HomogeneousLog;
    form.q0 = std::log(u0.value);
    form.a = cfg.a;
    form.v_const = p.potential.values()[0];
  } else if (u0.kind == InitialKind::Kernel && p.is_linear_heat()) {
    form.kind = ClosedFormKind::TorusHeatKernel;
    form.t0 = u0.t0;
  } else if (u0.kind == InitialKind::Gaussian && cfg.V.kind == PotentialKind::Zero) {
    form.kind = ClosedFormKind::GaussianSelfSimilar;
    form.p0 = u0.p0;
    form.q0 = u0.q0;
    form.a = cfg.a;
  } else {
    throw ConfigError({"no closed form for this config: use constant u0 with constant V, "
                       "kernel u0 with heat flow, or gaussian u0 with V = zero"});
  }
  const ScalarField u = evaluate(form, p.geometry, t);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw std::runtime_error("cannot write " + c.out);
    os = &file;
  }
  *os << (g.dimension() == 1 ? "node,x,u\n" : "node,x,y,u\n");
  char buf[64];
  for (Index i = 0; i < g.size(); ++i) {
    const Point x = g.node(i);
    *os << i;
    for (Index k = 0; k < x.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", x[k]);
      *os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", u.values()[i]);
    *os << buf;
  }
  return kExitPass;
}

/// The operator examples, each against its closed form.
int cmd_operators() {
  using std::cos;
  using std::sin;
  constexpr double pi = std::numbers::pi;
  int failures = 0;
  auto check = [&](const char* name, double err, double tol) {
    const bool ok = err <= tol;
    failures += ok ? 0 : 1;
    std::printf("%-44s %11.3e <= %8.1e  %s\n", name, err, tol, ok ? "PASS" : "FAIL");
  };
  auto err = [](const ScalarField& got, const FieldFunction& exact) {
    return (got.values() - sample(got.geometry_ptr(), exact).values()).abs().maxCoeff();
  };
  const GeometryPtr t1 = build_torus(1, {64}, {2 * pi});
  const GeometryPtr t2 = build_torus(2, {32, 32}, {2 * pi, 2 * pi});
  const GeometryPtr iv = build_interval(129, pi);
  auto f1 = [&](FieldFunction fn) { return sample(t1, std::move(fn)); };
  auto f2 = [&](FieldFunction fn) { return sample(t2, std::move(fn)); };

  check("laplacian cos x (T1)", err(laplacian(*t1, f1([](const Point& x) { return cos(x[0]); })),
                                   [](const Point& x) { return -cos(x[0]); }), 1e-12);
  check("laplacian cos3x + sin2y (T2)",
        err(laplacian(*t2, f2([](const Point& x) { return cos(3 * x[0]) + sin(2 * x[1]); })),
            [](const Point& x) { return -9 * cos(3 * x[0]) - 4 * sin(2 * x[1]); }),
        1e-11);
  check("gradient_sq sin x (T1)", err(gradient_sq(*t1, f1([](const Point& x) { return sin(x[0]); })),
                                      [](const Point& x) { return cos(x[0]) * cos(x[0]); }), 1e-12);
  check("gradient_sq cos2x (T1)",
        err(gradient_sq(*t1, f1([](const Point& x) { return cos(2 * x[0]); })),
            [](const Point& x) { return 4 * sin(2 * x[0]) * sin(2 * x[0]); }),
        1e-12);
  check("hessian_sq sin x sin y (T2)",
        err(hessian_sq(*t2, f2([](const Point& x) { return sin(x[0]) * sin(x[1]); })),
            [](const Point& x) {
              const double s = sin(x[0]) * sin(x[1]), c = cos(x[0]) * cos(x[1]);
              return 2 * s * s + 2 * c * c;
            }),
        1e-12);
  check("inner_grad sin x, cos x (T1)",
        err(inner_grad(*t1, f1([](const Point& x) { return sin(x[0]); }),
                       f1([](const Point& x) { return cos(x[0]); })),
            [](const Point& x) { return -cos(x[0]) * sin(x[0]); }),
        1e-12);
  check("bochner residual sin x sin y (T2)",
        bochner_residual(*t2, f2([](const Point& x) { return sin(x[0]) * sin(x[1]); })).max_abs(), 1e-10);
  // Second order on the interval: error of cos x at 129 points is ~h^2/12.
  const double h = iv->spacing(0);
  check("laplacian cos x (interval, 129 nodes)",
        err(laplacian(*iv, sample(iv, [](const Point& x) { return cos(x[0]); })),
            [](const Point& x) { return -cos(x[0]); }),
        h * h / 10);
  return failures == 0 ? kExitPass : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential Harnack estimates on computed heat flows"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "solve and certify one configured experiment");
  add_common(run, run_opts);

  AcceptanceOptions accept_opts;
  std::vector<std::string> only, exclude, tols;
  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_flag("--linear-only", accept_opts.linear_only, "heat-flow criteria only (2, 3a, 3b)");
  accept->add_option("--only", only, "criterion ids to run, comma separated");
  accept->add_option("--exclude", exclude, "criterion ids to skip, comma separated");
  accept->add_option("--tol", tols, "tolerance override ID=VALUE");
  accept->add_option("--seed", accept_opts.seed, "seed of the random initial data");

  Common oracle_opts;
  double oracle_t = 0.0;
  int refine = 0;
  auto* oracle = app.add_subcommand("oracle", "evaluate the closed form of a config on its grid");
  add_common(oracle, oracle_opts);
  oracle->add_option("--t", oracle_t, "time");
  oracle->add_option("--refine", refine, "compare the solver with the fine-grid reference instead");

  auto* ops = app.add_subcommand("operators", "operator self-test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (accept->parsed()) return cmd_accept(accept_opts, only, exclude, tols);
    if (oracle->parsed()) return cmd_oracle(oracle_opts, oracle_t, refine);
    if (ops->parsed()) return cmd_operators();
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver failed at t = " << e.time() << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
