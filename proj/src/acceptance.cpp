#include "harnack/acceptance.hpp"

#include "harnack/config.hpp"
#include "harnack/experiment.hpp"
#include "harnack/harnack.hpp"
#include "harnack/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

namespace harnack {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GeometrySpec torus1() { return {GeometryKind::PeriodicTorus, 1, {64}, {2 * kPi}}; }
GeometrySpec torus2() { return {GeometryKind::PeriodicTorus, 2, {32, 32}, {2 * kPi, 2 * kPi}}; }

PotentialSpec potential(int which) {
  PotentialSpec v;
  if (which == 1) v.kind = PotentialKind::Sin;
  if (which == 2) {
    v.kind = PotentialKind::Modes;
    v.modes = {TrigTerm{true, {3.0, 0.0}, 2.0}};
  }
  return v;
}

const char* potential_label(int which) {
  static const char* labels[] = {"V=0", "V=sin x", "V=2cos3x"};
  return labels[which];
}

/// One solved and certified acceptance run.
struct Run {
  std::string label;
  ExperimentConfig config;
  Problem problem;
  Trajectory trajectory;
  HarnackReport report;
  double seconds = 0.0;

  double worst(const std::string& verdict) const {
    const Verdict* v = report.find(verdict);
    return v && v->evaluated ? v->worst : kNegInf;
  }
};

Run execute_run(std::string label, const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  Run r;
  r.label = std::move(label);
  r.config = cfg;
  r.problem = build_problem(cfg);
  r.trajectory = solve(r.problem);
  r.report = certify(r.trajectory, r.problem, cfg.tol, cfg.t_min);
  r.seconds = seconds_since(start);
  return r;
}

std::string fmt(double x, const char* spec = "%.3e") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& o) : o_(o) {}

  AcceptanceSummary run() {
    const auto start = Clock::now();
    criterion_1();
    criterion_2_3();
    criterion_4();
    criterion_5();
    criterion_6_8();
    criterion_7();
    summary_.seconds = seconds_since(start);
    return summary_;
  }

 private:
  bool selected(const std::string& id) const {
    static const std::set<std::string> linear{"2", "3a", "3b"};
    if (o_.linear_only && !linear.count(id)) return false;
    if (!o_.only.empty() && !o_.only.count(id)) return false;
    return !o_.exclude.count(id);
  }

  template <typename... Ids>
  bool any_selected(const Ids&... ids) const {
    return (selected(ids) || ...);
  }

  double tolerance(const std::string& id, double fallback) const {
    auto it = o_.tolerance.find(id);
    return it == o_.tolerance.end() ? fallback : it->second;
  }

  void log(const std::string& line) const {
    if (o_.log) *o_.log << line << std::endl;
  }

  void row(const std::string& id, const std::string& description, double value, double tol_default,
           std::string note = {}, bool at_least = false) {
    if (!selected(id)) return;
    CriterionRow r;
    r.id = id;
    r.description = description;
    r.value = value;
    r.at_least = at_least;
    r.tolerance = tolerance(id, tol_default);
    r.pass = std::isfinite(value) && (at_least ? value >= r.tolerance : value <= r.tolerance);
    r.note = std::move(note);
    summary_.rows.push_back(r);
  }

  /// Criterion-1 grid: T^1 and T^2, a in {0, -0.5, -2}, V in {0, sin x, 2cos3x}.
  /// Linear-only mode keeps the two heat-flow runs.
  const std::vector<Run>& torus_runs() {
    if (torus_runs_) return *torus_runs_;
    torus_runs_.emplace();
    const auto start = Clock::now();
    for (const GeometrySpec& gs : {torus1(), torus2()}) {
      for (double a : {0.0, -0.5, -2.0}) {
        for (int v = 0; v < 3; ++v) {
          const bool linear = a == 0.0 && v == 0;
          if (linear_runs_only() && !linear) continue;
          ExperimentConfig cfg;
          cfg.geometry = gs;
          cfg.a = a;
          cfg.V = potential(v);
          cfg.u0.kind = InitialKind::Random;
          cfg.u0.seed = o_.seed;
          const std::string label = std::string(gs.dimension == 1 ? "T1" : "T2") + " a=" +
                                    fmt(a, "%g") + " " + potential_label(v);
          cfg.name = label;
          torus_runs_->push_back(execute_run(label, cfg));
          log("  ran " + label + " in " + fmt(torus_runs_->back().seconds, "%.2f") + " s");
        }
      }
    }
    torus_seconds_ = seconds_since(start);
    return *torus_runs_;
  }

  /// True when no criterion needing a nonlinear torus run is selected.
  bool linear_runs_only() const { return !any_selected("1", "1t", "6a", "7c", "8"); }

  const std::vector<Run>& interval_runs() {
    if (interval_runs_) return *interval_runs_;
    interval_runs_.emplace();
    for (double a : {0.0, -1.0}) {
      ExperimentConfig cfg = preset("theorem3_interval");
      cfg.a = a;
      cfg.tol.q = 1e-3;
      const std::string label = "interval a=" + fmt(a, "%g");
      cfg.name = label;
      interval_runs_->push_back(execute_run(label, cfg));
      log("  ran " + label + " in " + fmt(interval_runs_->back().seconds, "%.2f") + " s");
    }
    return *interval_runs_;
  }

  const Run& sharpness_run() {
    if (!sharpness_run_) {
      sharpness_run_ = execute_run("kernel T1(8pi)", preset("liyau_sharpness"));
      log("  ran kernel sharpness run in " + fmt(sharpness_run_->seconds, "%.2f") + " s");
    }
    return *sharpness_run_;
  }

  static std::pair<double, std::string> worst_over(const std::vector<Run>& runs,
                                                  const std::string& verdict) {
    double worst = kNegInf;
    std::string where;
    for (const auto& r : runs) {
      const double w = r.worst(verdict);
      if (w > worst) {
        worst = w;
        where = r.label + ", t=" + fmt(r.report.find(verdict)->t, "%.3f");
      }
    }
    return {worst, where};
  }

  void criterion_1() {
    if (!any_selected("1", "1t")) return;
    log("criterion 1: Q bound on tori");
    const auto& runs = torus_runs();
    const auto [q, where] = worst_over(runs, "theorem2_Q");
    row("1", "max Q over 18 torus runs, t in [0.05, 1]", q, 1e-4, where);
    row("1t", "Q-bound torus runs: wall time (s)", torus_seconds_, 30.0,
        std::to_string(runs.size()) + " runs");
  }

  void criterion_2_3() {
    if (any_selected("2", "3a")) {
      log("criteria 2, 3a: heat flow on tori");
      std::vector<Run> linear;
      for (const auto& r : torus_runs()) {
        if (r.problem.is_linear_heat()) linear.push_back(r);
      }
      const auto [p, pw] = worst_over(linear, "appendix_P");
      row("2", "P estimate: max 2 Lap f - |grad f|^2 - 2n/t", p, 1e-4, pw);
      const auto [l, lw] = worst_over(linear, "liyau");
      row("3a", "Li-Yau: max 2t Lap f - n", l, 1e-4, lw);
    }
    if (selected("3b")) {
      log("criterion 3b: Li-Yau sharpness");
      const Run& r = sharpness_run();
      const Sharpness s = sharpness_witness(r.trajectory, r.report, r.config.u0.t0);
      row("3b", "Li-Yau sharpness: max 2(t0+t) Lap f at first slice (n=1)", s.value, s.threshold,
          "t=" + fmt(s.t, "%.3f"), true);
    }
  }

  void criterion_4() {
    if (!any_selected("4a", "4b")) return;
    log("criterion 4: Q bound on the Neumann interval");
    const auto& runs = interval_runs();
    const auto [q, qw] = worst_over(runs, "theorem2_Q");
    row("4a", "max Q on [0, pi], a in {0, -1}", q, 1e-3, qw);
    const auto [flux, fw] = worst_over(runs, "neumann_flux");
    row("4b", "max endpoint |u_nu| over recorded times", flux, 1e-6, fw);
  }

  void criterion_5() {
    if (!any_selected("5a", "5b")) return;
    log("criterion 5: Bochner and trace identities on random fields");
    double bochner = 0.0, trace = kNegInf;
    for (const GeometrySpec& gs : {torus1(), torus2()}) {
      const GeometryPtr g = build_geometry(gs);
      for (std::uint64_t i = 0; i < 100; ++i) {
        const ScalarField f =
            sample(g, random_trig_polynomial(*g, o_.seed * 1000 + i, gs.points[0] / 4));
        bochner = std::max(bochner, bochner_residual(*g, f).max_abs());
        trace = std::max(trace, cauchy_schwarz_check(*g, f, 1.0).max());
      }
    }
    row("5a", "Bochner residual, 200 band-limited fields (modes <= N/4)", bochner, 1e-8);
    row("5b", "Trace inequality margin, same fields", trace, 1e-10);
  }

  std::vector<const Run*> certified_runs() {
    std::vector<const Run*> runs;
    for (const auto& r : torus_runs()) runs.push_back(&r);
    for (const auto& r : interval_runs()) runs.push_back(&r);
    return runs;
  }

  void criterion_6_8() {
    if (!any_selected("6a", "6b", "8")) return;
    log("criteria 6, 8: evolution residuals and restated form");
    double evo = kNegInf, identity = kNegInf, consistency = kNegInf;
    std::string evo_at, identity_at, consistency_at;
    auto track = [](double v, const Run& r, const char* verdict, double& worst, std::string& at) {
      if (v > worst) {
        worst = v;
        at = r.label + ", t=" + fmt(r.report.find(verdict)->t, "%.3f");
      }
    };
    for (const Run* r : certified_runs()) {
      track(r->worst("evolution_inequality"), *r, "evolution_inequality", evo, evo_at);
      track(r->worst("appendix_identity"), *r, "appendix_identity", identity, identity_at);
      track(r->worst("restated_consistency"), *r, "restated_consistency", consistency,
            consistency_at);
    }
    if (sharpness_run_) {
      // The kernel witness carries a floor; f = -log u kinks where the kernel
      // meets it, on a width of about one grid spacing, so third and fourth
      // derivatives of f are not resolved there. Reported, not certified.
      const Run& k = *sharpness_run_;
      log("  kernel witness run (not certified): evolution " + fmt(k.worst("evolution_inequality")) +
          ", LP identity " + fmt(k.worst("appendix_identity")) + ", restated - Q " +
          fmt(k.worst("restated_consistency")));
    }
    row("6a", "Evolution inequality residual, certification runs, interior slices", evo, 1e-3,
        evo_at);
    row("6b", "LP identity residual, heat-flow torus runs", identity, 1e-3, identity_at);
    row("8", "Restated form minus Q, certification runs, interior slices", consistency, 1e-3, consistency_at);
  }

  void criterion_7() {
    if (selected("7a")) {
      log("criterion 7a: homogeneous closed form");
      double err = 0.0;
      struct Case {
        double a, v;
      };
      for (const Case c : {Case{-1.0, 0.0}, Case{-0.5, 0.5}}) {
        ExperimentConfig cfg;
        cfg.a = c.a;
        cfg.u0.kind = InitialKind::Constant;
        cfg.u0.value = std::numbers::e;
        if (c.v != 0.0) {
          cfg.V.kind = PotentialKind::Modes;
          cfg.V.modes = {TrigTerm{true, {0.0, 0.0}, c.v}};
        }
        const Problem p = build_problem(cfg);
        const Trajectory traj = solve(p);
        for (const auto& s : traj.samples) {
          const double exact = homogeneous_solution(1.0, c.a, c.v, s.t);
          err = std::max(err, (s.u.values() - exact).abs().maxCoeff());
        }
      }
      row("7a", "Solver vs homogeneous closed form, sup error to t = 1", err, 1e-6,
          "a=-1 V=0; a=-0.5 V=0.5");
    }
    if (selected("7b")) {
      log("criterion 7b: torus heat kernel");
      double err = 0.0;
      for (const GeometrySpec& gs : {torus1(), torus2()}) {
        ExperimentConfig cfg;
        cfg.geometry = gs;
        cfg.u0.kind = InitialKind::Kernel;
        cfg.u0.t0 = 0.25;
        const Problem p = build_problem(cfg);
        const Trajectory traj = solve(p);
        for (const auto& s : traj.samples) {
          const ScalarField exact = torus_heat_kernel_field(p.geometry, cfg.u0.t0 + s.t);
          err = std::max(err, (s.u.values() - exact.values() - cfg.u0.floor).abs().maxCoeff());
        }
      }
      row("7b", "Solver vs torus heat kernel (t0 = 0.25), sup error to t = 1", err, 1e-6, "T1, T2");
    }
    if (selected("7c")) {
      log("criterion 7c: fine-grid reference (refine 4)");
      double err = 0.0;
      std::string where;
      for (const auto& r : torus_runs()) {
        const bool t2 = r.problem.geometry->dimension() == 2;
        // On T^2 the reference costs seconds per run: heat flow and the stiffest potential.
        if (t2 && !(r.problem.is_linear_heat() ||
                    (r.config.a == -2.0 && r.config.V.kind == PotentialKind::Modes))) {
          continue;
        }
        const double d = sup_distance(r.trajectory, fine_grid_reference(r.problem, 4));
        if (d > err) {
          err = d;
          where = r.label;
        }
      }
      row("7c", "Solver vs fine-grid RK4/FD4 reference, sup distance", err, 1e-5,
          "11 torus runs; worst " + where);
      double interval = 0.0;
      for (const auto& r : interval_runs()) {
        interval = std::max(interval, sup_distance(r.trajectory, fine_grid_reference(r.problem, 4)));
      }
      log("  interval runs vs refine-4 reference (informational, both second order): " +
          fmt(interval));
    }
    if (selected("7d")) {
      log("criterion 7d: time-convergence order");
      ExperimentConfig cfg = preset("theorem3_interval");
      cfg.geometry = torus1();
      cfg.dt = 1e-3 / 16;
      const Trajectory reference = solve(build_problem(cfg));
      const Eigen::ArrayXd& u_ref = reference.samples.back().u.values();
      std::vector<double> errors;
      for (double dt : {4e-3, 2e-3, 1e-3}) {
        cfg.dt = dt;
        const Trajectory traj = solve(build_problem(cfg));
        errors.push_back((traj.samples.back().u.values() - u_ref).abs().maxCoeff());
      }
      const double order =
          std::min(std::log2(errors[0] / errors[1]), std::log2(errors[1] / errors[2]));
      row("7d", "Observed order, dt in {4e-3, 2e-3, 1e-3}, T1 a=-1 V=sin x", order, 1.9,
          "errors " + fmt(errors[0], "%.2e") + ", " + fmt(errors[1], "%.2e") + ", " +
              fmt(errors[2], "%.2e"),
          true);
    }
  }

  const AcceptanceOptions& o_;
  AcceptanceSummary summary_;
  std::optional<std::vector<Run>> torus_runs_;
  std::optional<std::vector<Run>> interval_runs_;
  std::optional<Run> sharpness_run_;
  double torus_seconds_ = 0.0;
};

}  // namespace

bool AcceptanceSummary::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const CriterionRow& r) { return r.pass; });
}

std::vector<std::string> criterion_ids() {
  return {"1", "1t", "2", "3a", "3b", "4a", "4b", "5a", "5b", "6a", "6b", "7a", "7b", "7c", "7d", "8"};
}

AcceptanceSummary run_acceptance_suite(const AcceptanceOptions& options) {
  return Suite(options).run();
}

void print_table(const AcceptanceSummary& summary, std::ostream& os) {
  char line[256];
  for (const auto& r : summary.rows) {
    std::snprintf(line, sizeof line, "%-4s %-60s %12.4e %s %9.2e  %s", r.id.c_str(),
                  r.description.c_str(), r.value, r.at_least ? ">=" : "<=", r.tolerance,
                  r.pass ? "PASS" : "FAIL");
    os << line;
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << '\n';
  }
  const auto failed = std::count_if(summary.rows.begin(), summary.rows.end(),
                                    [](const CriterionRow& r) { return !r.pass; });
  std::snprintf(line, sizeof line, "%zu criteria, %ld failed, %.1f s", summary.rows.size(),
                static_cast<long>(failed), summary.seconds);
  os << line << '\n';
}

}  // namespace harnack
