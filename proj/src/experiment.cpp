#include "harnack/experiment.hpp"

#include "harnack/operators.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace harnack {

namespace {

std::string cell(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string cell(const std::optional<Extremum>& e) { return e ? cell(e->value) : std::string(); }

nlohmann::json location(const Geometry& g, Index node) {
  if (node < 0) return nullptr;
  const Point x = g.node(node);
  nlohmann::json coords = nlohmann::json::array();
  for (Index i = 0; i < x.size(); ++i) coords.push_back(x[i]);
  return {{"node", node}, {"x", coords}};
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
  // The serialized form is the canonical echo; keep it key by key, in order.
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  std::istringstream is(serialize(cfg));
  for (std::string line; std::getline(is, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace

int ExperimentResult::exit_code() const {
  if (!report) return kExitSolver;
  if (!report->passed()) return kExitVerdict;
  if (sharpness && !sharpness->pass) return kExitVerdict;
  return kExitPass;
}

Sharpness sharpness_witness(const Trajectory& traj, const HarnackReport& report, double t0) {
  Sharpness s;
  if (report.slices.empty()) return s;
  const auto& slice = report.slices.front();
  const Geometry& g = *traj.problem.geometry;
  const double n = g.dimension();
  const ScalarField f = log_transform(traj.samples[slice.sample_index].u);
  const Eigen::ArrayXd scaled = 2.0 * (t0 + slice.t) * laplacian(g, f).values();
  s.t = slice.t;
  s.value = scaled.maxCoeff(&s.node);
  s.threshold = n - 0.02 * n;
  s.pass = s.value >= s.threshold;
  return s;
}

ExperimentResult execute(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.config = cfg;
  const Problem p = build_problem(cfg);
  const auto start = std::chrono::steady_clock::now();
  Trajectory traj;
  try {
    traj = solve(p);
  } catch (const SolverError& e) {
    result.solver_error = e.what();
    result.solver_error_time = e.time();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
  result.stats = traj.stats;
  result.report = certify(traj, p, cfg.tol, cfg.t_min);
  if (cfg.u0.kind == InitialKind::Kernel && p.is_linear_heat()) {
    result.sharpness = sharpness_witness(traj, *result.report, cfg.u0.t0);
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_csv(const HarnackReport& report, std::ostream& os) {
  os << "t,min_u,max_Q,argmax_Q,liyau_margin,P_margin,restated_margin,bochner_residual,"
        "evolution_residual,boundary_u_nu_0,boundary_u_nu_L\n";
  for (const auto& s : report.slices) {
    os << cell(s.t) << ',' << cell(s.min_u) << ',' << cell(s.max_Q.value) << ',' << s.max_Q.node
       << ',' << cell(s.max_liyau) << ',' << cell(s.max_P) << ',' << cell(s.max_restated) << ','
       << cell(s.bochner_residual_max) << ',' << cell(s.evolution_violation_max) << ',';
    if (s.boundary) {
      os << cell(s.boundary->u_nu[0]) << ',' << cell(s.boundary->u_nu[1]);
    } else {
      os << ',';
    }
    os << '\n';
  }
}

std::string report_json(const ExperimentResult& result, const Geometry& g) {
  nlohmann::ordered_json j;
  j["name"] = result.config.name;
  j["config"] = config_echo(result.config);
  const auto& tol = result.config.tol;
  j["tolerances"] = {{"q", tol.q},         {"evolution", tol.evolution}, {"consistency", tol.consistency},
                     {"bochner", tol.bochner}, {"trace", tol.trace},     {"flux", tol.flux}};
  j["solver"] = {{"steps", result.stats.steps},
                 {"rejected_steps", result.stats.rejected_steps},
                 {"min_u", result.stats.min_u},
                 {"seconds", result.seconds}};
  if (!result.report) {
    j["solver"]["error"] = result.solver_error;
    j["solver"]["error_time"] = result.solver_error_time;
    j["passed"] = false;
    return j.dump(2);
  }
  const HarnackReport& r = *result.report;
  j["problem"] = r.problem_summary;
  j["t_min"] = r.t_min;
  j["slices"] = r.slices.size();
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (const auto& v : r.verdicts) {
    nlohmann::ordered_json e;
    e["name"] = v.name;
    e["evaluated"] = v.evaluated;
    e["worst"] = finite_or_null(v.worst);
    e["tolerance"] = v.tolerance;
    e["t"] = v.t;
    e["at"] = location(g, v.node);
    e["pass"] = v.pass;
    verdicts.push_back(e);
  }
  j["verdicts"] = verdicts;
  if (result.sharpness) {
    const auto& s = *result.sharpness;
    j["sharpness"] = {{"t", s.t},
                      {"max_2(t0+t)lap_f", s.value},
                      {"threshold", s.threshold},
                      {"at", location(g, s.node)},
                      {"pass", s.pass}};
  }
  j["warnings"] = r.warnings;
  j["passed"] = result.exit_code() == kExitPass;
  return j.dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result = execute(cfg);
  if (cfg.out.empty()) return result;
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + cfg.out + "': " + ec.message());
  const GeometryPtr g = build_geometry(cfg.geometry);
  if (result.report) {
    std::ofstream csv(dir / (cfg.name + ".csv"));
    if (!csv) throw std::runtime_error("cannot write " + (dir / (cfg.name + ".csv")).string());
    write_csv(*result.report, csv);
  }
  std::ofstream json(dir / (cfg.name + ".json"));
  if (!json) throw std::runtime_error("cannot write " + (dir / (cfg.name + ".json")).string());
  json << report_json(result, *g) << '\n';
  return result;
}

}  // namespace harnack
