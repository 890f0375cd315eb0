#include "harnack/pde_solver.hpp"

#include "harnack/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace harnack {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

/// expm1(z) / z, continuous at 0.
double phi1(double z) { return std::abs(z) < 1e-12 ? 1.0 + 0.5 * z : std::expm1(z) / z; }

Eigen::ArrayXd crank_nicolson(const Eigen::ArrayXd& u, double h, double dt) {
  // (I - dt/2 D) u_next = (I + dt/2 D) u with the ghost-reflected D.
  const Index n = u.size();
  const double r = 0.5 * dt / (h * h);
  Eigen::ArrayXd rhs = u + 0.5 * dt * detail::fd_laplacian<double>(u, h);
  Eigen::ArrayXd lower(n), diag(n), upper(n);
  diag.setConstant(1.0 + 2.0 * r);
  lower.setConstant(-r);
  upper.setConstant(-r);
  upper[0] = -2.0 * r;
  lower[n - 1] = -2.0 * r;
  // Thomas algorithm; the matrix is strictly diagonally dominant.
  Eigen::ArrayXd c(n), d(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (Index j = 1; j < n; ++j) {
    const double m = diag[j] - lower[j] * c[j - 1];
    c[j] = j + 1 < n ? upper[j] / m : 0.0;
    d[j] = (rhs[j] - lower[j] * d[j - 1]) / m;
  }
  Eigen::ArrayXd out(n);
  out[n - 1] = d[n - 1];
  for (Index j = n - 2; j >= 0; --j) out[j] = d[j] - c[j] * out[j + 1];
  return out;
}

}  // namespace

bool Problem::is_linear_heat() const {
  return a == 0.0 && !potential.empty() && potential.max_abs() == 0.0;
}

InvalidProblem::InvalidProblem(std::vector<std::string> violations)
    : std::invalid_argument("invalid problem: " + join(violations)),
      violations_(std::move(violations)) {}

double certify_A(const Geometry& g, const ScalarField& potential) {
  const ScalarField lap = laplacian(g, potential);
  return std::max(0.0, (-lap.values()).maxCoeff());
}

std::array<double, 2> outward_normal_derivative(const ScalarField& phi) {
  const Geometry& g = phi.geometry();
  if (g.is_torus()) throw UnsupportedGeometry("the torus has no boundary");
  const double h = g.spacing(0);
  const auto& v = phi.values();
  const Index n = v.size();
  // Outward normal is -x at 0 and +x at L.
  const double left = -(-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  const double right = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return {left, right};
}

std::vector<std::string> problem_violations(const Problem& p) {
  std::vector<std::string> out;
  if (!p.geometry) {
    out.push_back("problem has no geometry");
    return out;
  }
  if (!(p.a <= 0.0)) out.push_back("constant a must satisfy a <= 0 (got " + std::to_string(p.a) + ")");
  if (!(p.t_end >= 0.0)) out.push_back("t_end must be non-negative");
  if (!(p.dt > 0.0)) out.push_back("dt must be positive");
  if (p.record_every < 1) out.push_back("record_every must be >= 1");
  if (p.potential.empty() || !(p.potential.geometry() == *p.geometry)) {
    out.push_back("potential V must live on the problem geometry");
  } else {
    const double certified = certify_A(*p.geometry, p.potential);
    if (!(p.A >= 0.0)) out.push_back("A must be non-negative");
    if (p.A < certified - 1e-9 * std::max(1.0, certified)) {
      std::ostringstream os;
      os.precision(17);
      os << "A = " << p.A << " does not bound -Lap V: certified A is " << certified;
      out.push_back(os.str());
    }
  }
  if (p.initial.empty() || !(p.initial.geometry() == *p.geometry)) {
    out.push_back("initial datum u0 must live on the problem geometry");
  } else if (!(p.initial.min() > 0.0)) {
    out.push_back("initial datum u0 must be strictly positive (min u0 = " +
                  std::to_string(p.initial.min()) + ")");
  }
  return out;
}

Problem make_problem(GeometryPtr geometry, double a, FieldFunction potential,
                     FieldFunction initial, double t_end, double dt, int record_every,
                     std::optional<double> A) {
  Problem p;
  p.geometry = geometry;
  p.a = a;
  p.potential_fn = std::move(potential);
  p.initial_fn = std::move(initial);
  p.potential = sample(geometry, p.potential_fn);
  p.initial = sample(geometry, p.initial_fn);
  p.t_end = t_end;
  p.dt = dt;
  p.record_every = record_every;
  p.A = A ? *A : certify_A(*geometry, p.potential);
  if (geometry->has_boundary()) {
    const auto v_nu = outward_normal_derivative(p.potential);
    p.boundary_admissible = v_nu[0] <= 0.0 && v_nu[1] <= 0.0;
  }
  if (auto v = problem_violations(p); !v.empty()) throw InvalidProblem(std::move(v));
  return p;
}

ScalarField reaction_flow(const ScalarField& u, double tau, const Problem& p) {
  const double growth = std::exp(p.a * tau);
  const double drive = tau * phi1(p.a * tau);
  Eigen::ArrayXd w = u.values().log() * growth + p.potential.values() * drive;
  return {u.geometry_ptr(), w.exp()};
}

ScalarField diffusion_flow(const ScalarField& u, double dt) {
  const Geometry& g = u.geometry();
  if (!g.is_torus()) return {u.geometry_ptr(), crank_nicolson(u.values(), g.spacing(0), dt)};
  auto spec = detail::forward<double>(u.values(), g.points());
  const auto lap = detail::laplacian_multiplier<double>(
      detail::ComplexArray<double>::Ones(spec.size()), g.points(), g.extents());
  spec *= (lap.real() * dt).exp().cast<std::complex<double>>();
  return {u.geometry_ptr(), detail::inverse<double>(std::move(spec), g.points())};
}

ScalarField step(const ScalarField& u, double t, double dt, const Problem& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  if (!(u.min() > 0.0)) throw PositivityLoss("step input is not strictly positive", t);
  ScalarField half = reaction_flow(u, 0.5 * dt, p);
  ScalarField diffused = diffusion_flow(half, dt);
  if (!(diffused.min() > 0.0)) {
    throw PositivityLoss("diffusion produced a non-positive value", t + dt);
  }
  ScalarField next = reaction_flow(diffused, 0.5 * dt, p);
  if (!(next.min() > 0.0)) throw PositivityLoss("reaction produced a non-positive value", t + dt);
  const double change = (next.values().log() - u.values().log()).abs().maxCoeff();
  if (change > kStepGuard) {
    throw StepRejected("max |log u change| " + std::to_string(change) + " exceeds guard", t);
  }
  return next;
}

std::vector<double> sample_times(const Problem& p) {
  std::vector<double> times{0.0};
  if (p.t_end <= 0.0) return times;
  const auto steps = static_cast<std::size_t>(std::ceil(p.t_end / p.dt - 1e-9));
  for (std::size_t k = 1; k <= steps; ++k) {
    if (k % p.record_every == 0 || k == steps) times.push_back(k == steps ? p.t_end : k * p.dt);
  }
  return times;
}

namespace {

constexpr int kMaxHalvings = 20;

ScalarField guarded_step(const ScalarField& u, double t, double dt, const Problem& p,
                         SolverStats& stats, int depth) {
  try {
    ScalarField next = step(u, t, dt, p);
    ++stats.steps;
    return next;
  } catch (const StepRejected&) {
    if (depth >= kMaxHalvings) throw;
    ++stats.rejected_steps;
    ScalarField mid = guarded_step(u, t, 0.5 * dt, p, stats, depth + 1);
    return guarded_step(mid, t + 0.5 * dt, 0.5 * dt, p, stats, depth + 1);
  }
}

}  // namespace

Trajectory solve(const Problem& p) {
  if (auto v = problem_violations(p); !v.empty()) throw InvalidProblem(std::move(v));
  Trajectory traj;
  traj.problem = p;
  traj.samples.push_back({0.0, p.initial});
  traj.stats.min_u = p.initial.min();
  if (p.t_end <= 0.0) return traj;

  const auto steps = static_cast<std::size_t>(std::ceil(p.t_end / p.dt - 1e-9));
  ScalarField u = p.initial;
  double t = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? p.t_end : k * p.dt;
    u = guarded_step(u, t, t_next - t, p, traj.stats, 0);
    t = t_next;
    traj.stats.min_u = std::min(traj.stats.min_u, u.min());
    if (k % p.record_every == 0 || k == steps) traj.samples.push_back({t, u});
  }
  return traj;
}

}  // namespace harnack
