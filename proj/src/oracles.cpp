#include "harnack/oracles.hpp"

#include "harnack/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace harnack {

namespace {

double phi1(double z) { return std::abs(z) < 1e-12 ? 1.0 + 0.5 * z : std::expm1(z) / z; }

/// Image sum of the 1-D Euclidean kernel with period L.
double periodic_kernel_1d(double x, double period, double t) {
  x -= period * std::floor(x / period + 0.5);  // x in [-L/2, L/2)
  const double reach = 0.5 * period + std::sqrt(4.0 * t * std::log(1e16));
  const int images = static_cast<int>(std::ceil(reach / period));
  double sum = 0.0;
  for (int m = -images; m <= images; ++m) {
    const double d = x - m * period;
    sum += std::exp(-d * d / (4.0 * t));
  }
  return sum / std::sqrt(4.0 * std::numbers::pi * t);
}

Eigen::ArrayXd fd_rhs(const Eigen::ArrayXd& u, const Geometry& g, double a,
                      const Eigen::ArrayXd& potential) {
  Eigen::ArrayXd lap;
  if (g.is_torus()) {
    lap = Eigen::ArrayXd::Zero(u.size());
    for (int axis = 0; axis < g.dimension(); ++axis) {
      const int n = g.points(axis);
      const Index s = g.stride(axis);
      const Index lines = u.size() / n;
      const double h = g.spacing(axis);
      const double c = 1.0 / (12.0 * h * h);
      std::vector<double> line(n + 4);
      for (Index l = 0; l < lines; ++l) {
        const Index base = (l / s) * s * n + l % s;
        for (int j = 0; j < n; ++j) line[j + 2] = u[base + j * s];
        line[0] = line[n];
        line[1] = line[n + 1];
        line[n + 2] = line[2];
        line[n + 3] = line[3];
        for (int j = 0; j < n; ++j) {
          const double* w = &line[j + 2];
          lap[base + j * s] += c * (-w[2] + 16.0 * w[1] - 30.0 * w[0] + 16.0 * w[-1] - w[-2]);
        }
      }
    }
  } else {
    lap = detail::fd_laplacian<double>(u, g.spacing(0));
  }
  return lap + a * u * u.log() + potential * u;
}

}  // namespace

double homogeneous_solution(double q0, double a, double v_const, double t) {
  return std::exp(q0 * std::exp(a * t) + v_const * t * phi1(a * t));
}

double torus_heat_kernel(const Geometry& g, const Point& x, double t) {
  if (!g.is_torus()) throw UnsupportedGeometry("torus_heat_kernel needs a torus");
  if (!(t > 0.0)) throw std::invalid_argument("torus_heat_kernel needs t > 0");
  double value = 1.0;
  for (int axis = 0; axis < g.dimension(); ++axis) {
    value *= periodic_kernel_1d(x[axis], g.extent(axis), t);
  }
  return value;
}

ScalarField torus_heat_kernel_field(const GeometryPtr& g, double t) {
  return sample(g, [&](const Point& x) { return torus_heat_kernel(*g, x, t); });
}

SelfSimilarProfile gaussian_selfsimilar(double p0, double q0, double a, int n, double t) {
  if (!(p0 > 0.0) || !(a <= 0.0)) {
    throw std::invalid_argument("gaussian_selfsimilar needs p0 > 0 and a <= 0");
  }
  // r = 1/p solves the linear ODE r' = -a r + 4.
  const double r = std::exp(-a * t) / p0 + 4.0 * t * phi1(-a * t);
  if (!(r > 0.0)) throw std::logic_error("self-similar width became non-positive");
  const double q = std::exp(a * t) * (q0 - 2.0 * n / (a / p0 - 4.0) * std::log(p0 * r));
  return {1.0 / r, q};
}

double periodic_distance_sq(const Geometry& g, const Point& x) {
  double d2 = 0.0;
  for (int axis = 0; axis < g.dimension(); ++axis) {
    double d = x[axis];
    if (g.is_torus()) {
      const double L = g.extent(axis);
      d -= L * std::floor(d / L + 0.5);
    }
    d2 += d * d;
  }
  return d2;
}

ScalarField evaluate(const ClosedForm& form, const GeometryPtr& g, double t) {
  switch (form.kind) {
    case ClosedFormKind::HomogeneousLog:
      return constant_field(g, homogeneous_solution(form.q0, form.a, form.v_const, t));
    case ClosedFormKind::TorusHeatKernel:
      return torus_heat_kernel_field(g, form.t0 + t);
    case ClosedFormKind::GaussianSelfSimilar: {
      const auto prof = gaussian_selfsimilar(form.p0, form.q0, form.a, g->dimension(), t);
      return sample(g, [&](const Point& x) {
        return std::exp(-prof.p * periodic_distance_sq(*g, x) - prof.q);
      });
    }
  }
  throw std::logic_error("unknown closed form");
}

Trajectory fine_grid_reference(const Problem& p, const FineGridOptions& options) {
  if (options.refine < 2) throw std::invalid_argument("fine_grid_reference needs refine >= 2");
  if (!p.potential_fn || !p.initial_fn) {
    throw std::invalid_argument("fine_grid_reference needs closed forms of V and u0");
  }
  const Geometry& coarse = *p.geometry;
  const int r = options.refine;
  GeometryPtr fine;
  if (coarse.is_torus()) {
    std::vector<int> pts;
    for (int n : coarse.points()) pts.push_back(n * r);
    fine = build_torus(coarse.dimension(), pts, coarse.extents());
  } else {
    fine = build_interval((coarse.points(0) - 1) * r + 1, coarse.extent(0));
  }

  double h_min = fine->spacing(0);
  for (int axis = 1; axis < fine->dimension(); ++axis) h_min = std::min(h_min, fine->spacing(axis));
  // Spectral radius of the difference Laplacian: 16/(3h^2) (fourth order)
  // or 4/h^2 (second order) per axis; RK4 is stable to 2.785 on the real axis.
  const double radius = fine->dimension() * (coarse.is_torus() ? 16.0 / 3.0 : 4.0) / (h_min * h_min);
  const double dt_max = options.cfl * 2.785 / radius;

  const std::vector<double> times = sample_times(p);
  std::size_t total_steps = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    total_steps += static_cast<std::size_t>(std::ceil((times[i] - times[i - 1]) / dt_max));
  }
  if (total_steps > options.step_budget) {
    throw StepBudgetExceeded("fine grid needs " + std::to_string(total_steps) +
                             " RK4 steps, budget is " + std::to_string(options.step_budget));
  }

  const Eigen::ArrayXd potential = sample(fine, p.potential_fn).values();
  Eigen::ArrayXd u = sample(fine, p.initial_fn).values();

  auto restrict_to_coarse = [&](const Eigen::ArrayXd& v) {
    Eigen::ArrayXd out(coarse.size());
    for (Index i = 0; i < coarse.size(); ++i) {
      Index fi = 0;
      for (int axis = 0; axis < coarse.dimension(); ++axis) {
        fi += static_cast<Index>(coarse.axis_index(i, axis)) * r * fine->stride(axis);
      }
      out[i] = v[fi];
    }
    return ScalarField(p.geometry, std::move(out));
  };

  Trajectory traj;
  traj.problem = p;
  traj.samples.push_back({0.0, restrict_to_coarse(u)});
  traj.stats.min_u = u.minCoeff();
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double span = times[i] - times[i - 1];
    const auto n = static_cast<std::size_t>(std::ceil(span / dt_max));
    const double dt = span / n;
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::ArrayXd k1 = fd_rhs(u, *fine, p.a, potential);
      const Eigen::ArrayXd k2 = fd_rhs(u + 0.5 * dt * k1, *fine, p.a, potential);
      const Eigen::ArrayXd k3 = fd_rhs(u + 0.5 * dt * k2, *fine, p.a, potential);
      const Eigen::ArrayXd k4 = fd_rhs(u + dt * k3, *fine, p.a, potential);
      u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!(u.minCoeff() > 0.0)) {
        throw PositivityLoss("fine-grid reference lost positivity", times[i - 1] + (k + 1) * dt);
      }
    }
    traj.stats.steps += n;
    traj.stats.min_u = std::min(traj.stats.min_u, u.minCoeff());
    traj.samples.push_back({times[i], restrict_to_coarse(u)});
  }
  return traj;
}

double sup_distance(const Trajectory& traj, const Trajectory& reference) {
  double worst = 0.0;
  std::size_t j = 0;
  for (const auto& s : traj.samples) {
    while (j < reference.samples.size() && reference.samples[j].t < s.t - 1e-12) ++j;
    if (j == reference.samples.size()) break;
    if (std::abs(reference.samples[j].t - s.t) > 1e-12) continue;
    worst = std::max(worst, (s.u.values() - reference.samples[j].u.values()).abs().maxCoeff());
  }
  return worst;
}

}  // namespace harnack
