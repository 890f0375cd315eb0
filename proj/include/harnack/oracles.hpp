#pragma once

// Independent reference solutions: closed forms, and a brute-force solver
// that shares no discretization with pde_solver (fourth-order finite
// differences and explicit RK4 instead of Fourier differentiation and
// splitting).

#include "harnack/geometry.hpp"
#include "harnack/pde_solver.hpp"

#include <cstddef>
#include <stdexcept>

namespace harnack {

enum class ClosedFormKind { HomogeneousLog, TorusHeatKernel, GaussianSelfSimilar };

/// Parameters of one closed-form solution. Unused fields are ignored.
struct ClosedForm {
  ClosedFormKind kind = ClosedFormKind::TorusHeatKernel;
  double q0 = 0.0;       // HomogeneousLog, GaussianSelfSimilar: log-offset at t = 0
  double a = 0.0;
  double v_const = 0.0;  // HomogeneousLog
  double t0 = 0.0;       // TorusHeatKernel: kernel age at t = 0
  double p0 = 1.0;       // GaussianSelfSimilar: f = p |x - c|^2 + q
};

/// u(t) = exp(q(t)) for the spatially constant solution, q' = a q + V, q(0) = q0.
double homogeneous_solution(double q0, double a, double v_const, double t);

/// Periodized Euclidean heat kernel centred at the origin, image sum
/// truncated once the Gaussian tail drops below 1e-16 of the kept terms.
double torus_heat_kernel(const Geometry& g, const Point& x, double t);

ScalarField torus_heat_kernel_field(const GeometryPtr& g, double t);

struct SelfSimilarProfile {
  double p;
  double q;
};

/// Self-similar solution f = -log u = p(t)|x|^2 + q(t) of the V = 0 flow on
/// R^n: p' = a p - 4 p^2, q' = a q + 2 n p.
SelfSimilarProfile gaussian_selfsimilar(double p0, double q0, double a, int n, double t);

/// Squared distance from the origin to the nearest periodic image of x.
double periodic_distance_sq(const Geometry& g, const Point& x);

/// u at time t of the closed form, sampled on g. GaussianSelfSimilar uses
/// the minimum-image distance and is only meaningful where u is negligible
/// at half a period.
ScalarField evaluate(const ClosedForm& form, const GeometryPtr& g, double t);

class StepBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FineGridOptions {
  int refine = 4;
  /// Fraction of the RK4 real-axis stability limit used for the time step.
  double cfl = 0.8;
  std::size_t step_budget = 2'000'000;
};

/// Solves p on a grid `refine` times finer (torus: fourth-order periodic
/// differences; interval: second-order ghost-reflected differences) with
/// classical RK4 and restricts the result to the coarse nodes and to the
/// nominal sample times of p. Needs p.potential_fn and p.initial_fn.
Trajectory fine_grid_reference(const Problem& p, const FineGridOptions& options);

inline Trajectory fine_grid_reference(const Problem& p, int refine) {
  FineGridOptions o;
  o.refine = refine;
  return fine_grid_reference(p, o);
}

/// max over shared sample times and nodes of |u - u_ref|.
double sup_distance(const Trajectory& traj, const Trajectory& reference);

}  // namespace harnack
