#pragma once

#include "harnack/geometry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace harnack {

/// One flow u_t = Lap u + a u log u + V u on a model manifold.
struct Problem {
  GeometryPtr geometry;
  double a = 0.0;
  ScalarField potential;  // V
  double A = 0.0;         // bound with -Lap V <= A
  ScalarField initial;    // u0 > 0
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 1;

  // Closed forms of V and u0, when known. The fine-grid oracle resamples them.
  FieldFunction potential_fn;
  FieldFunction initial_fn;

  /// V_nu <= 0 at both endpoints (interval only; vacuous on the torus).
  bool boundary_admissible = true;

  /// True when the flow is the plain heat equation (a = 0, V = 0).
  bool is_linear_heat() const;
};

class InvalidProblem : public std::invalid_argument {
 public:
  explicit InvalidProblem(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class PositivityLoss : public SolverError {
 public:
  using SolverError::SolverError;
};

class StepRejected : public SolverError {
 public:
  using SolverError::SolverError;
};

struct TimeSample {
  double t;
  ScalarField u;
};

struct SolverStats {
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  double min_u = 0.0;
};

struct Trajectory {
  Problem problem;
  std::vector<TimeSample> samples;
  SolverStats stats;
};

/// max |log u_next - log u| above which a step is rejected and retried with
/// half the step size.
inline constexpr double kStepGuard = 1.0;

/// Smallest admissible A for the discretized potential: max(0, max(-Lap V)).
double certify_A(const Geometry& g, const ScalarField& potential);

/// One-sided second-order estimate of the outward normal derivative at the
/// two interval endpoints, {at x = 0, at x = L}.
std::array<double, 2> outward_normal_derivative(const ScalarField& phi);

/// Builds a Problem from closed forms, sampling V and u0 and certifying A
/// when `A` is not given. Throws InvalidProblem on any violated invariant.
Problem make_problem(GeometryPtr geometry, double a, FieldFunction potential,
                     FieldFunction initial, double t_end, double dt, int record_every = 1,
                     std::optional<double> A = std::nullopt);

/// Every violated Problem invariant, empty when the problem is valid.
std::vector<std::string> problem_violations(const Problem& p);

/// One Strang step: half reaction, full diffusion, half reaction.
ScalarField step(const ScalarField& u, double t, double dt, const Problem& p);

/// Nominal sample times of solve(p) (ignores step halving).
std::vector<double> sample_times(const Problem& p);

Trajectory solve(const Problem& p);

/// Exact reaction flow: log u evolves by w' = a w + V.
ScalarField reaction_flow(const ScalarField& u, double tau, const Problem& p);

/// Exact (torus) or Crank-Nicolson (interval) diffusion over dt.
ScalarField diffusion_flow(const ScalarField& u, double dt);

}  // namespace harnack
