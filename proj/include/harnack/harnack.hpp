#pragma once

// Differential Harnack quantities of positive solutions and pointwise
// certificates for the inequalities and identities behind them.
//
// Convention throughout: f = -log u. Every quantity is returned in margin
// form, so the estimate being certified reads "margin <= 0" unless stated
// otherwise. Time derivatives come from centered differences over stored
// samples (five points where two neighbours exist on each side, three next to
// the ends; non-uniform spacing allowed), so checks that need f_t are defined
// on interior samples only.

#include "harnack/geometry.hpp"
#include "harnack/pde_solver.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace harnack {

class NonPositiveInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// f = -log u.
ScalarField log_transform(const ScalarField& u);

/// Lap f - A t - n/(2t).
ScalarField quantity_Q(const Geometry& g, const ScalarField& f, double t, double A);

/// 2 Lap f - |grad f|^2 - 2n/t.
ScalarField quantity_P(const Geometry& g, const ScalarField& f, double t);

/// 2t Lap f - n.
ScalarField quantity_liyau(const Geometry& g, const ScalarField& f, double t);

struct RestatedForm {
  /// f_t - a f + V + |grad f|^2 - A t - n/(2t)
  ScalarField margin;
  /// sup |margin - Q|; zero up to time differencing for an exact solution.
  double deviation_from_Q;
};

RestatedForm quantity_restated(const Trajectory& traj, std::size_t index);

/// Lap |grad f|^2 - 2|D^2 f|^2 - 2 <grad f, grad Lap f>. Vanishes on flat
/// tori (Ricci = 0). Torus only.
ScalarField bochner_residual(const Geometry& g, const ScalarField& f);

/// (1/4n)(P + z)^2 - |D^2 f|^2 with P + z = 2 Lap f, i.e. the trace
/// inequality (Lap f)^2 / n <= |D^2 f|^2. Torus only.
ScalarField cauchy_schwarz_check(const Geometry& g, const ScalarField& f, double t);

enum class ProofCase : signed char { One = 1, Two = 2 };

struct EvolutionDiagnostics {
  /// [Q_t - Lap Q - a Q + 2<grad f, grad Q>] - (2/n)[(n/2t)^2 - (Q + A t + n/2t)^2]
  ScalarField residual;
  /// Case 1 where Q + A t + n/t <= 0, Case 2 otherwise.
  std::vector<ProofCase> cases;
  /// Comparison function: 0 in Case 1, -Q (Q + A t + n/t) in Case 2.
  ScalarField comparison;
  /// Left-hand side minus (2/n) * comparison; also <= 0.
  ScalarField comparison_residual;
  std::size_t case_one_nodes = 0;
  std::size_t case_two_nodes = 0;
};

/// The differentiated Q inequality at an interior sample. Only the
/// Lap f part of Q_t is differenced in time; the explicit -A t - n/(2t)
/// part is differentiated exactly.
EvolutionDiagnostics evolution_residual(const Trajectory& traj, const Problem& p,
                                        std::size_t index);

struct AppendixDiagnostics {
  /// L P + 2<grad f, grad P> + 2|D^2 f|^2 with P = 2 Lap f - |grad f|^2,
  /// which vanishes for heat flow on a flat torus.
  ScalarField identity_residual;
  /// I - (2/t)[P - 2n/t] with I = (P + z)^2 - (2n/t)^2; expected >= 0
  /// wherever P >= 2n/t.
  ScalarField chain_margin;
  std::size_t chain_applicable_nodes = 0;
  double worst_applicable_chain_margin = std::numeric_limits<double>::infinity();
  /// Nodes with P < 2n/t where the chain fails; informational only.
  std::size_t chain_failures_elsewhere = 0;
};

/// Heat flow only (a = 0, V = 0), torus only, interior samples.
AppendixDiagnostics appendix_evolution_residual(const Trajectory& traj, std::size_t index);

/// Outward normal derivatives at the interval endpoints {x = 0, x = L}.
struct BoundaryFlux {
  std::array<double, 2> u_nu{};
  std::array<double, 2> V_nu{};
  std::array<double, 2> Q_nu{};
};

/// Interval only; the problem must satisfy V_nu <= 0 at both endpoints.
BoundaryFlux boundary_flux_check(const Trajectory& traj, const Problem& p, std::size_t index);

struct Tolerances {
  double q = 1e-4;            // Q, P, Li-Yau and restated margins
  double evolution = 1e-3;    // evolution inequality and appendix identity
  double consistency = 1e-3;  // restated form minus Q
  double bochner = 1e-8;
  double trace = 1e-10;
  double flux = 1e-6;  // |u_nu| at interval endpoints
};

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  Index node = -1;
};

struct HarnackSlice {
  std::size_t sample_index = 0;
  double t = 0.0;
  double min_u = 0.0;
  Extremum max_Q;
  std::optional<Extremum> max_liyau;
  std::optional<Extremum> max_P;
  std::optional<Extremum> max_restated;
  std::optional<Extremum> restated_deviation;
  std::optional<Extremum> bochner_residual_max;  // max |residual|
  std::optional<Extremum> trace_margin_max;
  std::optional<Extremum> evolution_violation_max;
  std::optional<Extremum> comparison_violation_max;
  std::optional<Extremum> appendix_identity_max;  // max |residual|
  std::optional<BoundaryFlux> boundary;
  std::size_t case_one_nodes = 0;
  std::size_t case_two_nodes = 0;
};

struct Verdict {
  std::string name;
  double tolerance = 0.0;
  bool evaluated = false;
  double worst = -std::numeric_limits<double>::infinity();
  double t = 0.0;
  Index node = -1;
  bool pass = true;
};

struct HarnackReport {
  std::string problem_summary;
  double t_min = 0.05;
  Tolerances tolerances;
  std::vector<HarnackSlice> slices;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;

  bool passed() const;
  const Verdict* find(const std::string& name) const;
};

/// Evaluates every applicable quantity on each sample with t >= t_min and
/// collects verdicts. Failures are verdicts, never exceptions.
HarnackReport certify(const Trajectory& traj, const Problem& p, const Tolerances& tol,
                      double t_min = 0.05);

std::string summarize(const Problem& p);

}  // namespace harnack
