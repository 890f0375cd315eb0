#include "harnack/harnack.hpp"

#include "harnack/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace harnack {

namespace {

using Array = Eigen::ArrayXd;

void require_positive_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("Harnack quantities need t > 0");
}

void require_interior(const Trajectory& traj, std::size_t index) {
  if (index == 0 || index + 1 >= traj.samples.size()) {
    throw std::out_of_range("sample " + std::to_string(index) +
                            " is not interior; centered time differences need both neighbours");
  }
}

/// Derivative at times[c] of the Lagrange interpolant through all of times.
std::vector<double> lagrange_derivative_weights(const std::vector<double>& times, std::size_t c) {
  const std::size_t m = times.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == c) {
      for (std::size_t k = 0; k < m; ++k) {
        if (k != c) w[c] += 1.0 / (times[c] - times[k]);
      }
      continue;
    }
    double num = 1.0, den = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      den *= times[j] - times[k];
      if (k != c) num *= times[c] - times[k];
    }
    w[j] = num / den;
  }
  return w;
}

/// Centered time-derivative stencil at an interior sample: five points when
/// two neighbours exist on each side, three otherwise.
struct Stencil {
  std::size_t first = 0;
  std::vector<double> weights;
};

Stencil centered_stencil(const Trajectory& traj, std::size_t i) {
  const std::size_t reach = (i >= 2 && i + 2 < traj.samples.size()) ? 2 : 1;
  Stencil st;
  st.first = i - reach;
  std::vector<double> times;
  for (std::size_t k = st.first; k <= i + reach; ++k) times.push_back(traj.samples[k].t);
  st.weights = lagrange_derivative_weights(times, reach);
  return st;
}

Extremum max_of(const Array& v) {
  Extremum e;
  e.value = v.maxCoeff(&e.node);
  return e;
}

Extremum max_abs_of(const Array& v) { return max_of(v.abs()); }

double dimension_of(const Geometry& g) { return static_cast<double>(g.dimension()); }

/// Derivatives of f = -log u at one sample. The basic part (f, Lap f,
/// grad f, |grad f|^2) is all a time-stencil neighbour needs; complete()
/// adds third- and fourth-order data for the centre sample.
class Calculus {
 public:
  explicit Calculus(ScalarField field)
      : f_(std::move(field)), d_(f_), lap_f(d_.laplacian()), z(Array::Zero(f_.size())) {
    const int dim = f_.geometry().dimension();
    for (int a = 0; a < dim; ++a) {
      grad.push_back(d_.partial(a));
      z += grad.back().square();
    }
  }

  static Calculus of_solution(const ScalarField& u) { return Calculus(log_transform(u)); }

  const ScalarField& f() const { return f_; }
  const Geometry& geometry() const { return f_.geometry(); }
  const GeometryPtr& geometry_ptr() const { return f_.geometry_ptr(); }

  void complete() {
    if (complete_) return;
    const Geometry& g = geometry();
    const int dim = g.dimension();
    const Derivatives<double> dlap(ScalarField(f_.geometry_ptr(), lap_f));
    lap_lap = dlap.laplacian();
    for (int a = 0; a < dim; ++a) grad_lap.push_back(dlap.partial(a));
    lap_z = d_.laplacian_of_gradient_sq();
    if (g.is_torus()) {
      hess.assign(dim * dim, Array());
      hess_sq = Array::Zero(f_.size());
      for (int a = 0; a < dim; ++a) {
        for (int b = a; b < dim; ++b) {
          hess[a * dim + b] = d_.second(a, b);
          if (a != b) hess[b * dim + a] = hess[a * dim + b];
          hess_sq += (a == b ? 1.0 : 2.0) * hess[a * dim + b].square();
        }
      }
    }
    complete_ = true;
  }

  Array inner_grad_lap() const {
    Array out = Array::Zero(f_.size());
    for (std::size_t a = 0; a < grad.size(); ++a) out += grad[a] * grad_lap[a];
    return out;
  }

 private:
  ScalarField f_;
  Derivatives<double> d_;
  bool complete_ = false;

 public:
  Array lap_f;
  std::vector<Array> grad;
  Array z;  // |grad f|^2
  // Available after complete(); hess and hess_sq on the torus only.
  Array lap_lap;
  std::vector<Array> grad_lap;
  Array lap_z;  // Lap |grad f|^2, dealiased on the torus
  std::vector<Array> hess;
  Array hess_sq;
};

/// Per-trajectory cache of sample derivatives; centre samples are completed
/// on demand.
class CalculusCache {
 public:
  explicit CalculusCache(const Trajectory& traj) : traj_(traj) {}

  Calculus& basic(std::size_t i) {
    auto it = cache_.find(i);
    if (it == cache_.end()) it = cache_.emplace(i, Calculus::of_solution(traj_.samples[i].u)).first;
    return it->second;
  }

  Calculus& full(std::size_t i) {
    Calculus& c = basic(i);
    c.complete();
    return c;
  }

  void drop_before(std::size_t i) { cache_.erase(cache_.begin(), cache_.lower_bound(i)); }

  /// Centered time derivative of a per-sample quantity.
  template <typename Fn>
  Array time_derivative(std::size_t i, Fn&& quantity) {
    const Stencil st = centered_stencil(traj_, i);
    Array out = Array::Zero(traj_.samples[i].u.size());
    for (std::size_t k = 0; k < st.weights.size(); ++k) {
      out += st.weights[k] * quantity(basic(st.first + k));
    }
    return out;
  }

 private:
  const Trajectory& traj_;
  std::map<std::size_t, Calculus> cache_;
};

RestatedForm restated_from(CalculusCache& cache, const Problem& p, std::size_t index, double t) {
  const double n = dimension_of(*p.geometry);
  const Array f_t = cache.time_derivative(index, [](const Calculus& c) { return c.f().values(); });
  const Calculus& c = cache.basic(index);
  Array margin = f_t - p.a * c.f().values() + p.potential.values() + c.z - p.A * t - n / (2.0 * t);
  const Array q = c.lap_f - p.A * t - n / (2.0 * t);
  const double deviation = (margin - q).abs().maxCoeff();
  return {ScalarField(c.geometry_ptr(), std::move(margin)), deviation};
}

Array bochner_from(const Calculus& c) {
  return c.lap_z - 2.0 * c.hess_sq - 2.0 * c.inner_grad_lap();
}

Array trace_from(const Calculus& c) {
  const double n = dimension_of(c.geometry());
  return (2.0 * c.lap_f).square() / (4.0 * n) - c.hess_sq;
}

EvolutionDiagnostics evolution_from(CalculusCache& cache, const Problem& p, std::size_t index,
                                    double t) {
  const double n = dimension_of(*p.geometry);
  const Array lap_f_t = cache.time_derivative(index, [](const Calculus& c) { return c.lap_f; });
  const Calculus& c = cache.full(index);
  const Index size = c.f().size();

  const Array Q = c.lap_f - p.A * t - n / (2.0 * t);
  const Array Q_t = lap_f_t - p.A + n / (2.0 * t * t);
  const Array lhs = Q_t - c.lap_lap - p.a * Q + 2.0 * c.inner_grad_lap();
  const Array shifted = Q + p.A * t + n / (2.0 * t);
  const double half = n / (2.0 * t);
  const Array residual = lhs - (2.0 / n) * (half * half - shifted.square());

  EvolutionDiagnostics out;
  out.cases.resize(size);
  Array comparison(size);
  for (Index i = 0; i < size; ++i) {
    const double split = Q[i] + p.A * t + n / t;
    if (split <= 0.0) {
      out.cases[i] = ProofCase::One;
      comparison[i] = 0.0;
      ++out.case_one_nodes;
    } else {
      out.cases[i] = ProofCase::Two;
      comparison[i] = -Q[i] * split;
      ++out.case_two_nodes;
    }
  }
  out.residual = ScalarField(c.geometry_ptr(), residual);
  out.comparison_residual = ScalarField(c.geometry_ptr(), lhs - (2.0 / n) * comparison);
  out.comparison = ScalarField(c.geometry_ptr(), std::move(comparison));
  return out;
}

AppendixDiagnostics appendix_from(CalculusCache& cache, const Geometry& g, std::size_t index,
                                  double t) {
  const double n = dimension_of(g);
  const int dim = g.dimension();
  const Array P_t =
      cache.time_derivative(index, [](const Calculus& c) { return Array(2.0 * c.lap_f - c.z); });
  const Calculus& c = cache.full(index);
  const Index size = c.f().size();
  const Array P = 2.0 * c.lap_f - c.z;
  const Array lap_P = 2.0 * c.lap_lap - c.lap_z;

  // grad z by the product rule, so no aliased product is differentiated.
  Array grad_f_dot_grad_P = 2.0 * c.inner_grad_lap();
  for (int a = 0; a < dim; ++a) {
    Array dz = Array::Zero(size);
    for (int b = 0; b < dim; ++b) dz += 2.0 * c.grad[b] * c.hess[a * dim + b];
    grad_f_dot_grad_P -= c.grad[a] * dz;
  }
  const Array identity = P_t - lap_P + 2.0 * grad_f_dot_grad_P + 2.0 * c.hess_sq;

  const double bound = 2.0 * n / t;
  const Array I = (P + c.z).square() - bound * bound;
  const Array chain = I - (2.0 / t) * (P - bound);

  AppendixDiagnostics out;
  out.identity_residual = ScalarField(c.geometry_ptr(), identity);
  for (Index i = 0; i < size; ++i) {
    if (P[i] >= bound) {
      ++out.chain_applicable_nodes;
      out.worst_applicable_chain_margin = std::min(out.worst_applicable_chain_margin, chain[i]);
    } else if (chain[i] < 0.0) {
      ++out.chain_failures_elsewhere;
    }
  }
  out.chain_margin = ScalarField(c.geometry_ptr(), chain);
  return out;
}

void require_appendix_applicable(const Problem& p) {
  if (!p.is_linear_heat()) {
    throw std::invalid_argument("appendix identity applies to heat flow only (a = 0, V = 0)");
  }
  if (!p.geometry->is_torus()) {
    throw UnsupportedGeometry("appendix identity is checked on the torus only");
  }
}

}  // namespace

ScalarField log_transform(const ScalarField& u) {
  if (!(u.min() > 0.0)) {
    throw NonPositiveInput("log_transform needs u > 0 everywhere (min u = " +
                           std::to_string(u.min()) + ")");
  }
  return {u.geometry_ptr(), -u.values().log()};
}

ScalarField quantity_Q(const Geometry& g, const ScalarField& f, double t, double A) {
  require_positive_time(t);
  const double n = dimension_of(g);
  return {f.geometry_ptr(), laplacian(g, f).values() - A * t - n / (2.0 * t)};
}

ScalarField quantity_P(const Geometry& g, const ScalarField& f, double t) {
  require_positive_time(t);
  require_same_geometry(g, f.geometry());
  const double n = dimension_of(g);
  const Derivatives<double> d(f);
  return {f.geometry_ptr(), 2.0 * d.laplacian() - d.gradient_sq() - 2.0 * n / t};
}

ScalarField quantity_liyau(const Geometry& g, const ScalarField& f, double t) {
  require_positive_time(t);
  return {f.geometry_ptr(), 2.0 * t * laplacian(g, f).values() - dimension_of(g)};
}

RestatedForm quantity_restated(const Trajectory& traj, std::size_t index) {
  require_interior(traj, index);
  const double t = traj.samples[index].t;
  require_positive_time(t);
  CalculusCache cache(traj);
  return restated_from(cache, traj.problem, index, t);
}

ScalarField bochner_residual(const Geometry& g, const ScalarField& f) {
  require_same_geometry(g, f.geometry());
  if (!g.is_torus()) throw UnsupportedGeometry("bochner_residual is defined on the torus only");
  Calculus c(f);
  c.complete();
  return {f.geometry_ptr(), bochner_from(c)};
}

ScalarField cauchy_schwarz_check(const Geometry& g, const ScalarField& f, double t) {
  require_positive_time(t);
  require_same_geometry(g, f.geometry());
  if (!g.is_torus()) throw UnsupportedGeometry("cauchy_schwarz_check is defined on the torus only");
  Calculus c(f);
  c.complete();
  return {f.geometry_ptr(), trace_from(c)};
}

EvolutionDiagnostics evolution_residual(const Trajectory& traj, const Problem& p,
                                        std::size_t index) {
  require_interior(traj, index);
  const double t = traj.samples[index].t;
  require_positive_time(t);
  CalculusCache cache(traj);
  return evolution_from(cache, p, index, t);
}

AppendixDiagnostics appendix_evolution_residual(const Trajectory& traj, std::size_t index) {
  require_appendix_applicable(traj.problem);
  require_interior(traj, index);
  const double t = traj.samples[index].t;
  require_positive_time(t);
  CalculusCache cache(traj);
  return appendix_from(cache, *traj.problem.geometry, index, t);
}

BoundaryFlux boundary_flux_check(const Trajectory& traj, const Problem& p, std::size_t index) {
  const Geometry& g = *p.geometry;
  if (g.is_torus()) throw UnsupportedGeometry("boundary_flux_check needs the Neumann interval");
  if (!p.boundary_admissible) {
    throw std::invalid_argument("V_nu <= 0 fails at an endpoint; the boundary estimate does not apply");
  }
  if (index >= traj.samples.size()) throw std::out_of_range("sample index out of range");
  const auto& sample = traj.samples[index];
  BoundaryFlux out;
  out.u_nu = outward_normal_derivative(sample.u);
  out.V_nu = outward_normal_derivative(p.potential);
  if (sample.t > 0.0) {
    out.Q_nu = outward_normal_derivative(quantity_Q(g, log_transform(sample.u), sample.t, p.A));
  }
  return out;
}

bool HarnackReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict* HarnackReport::find(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::string summarize(const Problem& p) {
  std::ostringstream os;
  os.precision(17);
  os << p.geometry->describe() << ", a = " << p.a << ", A = " << p.A << ", t_end = " << p.t_end
     << ", dt = " << p.dt;
  return os.str();
}

namespace {

struct VerdictBuilder {
  Verdict v;
  VerdictBuilder(std::string name, double tol) {
    v.name = std::move(name);
    v.tolerance = tol;
  }
  void observe(const Extremum& e, double t) {
    if (!v.evaluated || e.value > v.worst) {
      v.worst = e.value;
      v.node = e.node;
      v.t = t;
    }
    v.evaluated = true;
  }
  Verdict finish() {
    v.pass = !v.evaluated || v.worst <= v.tolerance;
    return v;
  }
};

}  // namespace

HarnackReport certify(const Trajectory& traj, const Problem& p, const Tolerances& tol, double t_min) {
  HarnackReport report;
  report.problem_summary = summarize(p);
  report.t_min = t_min;
  report.tolerances = tol;

  const Geometry& g = *p.geometry;
  const bool linear = p.is_linear_heat();
  const bool torus = g.is_torus();
  const bool boundary = g.has_boundary() && p.boundary_admissible;
  if (g.has_boundary() && !p.boundary_admissible) {
    report.warnings.push_back("V_nu <= 0 fails at an endpoint; boundary checks skipped");
  }

  VerdictBuilder q("theorem2_Q", tol.q), restated("restated_form", tol.q),
      consistency("restated_consistency", tol.consistency), liyau("liyau", tol.q),
      appendix_p("appendix_P", tol.q), bochner("bochner_identity", tol.bochner),
      trace("trace_inequality", tol.trace), evolution("evolution_inequality", tol.evolution),
      comparison("comparison_B", tol.evolution), identity("appendix_identity", tol.evolution),
      flux("neumann_flux", tol.flux);

  const std::size_t last = traj.samples.size() - 1;
  CalculusCache cache(traj);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& sample = traj.samples[i];
    if (!(sample.t > 0.0) || sample.t < t_min - 1e-12) continue;
    cache.drop_before(i >= 2 ? i - 2 : 0);
    const double t = sample.t;
    const double n = dimension_of(g);
    HarnackSlice s;
    s.sample_index = i;
    s.t = t;
    s.min_u = sample.u.min();

    Calculus& c = cache.full(i);
    s.max_Q = max_of(c.lap_f - p.A * t - n / (2.0 * t));
    q.observe(s.max_Q, t);

    if (linear) {
      s.max_liyau = max_of(2.0 * t * c.lap_f - n);
      liyau.observe(*s.max_liyau, t);
      s.max_P = max_of(2.0 * c.lap_f - c.z - 2.0 * n / t);
      appendix_p.observe(*s.max_P, t);
    }
    if (torus) {
      s.bochner_residual_max = max_abs_of(bochner_from(c));
      bochner.observe(*s.bochner_residual_max, t);
      s.trace_margin_max = max_of(trace_from(c));
      trace.observe(*s.trace_margin_max, t);
    }
    if (i > 0 && i < last) {
      const RestatedForm r = restated_from(cache, p, i, t);
      s.max_restated = max_of(r.margin.values());
      restated.observe(*s.max_restated, t);
      s.restated_deviation = Extremum{r.deviation_from_Q, -1};
      consistency.observe(*s.restated_deviation, t);

      const EvolutionDiagnostics e = evolution_from(cache, p, i, t);
      s.evolution_violation_max = max_of(e.residual.values());
      evolution.observe(*s.evolution_violation_max, t);
      s.comparison_violation_max = max_of(e.comparison_residual.values());
      comparison.observe(*s.comparison_violation_max, t);
      s.case_one_nodes = e.case_one_nodes;
      s.case_two_nodes = e.case_two_nodes;

      if (linear && torus) {
        const AppendixDiagnostics a = appendix_from(cache, g, i, t);
        s.appendix_identity_max = max_abs_of(a.identity_residual.values());
        identity.observe(*s.appendix_identity_max, t);
      }
    }
    if (boundary) {
      s.boundary = boundary_flux_check(traj, p, i);
    }
    report.slices.push_back(std::move(s));
  }
  // The Neumann condition is checked at every recorded time, t = 0 included.
  if (boundary) {
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto un = outward_normal_derivative(traj.samples[i].u);
      const bool right = std::abs(un[1]) > std::abs(un[0]);
      flux.observe(Extremum{std::abs(un[right ? 1 : 0]), right ? g.size() - 1 : 0},
                   traj.samples[i].t);
    }
  }
  if (report.slices.empty()) {
    report.warnings.push_back("no samples with t >= t_min; every verdict passes vacuously");
  }

  for (VerdictBuilder* b : {&q, &restated, &consistency, &liyau, &appendix_p, &bochner, &trace,
                            &evolution, &comparison, &identity, &flux}) {
    report.verdicts.push_back(b->finish());
  }
  return report;
}

}  // namespace harnack
