#pragma once

// Differential operators on model manifolds.
//
// Torus: Fourier differentiation. Wavenumbers are symmetrically truncated;
// the Nyquist mode keeps its second derivative -k^2 but its first derivative
// is zero, so first-derivative operators stay real and antisymmetric and all
// operators are the exact derivatives (at the nodes) of the real trigonometric
// interpolant that carries the Nyquist mode as a cosine.
//
// Interval: second-order central differences, Neumann condition by ghost
// reflection phi_{-1} = phi_1, phi_N = phi_{N-2}.

#include "harnack/geometry.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <complex>
#include <numbers>
#include <vector>

namespace harnack {

namespace detail {

template <typename Scalar>
using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Signed mode number of FFT bin j on an axis of n points; bin n/2 is the
/// Nyquist mode and is reported as -n/2.
inline int signed_mode(int j, int n) { return j < n / 2 ? j : j - n; }

/// In-place 1-D transforms along one axis of a row-major array.
template <typename Scalar>
void transform_axis(ComplexArray<Scalar>& data, const std::vector<int>& points, int axis,
                    bool forward) {
  thread_local Eigen::FFT<Scalar> fft;
  const int n = points[axis];
  Index stride = 1;
  for (std::size_t a = axis + 1; a < points.size(); ++a) stride *= points[a];
  Index blocks = data.size() / (stride * n);
  std::vector<std::complex<Scalar>> in(n), out(n);
  for (Index b = 0; b < blocks; ++b) {
    if (stride == 1) {
      // Contiguous lines transform straight from the array.
      std::complex<Scalar>* line = data.data() + b * n;
      if (forward) {
        fft.fwd(out.data(), line, n);
      } else {
        fft.inv(out.data(), line, n);
      }
      std::copy(out.begin(), out.end(), line);
      continue;
    }
    for (Index s = 0; s < stride; ++s) {
      const Index base = b * n * stride + s;
      for (int j = 0; j < n; ++j) in[j] = data[base + j * stride];
      if (forward) {
        fft.fwd(out.data(), in.data(), n);
      } else {
        fft.inv(out.data(), in.data(), n);
      }
      for (int j = 0; j < n; ++j) data[base + j * stride] = out[j];
    }
  }
}

template <typename Scalar>
ComplexArray<Scalar> forward(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& values,
                             const std::vector<int>& points) {
  ComplexArray<Scalar> spec = values.template cast<std::complex<Scalar>>();
  for (std::size_t a = 0; a < points.size(); ++a) transform_axis<Scalar>(spec, points, a, true);
  return spec;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> inverse(ComplexArray<Scalar> spec,
                                                const std::vector<int>& points) {
  for (std::size_t a = 0; a < points.size(); ++a) transform_axis<Scalar>(spec, points, a, false);
  return spec.real();
}

/// Per-axis spectral multiplier for a derivative of order 0, 1 or 2.
template <typename Scalar>
std::complex<Scalar> axis_multiplier(int order, int j, int n, double period) {
  const int m = signed_mode(j, n);
  const Scalar k = static_cast<Scalar>(2.0 * std::numbers::pi / period) * m;
  switch (order) {
    case 0:
      return {1, 0};
    case 1:
      return 2 * j == n ? std::complex<Scalar>(0, 0) : std::complex<Scalar>(0, k);
    default:
      return {-k * k, 0};
  }
}

template <typename Scalar>
ComplexArray<Scalar> apply_multiplier(const ComplexArray<Scalar>& spec,
                                      const std::vector<int>& points,
                                      const std::vector<double>& periods,
                                      const std::array<int, 2>& orders) {
  ComplexArray<Scalar> out(spec.size());
  if (points.size() == 1) {
    for (int j = 0; j < points[0]; ++j) {
      out[j] = spec[j] * axis_multiplier<Scalar>(orders[0], j, points[0], periods[0]);
    }
    return out;
  }
  const int n0 = points[0], n1 = points[1];
  std::vector<std::complex<Scalar>> m1(n1);
  for (int j1 = 0; j1 < n1; ++j1) m1[j1] = axis_multiplier<Scalar>(orders[1], j1, n1, periods[1]);
  for (int j0 = 0; j0 < n0; ++j0) {
    const auto m0 = axis_multiplier<Scalar>(orders[0], j0, n0, periods[0]);
    for (int j1 = 0; j1 < n1; ++j1) out[j0 * n1 + j1] = spec[j0 * n1 + j1] * m0 * m1[j1];
  }
  return out;
}

template <typename Scalar>
ComplexArray<Scalar> laplacian_multiplier(const ComplexArray<Scalar>& spec,
                                          const std::vector<int>& points,
                                          const std::vector<double>& periods) {
  ComplexArray<Scalar> out = apply_multiplier<Scalar>(spec, points, periods, {2, 0});
  if (points.size() == 2) out += apply_multiplier<Scalar>(spec, points, periods, {0, 2});
  return out;
}

/// Zero-pads a spectrum to twice the points per axis, splitting each Nyquist
/// coefficient evenly between +n/2 and -n/2 so the padded grid carries the
/// same real interpolant. Amplitudes are rescaled for the larger inverse.
template <typename Scalar>
ComplexArray<Scalar> pad_spectrum(const ComplexArray<Scalar>& spec,
                                  const std::vector<int>& points) {
  const std::size_t dim = points.size();
  std::vector<int> padded(dim);
  for (std::size_t a = 0; a < dim; ++a) padded[a] = 2 * points[a];
  Index total = 1;
  for (int n : padded) total *= n;
  ComplexArray<Scalar> out = ComplexArray<Scalar>::Zero(total);
  const Scalar scale = static_cast<Scalar>(dim == 1 ? 2 : 4);

  // Each source bin maps to one padded bin, or two when it is a Nyquist bin.
  struct Target {
    int first, second;
    Scalar weight;
  };
  auto targets = [](int n) {
    std::vector<Target> t(n);
    const int np = 2 * n;
    for (int j = 0; j < n; ++j) {
      const int m = signed_mode(j, n);
      if (2 * j == n) {
        t[j] = {n / 2, np - n / 2, Scalar(0.5)};
      } else {
        const int p = m >= 0 ? m : np + m;
        t[j] = {p, -1, Scalar(1)};
      }
    }
    return t;
  };
  auto each = [](const Target& t, auto&& fn) {
    fn(t.first, t.weight);
    if (t.second >= 0) fn(t.second, t.weight);
  };

  if (dim == 1) {
    const auto t0 = targets(points[0]);
    for (int j = 0; j < points[0]; ++j) {
      each(t0[j], [&](int p, Scalar w) { out[p] += spec[j] * (w * scale); });
    }
    return out;
  }
  const int n0 = points[0], n1 = points[1];
  const auto t0 = targets(n0), t1 = targets(n1);
  for (int j0 = 0; j0 < n0; ++j0) {
    each(t0[j0], [&](int p0, Scalar w0) {
      for (int j1 = 0; j1 < n1; ++j1) {
        each(t1[j1], [&](int p1, Scalar w1) {
          out[p0 * padded[1] + p1] += spec[j0 * n1 + j1] * (w0 * w1 * scale);
        });
      }
    });
  }
  return out;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> fd_laplacian(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& v,
                                                     double h) {
  const Index n = v.size();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  const Scalar inv_h2 = static_cast<Scalar>(1.0 / (h * h));
  out[0] = 2 * (v[1] - v[0]) * inv_h2;
  out[n - 1] = 2 * (v[n - 2] - v[n - 1]) * inv_h2;
  for (Index j = 1; j < n - 1; ++j) out[j] = (v[j + 1] - 2 * v[j] + v[j - 1]) * inv_h2;
  return out;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> fd_first(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& v,
                                                 double h) {
  const Index n = v.size();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  const Scalar inv_2h = static_cast<Scalar>(0.5 / h);
  out[0] = 0;
  out[n - 1] = 0;
  for (Index j = 1; j < n - 1; ++j) out[j] = (v[j + 1] - v[j - 1]) * inv_2h;
  return out;
}

}  // namespace detail

/// All derivatives of one field, sharing a single forward transform on the
/// torus.
template <typename Scalar>
class Derivatives {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit Derivatives(const BasicField<Scalar>& field)
      : geometry_(field.geometry_ptr()), values_(field.values()) {
    if (geometry_->is_torus()) spectrum_ = detail::forward<Scalar>(values_, geometry_->points());
  }

  const Geometry& geometry() const { return *geometry_; }

  Array laplacian() const {
    if (!geometry_->is_torus()) return detail::fd_laplacian<Scalar>(values_, geometry_->spacing(0));
    return detail::inverse<Scalar>(
        detail::laplacian_multiplier<Scalar>(spectrum_, geometry_->points(), geometry_->extents()),
        geometry_->points());
  }

  Array partial(int axis) const {
    if (!geometry_->is_torus()) return detail::fd_first<Scalar>(values_, geometry_->spacing(0));
    std::array<int, 2> orders{0, 0};
    orders[axis] = 1;
    return spectral(orders);
  }

  /// d^2 / dx_a dx_b. Torus only.
  Array second(int a, int b) const {
    if (!geometry_->is_torus()) {
      throw UnsupportedGeometry("Hessian components are only provided on the torus");
    }
    std::array<int, 2> orders{0, 0};
    orders[a] += 1;
    orders[b] += 1;
    return spectral(orders);
  }

  Array gradient_sq() const {
    Array out = Array::Zero(values_.size());
    for (int a = 0; a < geometry_->dimension(); ++a) out += partial(a).square();
    return out;
  }

  Array hessian_sq() const {
    Array out = Array::Zero(values_.size());
    const int n = geometry_->dimension();
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) out += (a == b ? 1 : 2) * second(a, b).square();
    }
    return out;
  }

  /// Laplacian of |grad phi|^2. On the torus the product is formed on a grid
  /// with twice the points per axis so the result is the exact Laplacian of
  /// the interpolant's energy density, free of aliasing.
  Array laplacian_of_gradient_sq() const {
    if (!geometry_->is_torus()) {
      return detail::fd_laplacian<Scalar>(gradient_sq(), geometry_->spacing(0));
    }
    const auto& pts = geometry_->points();
    const auto& periods = geometry_->extents();
    std::vector<int> padded(pts.size());
    for (std::size_t a = 0; a < pts.size(); ++a) padded[a] = 2 * pts[a];
    const auto padded_spec = detail::pad_spectrum<Scalar>(spectrum_, pts);
    Array z = Array::Zero(padded_spec.size());
    for (std::size_t a = 0; a < pts.size(); ++a) {
      std::array<int, 2> orders{0, 0};
      orders[a] = 1;
      z += detail::inverse<Scalar>(
               detail::apply_multiplier<Scalar>(padded_spec, padded, periods, orders), padded)
               .square();
    }
    const Array lap_z = detail::inverse<Scalar>(
        detail::laplacian_multiplier<Scalar>(detail::forward<Scalar>(z, padded), padded, periods),
        padded);
    Array out(values_.size());
    if (pts.size() == 1) {
      for (int j = 0; j < pts[0]; ++j) out[j] = lap_z[2 * j];
    } else {
      for (int j0 = 0; j0 < pts[0]; ++j0) {
        for (int j1 = 0; j1 < pts[1]; ++j1) out[j0 * pts[1] + j1] = lap_z[2 * j0 * padded[1] + 2 * j1];
      }
    }
    return out;
  }

 private:
  Array spectral(const std::array<int, 2>& orders) const {
    return detail::inverse<Scalar>(
        detail::apply_multiplier<Scalar>(spectrum_, geometry_->points(), geometry_->extents(), orders),
        geometry_->points());
  }

  GeometryPtr geometry_;
  Array values_;
  detail::ComplexArray<Scalar> spectrum_;
};

template <typename Scalar>
BasicField<Scalar> laplacian(const Geometry& g, const BasicField<Scalar>& phi) {
  require_same_geometry(g, phi.geometry());
  return {phi.geometry_ptr(), Derivatives<Scalar>(phi).laplacian()};
}

template <typename Scalar>
BasicField<Scalar> gradient_sq(const Geometry& g, const BasicField<Scalar>& phi) {
  require_same_geometry(g, phi.geometry());
  return {phi.geometry_ptr(), Derivatives<Scalar>(phi).gradient_sq()};
}

/// Sum over i, j of (d^2 phi / dx_i dx_j)^2. Torus only.
template <typename Scalar>
BasicField<Scalar> hessian_sq(const Geometry& g, const BasicField<Scalar>& phi) {
  require_same_geometry(g, phi.geometry());
  if (!g.is_torus()) throw UnsupportedGeometry("hessian_sq is not provided on the interval");
  return {phi.geometry_ptr(), Derivatives<Scalar>(phi).hessian_sq()};
}

/// Pointwise <grad phi, grad psi>.
template <typename Scalar>
BasicField<Scalar> inner_grad(const Geometry& g, const BasicField<Scalar>& phi,
                              const BasicField<Scalar>& psi) {
  require_same_geometry(g, phi.geometry());
  require_same_geometry(g, psi.geometry());
  const Derivatives<Scalar> dphi(phi), dpsi(psi);
  typename BasicField<Scalar>::Array out = BasicField<Scalar>::Array::Zero(phi.size());
  for (int a = 0; a < g.dimension(); ++a) out += dphi.partial(a) * dpsi.partial(a);
  return {phi.geometry_ptr(), std::move(out)};
}

template <typename Scalar>
BasicField<Scalar> laplacian_of_gradient_sq(const Geometry& g, const BasicField<Scalar>& phi) {
  require_same_geometry(g, phi.geometry());
  return {phi.geometry_ptr(), Derivatives<Scalar>(phi).laplacian_of_gradient_sq()};
}

}  // namespace harnack
