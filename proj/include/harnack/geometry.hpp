#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace harnack {

/// Node coordinates; at most two components, never heap allocated.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;
using Index = Eigen::Index;

enum class GeometryKind { PeriodicTorus, NeumannInterval };

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a field is handed to an operator on a different grid.
class GeometryMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedGeometry : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NonFiniteField : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A flat model manifold: the periodic torus T^n (n = 1, 2) or the interval
/// [0, L] with Neumann boundary. Both are Ricci flat. Immutable.
///
/// Torus nodes sit at x_j = j L / N. Interval nodes include both endpoints,
/// x_j = j L / (N - 1). Node storage is row-major with axis 0 slowest.
class Geometry {
 public:
  GeometryKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(points_.size()); }
  int points(int axis) const { return points_[axis]; }
  const std::vector<int>& points() const { return points_; }
  double extent(int axis) const { return extents_[axis]; }
  const std::vector<double>& extents() const { return extents_; }
  double spacing(int axis) const;
  Index size() const { return size_; }
  bool has_boundary() const { return kind_ == GeometryKind::NeumannInterval; }
  double ricci_lower_bound() const { return 0.0; }
  bool is_torus() const { return kind_ == GeometryKind::PeriodicTorus; }

  /// Stride of `axis` in the flat node index.
  Index stride(int axis) const;
  /// Per-axis index of flat node `node`.
  int axis_index(Index node, int axis) const;
  Point node(Index node) const;

  /// Quadrature weight of every node (uniform cells on the torus,
  /// trapezoidal on the interval).
  Eigen::ArrayXd cell_volumes() const;

  std::string describe() const;

  bool operator==(const Geometry& other) const {
    return kind_ == other.kind_ && points_ == other.points_ && extents_ == other.extents_;
  }

 private:
  friend std::shared_ptr<const Geometry> build_torus(int, const std::vector<int>&,
                                                     const std::vector<double>&);
  friend std::shared_ptr<const Geometry> build_interval(int, double);

  Geometry(GeometryKind kind, std::vector<int> points, std::vector<double> extents);

  GeometryKind kind_;
  std::vector<int> points_;
  std::vector<double> extents_;
  Index size_ = 0;
};

using GeometryPtr = std::shared_ptr<const Geometry>;

/// Periodic torus with `points[i]` nodes and period `periods[i]` on axis i.
/// Point counts must be even and at least 8.
GeometryPtr build_torus(int dimension, const std::vector<int>& points,
                        const std::vector<double>& periods);

/// Interval [0, length] with `points` >= 9 nodes including the endpoints.
GeometryPtr build_interval(int points, double length);

/// Real values on the nodes of a Geometry. Values are finite and immutable
/// once constructed; operators return new fields.
template <typename Scalar>
class BasicField {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicField() = default;

  BasicField(GeometryPtr geometry, Array values)
      : geometry_(std::move(geometry)), values_(std::move(values)) {
    if (!geometry_) throw GeometryMismatch("field has no geometry");
    if (values_.size() != geometry_->size()) {
      throw GeometryMismatch("field has " + std::to_string(values_.size()) +
                             " values but geometry has " + std::to_string(geometry_->size()) +
                             " nodes");
    }
    if (!values_.allFinite()) throw NonFiniteField("field contains NaN or Inf");
  }

  bool empty() const { return !geometry_; }
  const Geometry& geometry() const { return *geometry_; }
  const GeometryPtr& geometry_ptr() const { return geometry_; }
  const Array& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }

  Scalar max() const { return values_.maxCoeff(); }
  Scalar min() const { return values_.minCoeff(); }
  Index argmax() const {
    Index i = 0;
    values_.maxCoeff(&i);
    return i;
  }
  Index argmin() const {
    Index i = 0;
    values_.minCoeff(&i);
    return i;
  }
  Scalar max_abs() const { return values_.abs().maxCoeff(); }

 private:
  GeometryPtr geometry_;
  Array values_;
};

using ScalarField = BasicField<double>;

using FieldFunction = std::function<double(const Point&)>;

/// Evaluates `fn` at every node.
ScalarField sample(const GeometryPtr& geometry, const FieldFunction& fn);

template <typename Scalar>
BasicField<Scalar> constant_field(const GeometryPtr& geometry, Scalar value) {
  return BasicField<Scalar>(geometry, BasicField<Scalar>::Array::Constant(geometry->size(), value));
}

inline void require_same_geometry(const Geometry& g, const Geometry& field_geometry) {
  if (!(g == field_geometry)) {
    throw GeometryMismatch("field lives on " + field_geometry.describe() + ", expected " +
                           g.describe());
  }
}

/// Quadrature of a field against the geometry's cell volumes.
template <typename Scalar>
Scalar integrate(const BasicField<Scalar>& field) {
  return (field.values() * field.geometry().cell_volumes().template cast<Scalar>()).sum();
}

}  // namespace harnack
