#include "harnack/geometry.hpp"

#include <sstream>

namespace harnack {

Geometry::Geometry(GeometryKind kind, std::vector<int> points, std::vector<double> extents)
    : kind_(kind), points_(std::move(points)), extents_(std::move(extents)) {
  size_ = 1;
  for (int n : points_) size_ *= n;
}

double Geometry::spacing(int axis) const {
  if (kind_ == GeometryKind::PeriodicTorus) return extents_[axis] / points_[axis];
  return extents_[axis] / (points_[axis] - 1);
}

Index Geometry::stride(int axis) const {
  Index s = 1;
  for (int a = dimension() - 1; a > axis; --a) s *= points_[a];
  return s;
}

int Geometry::axis_index(Index node, int axis) const {
  return static_cast<int>((node / stride(axis)) % points_[axis]);
}

Point Geometry::node(Index node) const {
  Point p(dimension());
  for (int a = 0; a < dimension(); ++a) p[a] = axis_index(node, a) * spacing(a);
  return p;
}

Eigen::ArrayXd Geometry::cell_volumes() const {
  if (kind_ == GeometryKind::PeriodicTorus) {
    double v = 1.0;
    for (int a = 0; a < dimension(); ++a) v *= spacing(a);
    return Eigen::ArrayXd::Constant(size_, v);
  }
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(size_, spacing(0));
  w[0] *= 0.5;
  w[size_ - 1] *= 0.5;
  return w;
}

std::string Geometry::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == GeometryKind::PeriodicTorus) {
    os << "T" << dimension() << "(";
    for (int a = 0; a < dimension(); ++a) {
      os << (a ? " x " : "") << points_[a] << " nodes, period " << extents_[a];
    }
    os << ")";
  } else {
    os << "interval[0, " << extents_[0] << "](" << points_[0] << " nodes)";
  }
  return os.str();
}

GeometryPtr build_torus(int dimension, const std::vector<int>& points,
                        const std::vector<double>& periods) {
  if (dimension != 1 && dimension != 2) {
    throw GeometryError("unsupported dimension " + std::to_string(dimension) +
                        " (torus must be 1- or 2-dimensional)");
  }
  if (static_cast<int>(points.size()) != dimension ||
      static_cast<int>(periods.size()) != dimension) {
    throw GeometryError("points and periods must each have one entry per dimension");
  }
  for (int n : points) {
    if (n < 8 || n % 2 != 0) {
      throw GeometryError("torus point count " + std::to_string(n) + " must be even and >= 8");
    }
  }
  for (double L : periods) {
    if (!(L > 0.0) || !std::isfinite(L)) throw GeometryError("torus periods must be positive");
  }
  return GeometryPtr(new Geometry(GeometryKind::PeriodicTorus, points, periods));
}

GeometryPtr build_interval(int points, double length) {
  if (points < 9) {
    throw GeometryError("interval needs at least 9 points, got " + std::to_string(points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw GeometryError("interval length must be positive");
  }
  return GeometryPtr(new Geometry(GeometryKind::NeumannInterval, {points}, {length}));
}

ScalarField sample(const GeometryPtr& geometry, const FieldFunction& fn) {
  Eigen::ArrayXd v(geometry->size());
  for (Index i = 0; i < geometry->size(); ++i) v[i] = fn(geometry->node(i));
  return ScalarField(geometry, std::move(v));
}

}  // namespace harnack
