#include "harnack/geometry.hpp"
#include "harnack/operators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace harnack;

namespace {

constexpr double pi = std::numbers::pi;

double sup_error(const ScalarField& got, const FieldFunction& exact) {
  return (got.values() - sample(got.geometry_ptr(), exact).values()).abs().maxCoeff();
}

GeometryPtr t1() { return build_torus(1, {64}, {2 * pi}); }
GeometryPtr t2() { return build_torus(2, {32, 32}, {2 * pi, 2 * pi}); }

/// Smooth field on the interval whose normal derivative vanishes at both ends.
double neumann_bump(const Point& x) { return std::exp(std::cos(x[0])) + 0.3 * std::cos(2 * x[0]); }

}  // namespace

TEST(BuildTorus, OneDimensional) {
  const auto g = t1();
  EXPECT_EQ(g->kind(), GeometryKind::PeriodicTorus);
  EXPECT_EQ(g->size(), 64);
  EXPECT_FALSE(g->has_boundary());
  EXPECT_EQ(g->ricci_lower_bound(), 0.0);
  EXPECT_DOUBLE_EQ(g->spacing(0), 2 * pi / 64);
}

TEST(BuildTorus, TwoDimensional) {
  const auto g = t2();
  EXPECT_EQ(g->dimension(), 2);
  EXPECT_EQ(g->size(), 1024);
  // Row-major, axis 0 slowest.
  EXPECT_EQ(g->stride(0), 32);
  EXPECT_EQ(g->stride(1), 1);
  const Point x = g->node(3 * 32 + 5);
  EXPECT_DOUBLE_EQ(x[0], 3 * 2 * pi / 32);
  EXPECT_DOUBLE_EQ(x[1], 5 * 2 * pi / 32);
}

TEST(BuildTorus, RejectsBadInput) {
  EXPECT_THROW(build_torus(3, {8, 8, 8}, {1, 1, 1}), GeometryError);
  EXPECT_THROW(build_torus(1, {63}, {2 * pi}), GeometryError);
  EXPECT_THROW(build_torus(1, {6}, {2 * pi}), GeometryError);
  EXPECT_THROW(build_torus(1, {64}, {0.0}), GeometryError);
  EXPECT_THROW(build_torus(1, {64}, {-1.0}), GeometryError);
  EXPECT_THROW(build_torus(2, {32}, {2 * pi}), GeometryError);
}

TEST(BuildInterval, EndpointsInclusive) {
  const auto g = build_interval(129, pi);
  EXPECT_TRUE(g->has_boundary());
  EXPECT_EQ(g->size(), 129);
  EXPECT_DOUBLE_EQ(g->node(0)[0], 0.0);
  EXPECT_DOUBLE_EQ(g->node(128)[0], pi);
  const auto w = g->cell_volumes();
  EXPECT_DOUBLE_EQ(w[0], 0.5 * g->spacing(0));
  EXPECT_DOUBLE_EQ(w[64], g->spacing(0));
  EXPECT_NEAR(w.sum(), pi, 1e-14);
}

TEST(BuildInterval, RejectsBadInput) {
  EXPECT_THROW(build_interval(4, 1.0), GeometryError);
  EXPECT_THROW(build_interval(129, -1.0), GeometryError);
}

TEST(ScalarField, RejectsWrongSizeAndNonFinite) {
  const auto g = t1();
  EXPECT_THROW(ScalarField(g, Eigen::ArrayXd::Zero(10)), GeometryMismatch);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(64);
  v[3] = std::nan("");
  EXPECT_THROW(ScalarField(g, v), NonFiniteField);
}

TEST(Laplacian, Examples) {
  const auto g = t1();
  EXPECT_LT(sup_error(laplacian(*g, sample(g, [](const Point& x) { return std::cos(x[0]); })),
                      [](const Point& x) { return -std::cos(x[0]); }),
            1e-12);
  EXPECT_LT(laplacian(*g, constant_field(g, 3.0)).max_abs(), 1e-13);
  const auto g2 = t2();
  EXPECT_LT(sup_error(laplacian(*g2, sample(g2, [](const Point& x) {
                                  return std::cos(3 * x[0]) + std::sin(2 * x[1]);
                                })),
                      [](const Point& x) { return -9 * std::cos(3 * x[0]) - 4 * std::sin(2 * x[1]); }),
            1e-12);
}

TEST(Laplacian, RejectsFieldOnOtherGeometry) {
  const auto a = t1();
  const auto b = build_torus(1, {32}, {2 * pi});
  EXPECT_THROW(laplacian(*a, constant_field(b, 1.0)), GeometryMismatch);
}

TEST(GradientSq, Examples) {
  const auto g = t1();
  EXPECT_LT(sup_error(gradient_sq(*g, sample(g, [](const Point& x) { return std::sin(x[0]); })),
                      [](const Point& x) { return std::pow(std::cos(x[0]), 2); }),
            1e-13);
  EXPECT_LT(gradient_sq(*g, constant_field(g, -2.0)).max_abs(), 1e-13);
  EXPECT_LT(sup_error(gradient_sq(*g, sample(g, [](const Point& x) { return std::cos(2 * x[0]); })),
                      [](const Point& x) { return 4 * std::pow(std::sin(2 * x[0]), 2); }),
            1e-12);
}

TEST(HessianSq, Examples) {
  const auto g2 = t2();
  EXPECT_LT(sup_error(hessian_sq(*g2, sample(g2, [](const Point& x) { return std::sin(x[0]) * std::sin(x[1]); })),
                      [](const Point& x) {
                        const double s = std::sin(x[0]) * std::sin(x[1]);
                        const double c = std::cos(x[0]) * std::cos(x[1]);
                        return 2 * s * s + 2 * c * c;
                      }),
            1e-13);
  EXPECT_LT(hessian_sq(*g2, constant_field(g2, 1.0)).max_abs(), 1e-13);
  const auto g = t1();
  EXPECT_LT(sup_error(hessian_sq(*g, sample(g, [](const Point& x) { return std::sin(x[0]); })),
                      [](const Point& x) { return std::pow(std::sin(x[0]), 2); }),
            1e-12);
}

TEST(HessianSq, NotOnInterval) {
  const auto g = build_interval(33, pi);
  EXPECT_THROW(hessian_sq(*g, constant_field(g, 1.0)), UnsupportedGeometry);
}

TEST(InnerGrad, Examples) {
  const auto g = t1();
  const auto s = sample(g, [](const Point& x) { return std::sin(x[0]); });
  const auto c = sample(g, [](const Point& x) { return std::cos(x[0]); });
  EXPECT_LT(sup_error(inner_grad(*g, s, s), [](const Point& x) { return std::pow(std::cos(x[0]), 2); }),
            1e-13);
  EXPECT_LT(inner_grad(*g, s, constant_field(g, 5.0)).max_abs(), 1e-13);
  EXPECT_LT(sup_error(inner_grad(*g, s, c), [](const Point& x) { return -std::cos(x[0]) * std::sin(x[0]); }),
            1e-13);
}

TEST(InnerGrad, SelfPairingIsGradientSq) {
  for (const auto& g : {t1(), t2(), build_interval(65, 2.0)}) {
    const auto phi = sample(g, [](const Point& x) {
      return std::sin(x[0] + 0.3) * (x.size() > 1 ? std::cos(2 * x[1]) : 1.0) + 0.2 * std::cos(3 * x[0]);
    });
    EXPECT_LT((inner_grad(*g, phi, phi).values() - gradient_sq(*g, phi).values()).abs().maxCoeff(),
              1e-13);
  }
}

// Any trigonometric polynomial resolvable on the grid is differentiated to
// round-off: relative error <= 1e-12.
TEST(SpectralExactness, RandomTrigonometricPolynomials) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto g = t2();
  for (int trial = 0; trial < 20; ++trial) {
    struct Term {
      int k0, k1;
      double c, s;
    };
    std::vector<Term> terms;
    for (int k0 = 0; k0 <= 10; ++k0) {
      for (int k1 = -10; k1 <= 10; ++k1) terms.push_back({k0, k1, coef(rng), coef(rng)});
    }
    auto phi = [&](const Point& x) {
      double v = 0;
      for (const auto& t : terms) {
        const double th = t.k0 * x[0] + t.k1 * x[1];
        v += t.c * std::cos(th) + t.s * std::sin(th);
      }
      return v;
    };
    auto lap = [&](const Point& x) {
      double v = 0;
      for (const auto& t : terms) {
        const double th = t.k0 * x[0] + t.k1 * x[1];
        v -= (t.k0 * t.k0 + t.k1 * t.k1) * (t.c * std::cos(th) + t.s * std::sin(th));
      }
      return v;
    };
    auto grad_sq = [&](const Point& x) {
      double d0 = 0, d1 = 0;
      for (const auto& t : terms) {
        const double th = t.k0 * x[0] + t.k1 * x[1];
        const double dth = -t.c * std::sin(th) + t.s * std::cos(th);
        d0 += t.k0 * dth;
        d1 += t.k1 * dth;
      }
      return d0 * d0 + d1 * d1;
    };
    auto hess_sq = [&](const Point& x) {
      double h00 = 0, h01 = 0, h11 = 0;
      for (const auto& t : terms) {
        const double th = t.k0 * x[0] + t.k1 * x[1];
        const double v = -(t.c * std::cos(th) + t.s * std::sin(th));
        h00 += t.k0 * t.k0 * v;
        h01 += t.k0 * t.k1 * v;
        h11 += t.k1 * t.k1 * v;
      }
      return h00 * h00 + 2 * h01 * h01 + h11 * h11;
    };
    const auto f = sample(g, phi);
    for (auto [got, exact] : {std::pair{laplacian(*g, f), sample(g, lap)},
                              std::pair{gradient_sq(*g, f), sample(g, grad_sq)},
                              std::pair{hessian_sq(*g, f), sample(g, hess_sq)}}) {
      const double scale = exact.max_abs();
      EXPECT_LT((got.values() - exact.values()).abs().maxCoeff(), 1e-12 * scale);
    }
  }
}

TEST(Nyquist, SecondDerivativeKeptFirstDropped) {
  const auto g = build_torus(1, {16}, {2 * pi});
  const auto nyq = sample(g, [](const Point& x) { return std::cos(8 * x[0]); });
  EXPECT_LT((laplacian(*g, nyq).values() + 64 * nyq.values()).abs().maxCoeff(), 1e-11);
  EXPECT_LT(gradient_sq(*g, nyq).max_abs(), 1e-20);
}

class Quadrature : public ::testing::TestWithParam<int> {
 protected:
  GeometryPtr geometry() const {
    switch (GetParam()) {
      case 0:
        return t1();
      case 1:
        return t2();
      default:
        return build_interval(101, 2.5);
    }
  }
};

TEST_P(Quadrature, SelfAdjoint) {
  const auto g = geometry();
  const auto phi = sample(g, [](const Point& x) {
    return std::exp(std::sin(x[0])) + (x.size() > 1 ? std::cos(x[1] + 0.4) : 0.3 * x[0] * x[0]);
  });
  const auto psi = sample(g, [](const Point& x) {
    return std::cos(2 * x[0] + 1) * (x.size() > 1 ? std::sin(3 * x[1]) : 1.0) + x[0];
  });
  const double lhs = integrate(ScalarField(g, laplacian(*g, phi).values() * psi.values()));
  const double rhs = integrate(ScalarField(g, phi.values() * laplacian(*g, psi).values()));
  EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(lhs), 1.0));
}

TEST_P(Quadrature, MassNeutral) {
  const auto g = geometry();
  const auto phi = sample(g, [](const Point& x) {
    return std::exp(std::cos(x[0]) + (x.size() > 1 ? std::sin(x[1]) : 0.0)) + x[0] * x[0];
  });
  const auto lap = laplacian(*g, phi);
  const double scale = integrate(ScalarField(g, lap.values().abs()));
  EXPECT_LE(std::abs(integrate(lap)), 1e-10 * scale);
}

INSTANTIATE_TEST_SUITE_P(Geometries, Quadrature, ::testing::Values(0, 1, 2));

TEST(IntervalLaplacian, SecondOrderConvergence) {
  std::vector<double> errors;
  for (int n : {33, 65, 129, 257}) {
    const auto g = build_interval(n, pi);
    const auto phi = sample(g, neumann_bump);
    errors.push_back(sup_error(laplacian(*g, phi), [](const Point& x) {
      const double c = std::cos(x[0]), s = std::sin(x[0]);
      return std::exp(c) * (s * s - c) - 1.2 * std::cos(2 * x[0]);
    }));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double order = std::log2(errors[i - 1] / errors[i]);
    EXPECT_GT(order, 1.9) << "refinement " << i;
    EXPECT_LT(order, 2.1) << "refinement " << i;
  }
}

TEST(IntervalLaplacian, ConstantIsHarmonic) {
  const auto g = build_interval(17, 1.0);
  EXPECT_EQ(laplacian(*g, constant_field(g, 2.5)).max_abs(), 0.0);
}

TEST(Operators, TemplatedOnScalar) {
  const auto g = t1();
  Eigen::ArrayXf v(64);
  for (int j = 0; j < 64; ++j) v[j] = std::cos(3.0f * static_cast<float>(g->node(j)[0]));
  const BasicField<float> phi(g, v);
  const BasicField<float> lap = laplacian(*g, phi);
  EXPECT_LT((lap.values() + 9.0f * v).abs().maxCoeff(), 1e-3f);
}

TEST(LaplacianOfGradientSq, DealiasedOnTorus) {
  // f = sin(kx): |f'|^2 = k^2 cos^2(kx) = k^2 (1 + cos 2kx)/2, so
  // Lap |f'|^2 = -2 k^4 cos(2kx). With k = 20 on 64 nodes the product mode
  // 2k = 40 is above Nyquist and aliases without padding.
  const auto g = t1();
  const double k = 20;
  const auto f = sample(g, [&](const Point& x) { return std::sin(k * x[0]); });
  const auto exact = sample(g, [&](const Point& x) { return -2 * std::pow(k, 4) * std::cos(2 * k * x[0]); });
  EXPECT_LT((laplacian_of_gradient_sq(*g, f).values() - exact.values()).abs().maxCoeff(),
            1e-12 * exact.max_abs());
}
