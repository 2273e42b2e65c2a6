#include <gtest/gtest.h>

#include <cmath>

#include "imcf/ambient.hpp"

using namespace imcf;

namespace {
Vec3 point(double s, double t, double p) {
  return s * Vec3(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t));
}
// Unit normal in G along the radial direction.
Vec3 radial_unit(const AmbientMetric& a, const Vec3& y) {
  const Vec3 n = y.normalized();
  return n / std::sqrt(n.dot(a.metric(y) * n));
}
}  // namespace

TEST(Ambient, EuclideanIsFlat) {
  const auto a = AmbientMetric::euclidean();
  const Vec3 y = point(2.0, 0.4, 1.0);
  EXPECT_EQ(a.scalar_curvature(y), 0.0);
  EXPECT_EQ(a.ricci_normal(y, Vec3(0.3, 0.1, 1.0)), 0.0);
  EXPECT_EQ(a.sectional(y, Vec3::UnitX(), Vec3::UnitY()), 0.0);
  const auto rep = a.af_constants({10.0, 20.0});
  EXPECT_EQ(rep.c_metric, 0.0);
  EXPECT_EQ(rep.c_deriv, 0.0);
  EXPECT_EQ(rep.c_deriv2, 0.0);
}

TEST(Ambient, SchwarzschildClosedForms) {
  const double m = 1.0;
  const auto a = AmbientMetric::schwarzschild(m);
  for (double s : {2.5, 3.0, 7.0}) {
    const Vec3 y = point(s, 1.1, 0.3);
    EXPECT_NEAR(a.scalar_curvature(y), 0.0, 1e-12);
    EXPECT_NEAR(a.ricci_normal(y, radial_unit(a, y)), -2.0 * m / (s * s * s), 1e-12);
    const Vec3 n = y.normalized();
    const Vec3 u = n.cross(Vec3::UnitZ()).normalized();
    const Vec3 v = n.cross(u);
    EXPECT_NEAR(a.sectional(y, u, v), 2.0 * m / (s * s * s), 1e-12);
    // metric form phi^2 ds^2 + s^2 sigma
    EXPECT_NEAR(n.dot(a.metric(y) * n), 1.0 / (1.0 - 2.0 * m / s), 1e-12);
    EXPECT_NEAR(u.dot(a.metric(y) * u), 1.0, 1e-12);
  }
}

// The tensor built from the closed-form metric jets must reproduce the
// closed-form frame curvatures.
TEST(Ambient, RiemannFromJetsMatchesClosedForm) {
  for (const auto& a : {AmbientMetric::schwarzschild(0.7), AmbientMetric::rotsym(0.5, 0.8)}) {
    for (double s : {1.6, 2.5, 6.0}) {
      const Vec3 y = point(s, 0.9, 2.0);
      const Riemann rm = a.riemann(y);
      EXPECT_NEAR(rm.scalar(), a.scalar_curvature(y), 1e-10);
      const Vec3 dirs[] = {Vec3(1, 0, 0), Vec3(0.2, -0.5, 0.7), y.normalized()};
      for (const Vec3& d : dirs) {
        const Vec3 u = d / std::sqrt(d.dot(rm.G * d));
        EXPECT_NEAR(u.dot(rm.ricci() * u), a.ricci_normal(y, u), 1e-10);
      }
      EXPECT_NEAR(rm.sectional(Vec3(1, 2, 0), Vec3(0, 1, 3)), a.sectional(y, Vec3(1, 2, 0), Vec3(0, 1, 3)),
                  1e-10);
    }
  }
}

TEST(Ambient, RotsymScalarCurvatureIsNonnegative) {
  const auto a = AmbientMetric::rotsym(0.3, 0.5);
  for (double s = 0.05; s < 10.0; s *= 1.5) {
    const Vec3 y = point(s, 0.5, 0.5);
    const double mu1 = 3.0 * 0.3 * s * s * 0.125 / std::pow(s * s * s + 0.125, 2);
    EXPECT_NEAR(a.scalar_curvature(y), 4.0 * mu1 / (s * s), 1e-12);
    EXPECT_GE(a.scalar_curvature(y), 0.0);
  }
  const auto flat = AmbientMetric::rotsym(0.0, 1.0);
  EXPECT_EQ(flat.scalar_curvature(point(2.0, 0.3, 0.3)), 0.0);
  EXPECT_EQ(flat.ricci_normal(point(2.0, 0.3, 0.3), Vec3(0, 0, 1)), 0.0);
}

TEST(Ambient, TangentSectionalIdentity) {
  AmbientPerturbation p;
  p.amplitude = 0.05;
  const AmbientMetric fams[] = {AmbientMetric::schwarzschild(0.4), AmbientMetric::rotsym(0.4, 1.0),
                                AmbientMetric::perturbed(AmbientMetric::schwarzschild(0.4), p)};
  for (const auto& a : fams) {
    for (double s : {1.5, 3.0}) {
      const Vec3 y = point(s, 1.2, 0.7);
      for (const Vec3& ncov : {Vec3(0.3, 0.2, 1.0), y.normalized(), Vec3(1, -1, 0.1)}) {
        const NormalCurvatures c = a.normal_curvatures(y, ncov);
        // K_12 = R/2 - Rc(nu, nu) in three dimensions
        EXPECT_NEAR(c.tangent_sectional, 0.5 * (c.scalar - 2.0 * c.ricci_normal), 1e-8) << a.name();
      }
    }
  }
}

TEST(Ambient, PerturbationLinearInAmplitude) {
  const auto base = AmbientMetric::schwarzschild(0.3);
  const Vec3 y = point(1.5, 0.8, 0.4);
  const Vec3 nu = radial_unit(base, y);
  auto at = [&](double eps) {
    AmbientPerturbation p;
    p.amplitude = eps;
    return AmbientMetric::perturbed(base, p).scalar_curvature(y);
  };
  const double r0 = base.scalar_curvature(y);
  EXPECT_NEAR(at(0.0), r0, 1e-7);
  AmbientPerturbation p0;
  EXPECT_NEAR(AmbientMetric::perturbed(base, p0).ricci_normal(y, nu), base.ricci_normal(y, nu), 1e-7);
  const double d1 = at(1e-2) - r0, d2 = at(2e-2) - r0;
  EXPECT_NEAR(d2 / d1, 2.0, 0.05);
}

TEST(Ambient, AsymptoticFlatnessConstants) {
  const double m = 0.5;
  const auto a = AmbientMetric::schwarzschild(m);
  const auto rep = a.af_constants({200.0, 400.0});
  EXPECT_NEAR(rep.c_metric, 2.0 * m, 2.0 * m * 4.0 * m / 200.0);
  EXPECT_LT(rep.c_deriv, 10.0);
  AmbientPerturbation p;
  p.amplitude = 0.01;
  p.cutoff_inner = 2.0;
  p.cutoff_outer = 4.0;
  const auto pr = AmbientMetric::perturbed(a, p).af_constants({3.0, 200.0});
  const auto br = a.af_constants({3.0, 200.0});
  EXPECT_NEAR(pr.c_metric, br.c_metric, 3.0 * p.amplitude * 3.0);
}

TEST(Ambient, ChartViolations) {
  const auto a = AmbientMetric::schwarzschild(1.0);
  EXPECT_THROW(a.metric(point(1.5, 1.0, 1.0)), ChartError);
  EXPECT_THROW(AmbientMetric::schwarzschild(-1.0), std::invalid_argument);
  EXPECT_NEAR(AmbientMetric::rotsym(1.0, 0.1).chart_inner_radius(), 2.0, 0.05);
}
