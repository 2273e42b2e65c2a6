#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/spectral.hpp"
#include "imcf/spherical_harmonics.hpp"

using namespace imcf;

namespace {

ScalarField ylm_field(const GridPtr& g, int l, int m) {
  return ScalarField::from_function(g, [&](double th, double ph) { return real_ylm(l, m, th, ph).value; });
}

// e^{2u} times the round metric with u = 0.2 Y_20.
SymTensorField2 conformal_metric(const GridPtr& g) {
  SymTensorField2 out(g);
  for (int i = 0; i < g->n_theta(); ++i)
    for (int j = 0; j < g->n_phi(); ++j) {
      const double u = 0.2 * real_ylm(2, 0, g->theta(i), g->phi(j)).value;
      const double s = g->sin_theta(i), e = std::exp(2.0 * u);
      out[g->index(i, j)] = {e, 0.0, e * s * s};
    }
  return out;
}

}  // namespace

TEST(Spectral, LaplacianOfHarmonicsOnRoundSphere) {
  auto grid = build_grid(24, 48);
  const double r = 1.7;
  const auto g = SymTensorField2::round(grid, r);
  for (auto [l, m] : {std::pair{1, 0}, {1, 1}, {2, -1}, {3, 2}}) {
    const auto f = ylm_field(grid, l, m);
    const auto Lf = apply_laplacian(g, f);
    for (std::size_t n = 0; n < grid->size(); ++n)
      EXPECT_NEAR(Lf[n], -l * (l + 1) / (r * r) * f[n], 1e-3 * l * (l + 1) / (r * r)) << l << " " << m;
  }
}

TEST(Spectral, LaplacianConformalRescaling) {
  auto grid = build_grid(24, 48);
  const auto g = conformal_metric(grid);
  const auto f = ylm_field(grid, 2, 1);
  const auto Lf = apply_laplacian(g, f);
  for (int i = 0; i < grid->n_theta(); ++i)
    for (int j = 0; j < grid->n_phi(); ++j) {
      const std::size_t n = grid->index(i, j);
      const double e = g[n].tt;
      EXPECT_NEAR(Lf[n], -6.0 * f[n] / e, 2e-3);
    }
}

TEST(Spectral, RoundSphereFirstEigenvalue) {
  auto grid = build_grid(32, 64);
  for (double r : {1.0, 2.5}) {
    const auto ep = first_nonzero_eigenvalue(SymTensorField2::round(grid, r));
    EXPECT_NEAR(ep.value * r * r / 2.0, 1.0, 1e-4);
  }
}

TEST(Spectral, EigenvalueScalesWithMetric) {
  auto grid = build_grid(16, 32);
  const auto g = conformal_metric(grid);
  const double a = first_nonzero_eigenvalue(g).value;
  const double b = first_nonzero_eigenvalue(g.scaled(4.0)).value;
  EXPECT_NEAR(b * 4.0, a, 1e-8 * a);
  EXPECT_GT(a, 0.0);
}

TEST(Spectral, EquatorIsoperimetricRatio) {
  auto grid = build_grid(16, 32);
  const double r = 2.0;
  auto st = induced_geometry(AmbientMetric::euclidean(), Surface::sphere(grid, r));
  const auto qs = build_curve_quadratures(grid, {{Vec3::UnitZ(), 0.0, "equator"},
                                                 {Vec3::UnitX(), 0.5, "x"},
                                                 {Vec3::UnitY(), -0.3, "y"}});
  const auto m = measure_curves(st, qs);
  EXPECT_NEAR(m[0].length, 2.0 * std::numbers::pi * r, 1e-6);
  EXPECT_NEAR(m[0].inner_area, 2.0 * std::numbers::pi * r * r, 1e-6);
  EXPECT_NEAR(m[0].ratio(), 1.0 / r, 1e-6);
  EXPECT_NEAR(m[1].inner_area, 2.0 * std::numbers::pi * r * r * 0.5, 1e-6);
  EXPECT_NEAR(m[1].length, 2.0 * std::numbers::pi * r * std::sqrt(0.75), 1e-6);
  EXPECT_NEAR(m[2].outer_area, 2.0 * std::numbers::pi * r * r * 0.7, 1e-6);
  const auto pc = poincare_check(st, build_curve_quadratures(grid, default_candidates()));
  EXPECT_NEAR(pc.in1_upper, 1.0 / r, 1e-6);
  EXPECT_TRUE(pc.cheeger_ok);
}

TEST(Spectral, LengthOfStretchedEquator) {
  // Metric pulled back by y = (x, y, 2z): equator length 2 pi, meridian length
  // the perimeter of the ellipse with semi-axes 1 and 2.
  auto grid = build_grid(24, 48);
  auto st = induced_geometry(AmbientMetric::euclidean(), Surface::sphere(grid, 1.0));
  for (std::size_t n = 0; n < grid->size(); ++n) {
    const auto f = radial_frame(grid->theta(grid->row_of(n)), grid->phi(grid->col_of(n)));
    const Vec3 yt(f.t.x(), f.t.y(), 2.0 * f.t.z()), yp(f.p.x(), f.p.y(), 2.0 * f.p.z());
    st.g[n] = {yt.dot(yt), yt.dot(yp), yp.dot(yp)};
  }
  const auto qs = build_curve_quadratures(grid, {{Vec3::UnitZ(), 0.0, "eq"}, {Vec3::UnitX(), 0.0, "mer"}});
  const auto m = measure_curves(st, qs);
  EXPECT_NEAR(m[0].length, 2.0 * std::numbers::pi, 1e-6);
  // 8 E(k^2 = 3/4)
  const double ellipse = 9.688448220547675;
  EXPECT_NEAR(m[1].length, ellipse, 1e-5);
}
