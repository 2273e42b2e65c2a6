#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/fields.hpp"
#include "imcf/grid.hpp"
#include "imcf/interp.hpp"
#include "imcf/spherical_harmonics.hpp"

using namespace imcf;
constexpr double kPi = std::numbers::pi;

TEST(Grid, WeightsSumToFourPi) {
  for (auto [nt, np] : {std::pair{8, 16}, {17, 32}, {32, 64}}) {
    const auto g = build_grid(nt, np);
    double sum = 0.0;
    for (double w : g->weights()) sum += w;
    EXPECT_NEAR(sum / (4.0 * kPi), 1.0, 1e-12);
    for (int i = 0; i < nt; ++i) {
      EXPECT_GT(g->theta(i), 0.0);
      EXPECT_LT(g->theta(i), kPi);
    }
  }
}

TEST(Grid, RejectsSmallCounts) {
  EXPECT_THROW(build_grid(7, 16), GridError);
  EXPECT_THROW(build_grid(8, 15), GridError);
  EXPECT_THROW(build_grid(8, 17), GridError);
}

TEST(Grid, IntegratesPolynomialsInCosThetaExactly) {
  const int nt = 8;
  const auto g = build_grid(nt, 16);
  for (int k = 0; k <= 2 * nt - 1; ++k) {
    const auto f = ScalarField::from_function(g, [k](double t, double) { return std::pow(std::cos(t), k); });
    const double exact = (k % 2 == 1) ? 0.0 : 4.0 * kPi / (k + 1);
    EXPECT_NEAR(integrate_round(f.values, *g), exact, 1e-12) << "degree " << k;
  }
}

TEST(Grid, IntegrateRoundMetric) {
  const auto g = build_grid(12, 24);
  const ScalarField one(g, 1.0);
  const double r0 = 1.7, t = 0.6;
  EXPECT_NEAR(integrate(one, SymTensorField2::round(g, r0)), 4.0 * kPi * r0 * r0, 1e-11);
  EXPECT_NEAR(integrate(one, SymTensorField2::round(g, r0 * std::exp(t / 2))),
              4.0 * kPi * r0 * r0 * std::exp(t), 1e-11);
}

TEST(Grid, RejectsIndefiniteMetric) {
  const auto g = build_grid(8, 16);
  auto m = SymTensorField2::round(g, 1.0);
  m[5] = {1.0, 2.0, 1.0};
  EXPECT_THROW(integrate(ScalarField(g, 1.0), m), GeometryError);
}

TEST(Grid, FornbergMatchesClassicalCentralWeights) {
  const double x[5] = {-2, -1, 0, 1, 2};
  const auto c = fornberg_weights(0.0, x, 2);
  const double d1[5] = {1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12};
  const double d2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(c[1][k], d1[k], 1e-14);
    EXPECT_NEAR(c[2][k], d2[k], 1e-14);
  }
}

// Derivatives of smooth functions on the sphere, including stencils that cross the poles.
TEST(Grid, DerivativesAcrossPoles) {
  const auto g = build_grid(32, 64);
  // f = x + 2 y z, smooth on the sphere
  auto f = [](double t, double p) {
    return std::sin(t) * std::cos(p) + 2.0 * std::sin(t) * std::sin(p) * std::cos(t);
  };
  auto ft = [](double t, double p) {
    return std::cos(t) * std::cos(p) + 2.0 * std::sin(p) * std::cos(2 * t);
  };
  auto ftt = [](double t, double p) {
    return -std::sin(t) * std::cos(p) - 4.0 * std::sin(p) * std::sin(2 * t);
  };
  auto fp = [](double t, double p) {
    return -std::sin(t) * std::sin(p) + std::cos(p) * std::sin(2 * t);
  };
  const auto vals = ScalarField::from_function(g, f);
  const auto d = partials(*g, vals.values);
  double et = 0, ett = 0, ep = 0, etp = 0;
  for (int i = 0; i < g->n_theta(); ++i)
    for (int j = 0; j < g->n_phi(); ++j) {
      const auto n = g->index(i, j);
      const double t = g->theta(i), p = g->phi(j);
      et = std::max(et, std::abs(d.t[n] - ft(t, p)));
      ett = std::max(ett, std::abs(d.tt[n] - ftt(t, p)));
      ep = std::max(ep, std::abs(d.p[n] - fp(t, p)));
      const double ftp = -std::cos(t) * std::sin(p) + 2.0 * std::cos(p) * std::cos(2 * t);
      etp = std::max(etp, std::abs(d.tp[n] - ftp));
    }
  EXPECT_LT(et, 5e-4);
  EXPECT_LT(ett, 5e-3);
  EXPECT_LT(ep, 5e-4);
  EXPECT_LT(etp, 5e-3);
}

TEST(Grid, ThetaDerivativeConvergesAtFourthOrder) {
  double err[2];
  int k = 0;
  for (int nt : {16, 32}) {
    const auto g = build_grid(nt, 2 * nt);
    const auto vals = ScalarField::from_function(g, [](double t, double p) {
      return std::exp(std::sin(t) * std::cos(p));
    });
    const auto dt = d_theta(*g, vals.values);
    double e = 0;
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < 2 * nt; ++j) {
        const double t = g->theta(i), p = g->phi(j);
        const double ex = std::cos(t) * std::cos(p) * std::exp(std::sin(t) * std::cos(p));
        e = std::max(e, std::abs(dt[g->index(i, j)] - ex));
      }
    err[k++] = e;
  }
  EXPECT_GT(std::log2(err[0] / err[1]), 3.5);
}

TEST(Grid, InterpolationOfSmoothField) {
  const auto g = build_grid(24, 48);
  auto f = [](double t, double p) { return std::exp(std::sin(t) * std::sin(p) + 0.5 * std::cos(t)); };
  const auto vals = ScalarField::from_function(g, f);
  for (double t : {0.01, 0.3, 1.5707963, 2.9, 3.13})
    for (double p : {0.0, 1.0, 3.5, 6.2}) {
      const InterpStencil st(*g, t, p);
      EXPECT_NEAR(st.apply(vals.values), f(t, p), 1e-6) << t << " " << p;
    }
}

TEST(SphericalHarmonics, OrthonormalOnGrid) {
  const auto g = build_grid(16, 32);
  const std::pair<int, int> modes[] = {{0, 0}, {1, 0}, {1, 1}, {2, -1}, {2, 0}, {3, 2}};
  for (auto [l1, m1] : modes)
    for (auto [l2, m2] : modes) {
      const auto a = ScalarField::from_function(g, [&](double t, double p) { return real_ylm(l1, m1, t, p).value; });
      const auto b = ScalarField::from_function(g, [&](double t, double p) { return real_ylm(l2, m2, t, p).value; });
      double s = 0;
      for (std::size_t n = 0; n < g->size(); ++n) s += a[n] * b[n] * g->weight(n);
      EXPECT_NEAR(s, (l1 == l2 && m1 == m2) ? 1.0 : 0.0, 1e-12);
    }
}

TEST(SphericalHarmonics, AnalyticDerivatives) {
  const double h = 1e-6;
  for (auto [l, m] : {std::pair{2, 0}, {3, 1}, {2, -2}}) {
    const double t = 0.7, p = 1.1;
    const auto y = real_ylm(l, m, t, p);
    EXPECT_NEAR(y.d_theta, (real_ylm(l, m, t + h, p).value - real_ylm(l, m, t - h, p).value) / (2 * h), 1e-8);
    EXPECT_NEAR(y.d_phi, (real_ylm(l, m, t, p + h).value - real_ylm(l, m, t, p - h).value) / (2 * h), 1e-8);
  }
  // Y_20 closed form
  EXPECT_NEAR(real_ylm(2, 0, 0.4, 0.0).value,
              std::sqrt(5.0 / (16.0 * kPi)) * (3.0 * std::pow(std::cos(0.4), 2) - 1.0), 1e-14);
}
