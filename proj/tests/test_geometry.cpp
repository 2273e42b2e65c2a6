#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/geometry.hpp"

using namespace imcf;
constexpr double kPi = std::numbers::pi;

namespace {
Surface bumpy(GridPtr g, double r, double e20, double e31) {
  std::vector<double> rho(g->size());
  for (int i = 0; i < g->n_theta(); ++i)
    for (int j = 0; j < g->n_phi(); ++j)
      rho[g->index(i, j)] = r * (1.0 + e20 * real_ylm(2, 0, g->theta(i), g->phi(j)).value +
                                 e31 * real_ylm(3, 1, g->theta(i), g->phi(j)).value);
  return Surface::graph(g, rho);
}
double max_abs_diff(const ScalarField& a, double v) {
  double e = 0;
  for (double x : a.values) e = std::max(e, std::abs(x - v));
  return e;
}
}  // namespace

TEST(Geometry, RoundSphereInEuclideanSpace) {
  const auto g = build_grid(16, 32);
  const double r = 1.3;
  const auto st = induced_geometry(AmbientMetric::euclidean(), Surface::sphere(g, r));
  EXPECT_LT(max_abs_diff(st.H, 2.0 / r), 1e-12);
  EXPECT_LT(max_abs_diff(st.lambda1, 1.0 / r), 1e-12);
  EXPECT_LT(max_abs_diff(st.lambda2, 1.0 / r), 1e-12);
  EXPECT_NEAR(st.area, 4.0 * kPi * r * r, 1e-11);
  const ScalarField h2(g, 0.0);
  ScalarField H2 = st.H;
  for (auto& v : H2.values) v *= v;
  EXPECT_NEAR(integrate(H2, st.g), 16.0 * kPi, 1e-11);
}

TEST(Geometry, SchwarzschildCoordinateSphere) {
  const auto g = build_grid(12, 24);
  const double m = 0.8;
  const auto amb = AmbientMetric::schwarzschild(m);
  for (double s : {2.0, 3.0, 10.0}) {
    const auto st = induced_geometry(amb, Surface::sphere(g, s));
    EXPECT_LT(max_abs_diff(st.H, 2.0 / s * std::sqrt(1.0 - 2.0 * m / s)), 1e-12);
    const auto K = gauss_curvature(st, amb);
    EXPECT_LT(max_abs_diff(K.K, 1.0 / (s * s)), 1e-12);
    EXPECT_LT(max_abs_diff(K.intrinsic, 1.0 / (s * s)), 2e-2 / (s * s));
    EXPECT_NEAR(euler_characteristic(st, amb), 2.0, 1e-8);
  }
}

TEST(Geometry, TraceAndNormIdentities) {
  const auto g = build_grid(16, 32);
  AmbientPerturbation p;
  p.amplitude = 0.1;
  const auto amb = AmbientMetric::perturbed(AmbientMetric::schwarzschild(0.2), p);
  const auto st = induced_geometry(amb, bumpy(g, 1.5, 0.1, 0.05));
  const auto A2 = st.A_norm_sq();
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Sym2 gi = st.g[n].inverse();
    const double tr = gi.tt * st.A[n].tt + 2 * gi.tp * st.A[n].tp + gi.pp * st.A[n].pp;
    EXPECT_NEAR(tr, st.H[n], 1e-10 * std::abs(st.H[n]));
    const double l1 = st.lambda1[n], l2 = st.lambda2[n];
    EXPECT_LE(l1, l2);
    EXPECT_NEAR(l1 + l2, st.H[n], 1e-10 * std::abs(st.H[n]));
    EXPECT_NEAR(A2[n], 0.5 * st.H[n] * st.H[n] + 0.5 * (l1 - l2) * (l1 - l2), 1e-10 * A2[n]);
    EXPECT_GT(st.H[n], 0.0);
  }
}

TEST(Geometry, GradientNormOfCosTheta) {
  const auto g = build_grid(24, 48);
  const auto f = ScalarField::from_function(g, [](double t, double) { return std::cos(t); });
  const auto gr = grad_norm_sq(f, SymTensorField2::round(g, 1.0));
  double e = 0;
  for (int i = 0; i < g->n_theta(); ++i)
    for (int j = 0; j < g->n_phi(); ++j)
      e = std::max(e, std::abs(gr[g->index(i, j)] - std::pow(std::sin(g->theta(i)), 2)));
  EXPECT_LT(e, 5e-5);
  const auto scaled = grad_norm_sq(f, SymTensorField2::round(g, 2.0));
  for (std::size_t n = 0; n < g->size(); ++n) EXPECT_NEAR(scaled[n], gr[n] / 4.0, 1e-14);
  const auto zero = grad_norm_sq(ScalarField(g, 3.0), SymTensorField2::round(g, 1.0));
  EXPECT_LT(max_abs_diff(zero, 0.0), 1e-12);
}

TEST(Geometry, GaussBonnetOnPerturbedGraph) {
  const auto g = build_grid(32, 64);
  const auto amb = AmbientMetric::euclidean();
  const auto st = induced_geometry(amb, bumpy(g, 1.0, 0.15, 0.05));
  EXPECT_NEAR(euler_characteristic(st, amb), 2.0, 1e-4);
}

// Gauss-Bonnet defect and the intrinsic/extrinsic curvature gap both shrink
// at least quadratically under grid refinement.
TEST(Geometry, RefinementSlopes) {
  const auto amb = AmbientMetric::schwarzschild(0.2);
  std::vector<double> h, chi_err, gauss_err;
  for (int nt : {12, 16, 24}) {
    const auto g = build_grid(nt, 2 * nt);
    const auto st = induced_geometry(amb, bumpy(g, 1.5, 0.3, 0.1));
    const auto K = gauss_curvature(st, amb);
    h.push_back(kPi / nt);
    chi_err.push_back(std::abs(euler_characteristic(st, amb) - 2.0));
    double e = 0;
    for (std::size_t n = 0; n < g->size(); ++n) e = std::max(e, std::abs(K.K[n] - K.intrinsic[n]));
    gauss_err.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const double s1 = std::log(chi_err[k] / chi_err[k + 1]) / std::log(h[k] / h[k + 1]);
    const double s2 = std::log(gauss_err[k] / gauss_err[k + 1]) / std::log(h[k] / h[k + 1]);
    EXPECT_GE(s1, 1.8) << chi_err[k] << " " << chi_err[k + 1];
    EXPECT_GE(s2, 1.8) << gauss_err[k] << " " << gauss_err[k + 1];
  }
}

TEST(Geometry, ChartAndGraphErrors) {
  const auto g = build_grid(8, 16);
  EXPECT_THROW(induced_geometry(AmbientMetric::schwarzschild(1.0), Surface::sphere(g, 1.5)), ChartError);
  // markers pushed towards the south pole fold the surface over
  auto s = Surface::sphere(g, 1.0);
  for (int i = 0; i < g->n_theta(); ++i)
    for (int j = 0; j < g->n_phi(); ++j) {
      const auto f = radial_frame(g->theta(i), g->phi(j));
      for (int c = 0; c < 3; ++c) s.drift[c][g->index(i, j)] = 2.0 * std::sin(g->theta(i)) * f.t[c];
    }
  EXPECT_THROW(induced_geometry(AmbientMetric::euclidean(), s), GeometryError);
}
