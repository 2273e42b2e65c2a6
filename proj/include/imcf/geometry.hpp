#pragma once
// Embedded surfaces y(x) = rho(x) rhat(x) + tau(x) over the parameter sphere,
// their induced metric, second fundamental form and curvature fields.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "imcf/ambient.hpp"
#include "imcf/fields.hpp"
#include "imcf/grid.hpp"

namespace imcf {

// Marker positions: radius rho along the parameter direction plus a drift tau
// orthogonal to that direction. Coordinate spheres have tau = 0.
struct Surface {
  GridPtr grid;
  std::vector<double> rho;
  std::array<std::vector<double>, 3> drift;

  static Surface graph(GridPtr g, std::vector<double> rho) {
    Surface s{g, std::move(rho), {}};
    for (auto& d : s.drift) d.assign(g->size(), 0.0);
    return s;
  }
  static Surface sphere(GridPtr g, double radius) {
    return graph(g, std::vector<double>(g->size(), radius));
  }
  bool has_drift() const {
    for (const auto& d : drift)
      for (double v : d)
        if (v != 0.0) return true;
    return false;
  }
};

// rhat and its first and second coordinate partials at grid row i, column j.
struct RadialFrame {
  Vec3 r, t, p, tt, tp, pp;
};

inline RadialFrame radial_frame(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
  RadialFrame f;
  f.r = {st * cp, st * sp, ct};
  f.t = {ct * cp, ct * sp, -st};
  f.p = {-st * sp, st * cp, 0.0};
  f.tt = -f.r;
  f.tp = {-ct * sp, ct * cp, 0.0};
  f.pp = {-st * cp, -st * sp, 0.0};
  return f;
}

struct FlowState {
  double t = 0.0;
  ScalarField rho;
  std::array<std::vector<double>, 3> drift;
  SymTensorField2 g;
  SymTensorField2 A;
  ScalarField H;
  ScalarField lambda1, lambda2;  // principal curvatures, lambda1 <= lambda2
  double area = 0.0;
  std::vector<Vec3> position;    // y
  std::vector<Vec3> normal;      // G-unit outward normal vector
  std::vector<Vec3> normal_cov;  // y_theta x y_phi (annihilates the tangent plane)
  std::vector<double> density;   // dmu / dsigma

  const GridPtr& grid() const { return g.grid; }
  Surface surface() const { return Surface{rho.grid, rho.values, drift}; }

  ScalarField A_norm_sq() const {
    ScalarField out(grid());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = contract(A[n], A[n], g[n].inverse());
    return out;
  }
};

// Pullback geometry of a surface inside an ambient chart.
inline FlowState induced_geometry(const AmbientMetric& ambient, const Surface& surf, double t = 0.0) {
  const auto& grid = *surf.grid;
  const std::size_t N = grid.size();
  for (double r : surf.rho)
    if (!std::isfinite(r) || r <= ambient.chart_inner_radius())
      throw ChartError("surface radius outside chart domain");

  const Partials dr = partials(grid, surf.rho);
  std::array<Partials, 3> dd;
  const bool drift = surf.has_drift();
  if (drift)
    for (int c = 0; c < 3; ++c) dd[c] = partials(grid, surf.drift[c]);

  FlowState st;
  st.t = t;
  st.rho = ScalarField(surf.grid, surf.rho);
  st.drift = surf.drift;
  st.g = SymTensorField2(surf.grid);
  st.A = SymTensorField2(surf.grid);
  st.H = ScalarField(surf.grid);
  st.lambda1 = ScalarField(surf.grid);
  st.lambda2 = ScalarField(surf.grid);
  st.position.resize(N);
  st.normal.resize(N);
  st.normal_cov.resize(N);
  st.density.resize(N);

  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t n = grid.index(i, j);
      const RadialFrame f = radial_frame(grid.theta(i), grid.phi(j));
      const double r = surf.rho[n];
      Vec3 y = r * f.r;
      Vec3 yt = dr.t[n] * f.r + r * f.t;
      Vec3 yp = dr.p[n] * f.r + r * f.p;
      Vec3 ytt = dr.tt[n] * f.r + 2.0 * dr.t[n] * f.t + r * f.tt;
      Vec3 ytp = dr.tp[n] * f.r + dr.t[n] * f.p + dr.p[n] * f.t + r * f.tp;
      Vec3 ypp = dr.pp[n] * f.r + 2.0 * dr.p[n] * f.p + r * f.pp;
      if (drift) {
        for (int c = 0; c < 3; ++c) {
          y[c] += surf.drift[c][n];
          yt[c] += dd[c].t[n];
          yp[c] += dd[c].p[n];
          ytt[c] += dd[c].tt[n];
          ytp[c] += dd[c].tp[n];
          ypp[c] += dd[c].pp[n];
        }
      }
      const MetricJet1 jet = ambient.jet1(y);
      const auto gam = christoffel(jet);
      const Mat3& G = jet.G;

      Sym2 g{yt.dot(G * yt), yt.dot(G * yp), yp.dot(G * yp)};
      if (!(g.det() > 0.0) || !(g.tt > 0.0))
        throw GeometryError("degenerate induced metric at node " + std::to_string(n));

      const Vec3 ncov = yt.cross(yp);
      if (!(ncov.dot(y) > 0.0)) throw GeometryError("surface is no longer a radial graph");
      const Mat3 Ginv = G.inverse();
      const Vec3 nvec = Ginv * ncov;
      const double nlen = std::sqrt(ncov.dot(nvec));

      auto second = [&](const Vec3& yab, const Vec3& ya, const Vec3& yb) {
        Vec3 acc = yab;
        for (int k = 0; k < 3; ++k) acc[k] += ya.dot(gam[k] * yb);
        return -ncov.dot(acc) / nlen;
      };
      Sym2 a{second(ytt, yt, yt), second(ytp, yt, yp), second(ypp, yp, yp)};
      const Sym2 gi = g.inverse();
      const double h = gi.tt * a.tt + 2.0 * gi.tp * a.tp + gi.pp * a.pp;
      const auto [l1, l2] = relative_eigenvalues(a, g);

      st.g[n] = g;
      st.A[n] = a;
      st.H[n] = h;
      st.lambda1[n] = l1;
      st.lambda2[n] = l2;
      st.position[n] = y;
      st.normal_cov[n] = ncov;
      st.normal[n] = nvec / nlen;
      st.density[n] = std::sqrt(g.det()) / grid.sin_theta(i);
    }
  }
  st.area = integrate_round(st.density, grid);
  return st;
}

// |grad f|^2_g for an even (scalar) nodal field.
inline ScalarField grad_norm_sq(const ScalarField& f, const SymTensorField2& g) {
  const auto& grid = *g.grid;
  const auto ft = d_theta(grid, f.values);
  const auto fp = d_phi(grid, f.values);
  ScalarField out(g.grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Sym2 gi = g[n].inverse();
    out[n] = gi.tt * ft[n] * ft[n] + 2.0 * gi.tp * ft[n] * fp[n] + gi.pp * fp[n] * fp[n];
  }
  return out;
}

// g^{ab} d_a f d_b h
inline ScalarField grad_dot(const ScalarField& f, const ScalarField& h, const SymTensorField2& g) {
  const auto& grid = *g.grid;
  const auto ft = d_theta(grid, f.values), fp = d_phi(grid, f.values);
  const auto ht = d_theta(grid, h.values), hp = d_phi(grid, h.values);
  ScalarField out(g.grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Sym2 gi = g[n].inverse();
    out[n] = gi.tt * ft[n] * ht[n] + gi.tp * (ft[n] * hp[n] + fp[n] * ht[n]) + gi.pp * fp[n] * hp[n];
  }
  return out;
}

// First partials of the metric components, respecting pole parity.
struct MetricPartials {
  std::vector<double> E_t, E_p, F_t, F_p, G_t, G_p;
  std::vector<double> E_pp, F_tp, G_tt;
};

// g_pp / sin^2 and g_tp / sin are smooth and even across the poles; they are
// differentiated numerically and the sine factors analytically, so that
// truncation errors are not amplified by 1/sin^2 in Christoffel symbols.
inline MetricPartials metric_partials(const SymTensorField2& g, int p = 0, bool second = false) {
  const auto& grid = *g.grid;
  const std::size_t N = grid.size();
  const auto E = g.component(0);
  std::vector<double> k(N), h(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double s = grid.sin_theta(grid.row_of(n));
    k[n] = g[n].tp / s;
    h[n] = g[n].pp / (s * s);
  }
  MetricPartials d;
  d.E_t = d_theta(grid, E, Parity::Even, p);
  d.E_p = d_phi(grid, E, p);
  const auto k_t = d_theta(grid, k, Parity::Even, p), k_p = d_phi(grid, k, p);
  const auto h_t = d_theta(grid, h, Parity::Even, p), h_p = d_phi(grid, h, p);
  d.F_t.resize(N);
  d.F_p.resize(N);
  d.G_t.resize(N);
  d.G_p.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    const int i = grid.row_of(n);
    const double s = grid.sin_theta(i), c = grid.cos_theta(i);
    d.F_t[n] = c * k[n] + s * k_t[n];
    d.F_p[n] = s * k_p[n];
    d.G_t[n] = 2.0 * s * c * h[n] + s * s * h_t[n];
    d.G_p[n] = s * s * h_p[n];
  }
  if (second) {
    d.E_pp = d_phi2(grid, E, p);
    const auto k_tp = d_phi(grid, k_t, p);
    const auto h_tt = d_theta2(grid, h, Parity::Even, p);
    d.F_tp.resize(N);
    d.G_tt.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
      const int i = grid.row_of(n);
      const double s = grid.sin_theta(i), c = grid.cos_theta(i);
      d.F_tp[n] = c * k_p[n] + s * k_tp[n];
      d.G_tt[n] = 2.0 * (c * c - s * s) * h[n] + 4.0 * s * c * h_t[n] + s * s * h_tt[n];
    }
  }
  return d;
}

// Intrinsic Gauss curvature from the metric alone (Brioschi formula).
inline ScalarField intrinsic_gauss_curvature(const SymTensorField2& g, int p = 0) {
  const auto& grid = *g.grid;
  if (p == 0) p = std::min(3, grid.max_width());
  const MetricPartials d = metric_partials(g, p, true);
  ScalarField K(g.grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double E = g[n].tt, F = g[n].tp, G = g[n].pp;
    Eigen::Matrix3d m1, m2;
    m1 << -0.5 * d.E_pp[n] + d.F_tp[n] - 0.5 * d.G_tt[n], 0.5 * d.E_t[n], d.F_t[n] - 0.5 * d.E_p[n],
        d.F_p[n] - 0.5 * d.G_t[n], E, F, 0.5 * d.G_p[n], F, G;
    m2 << 0.0, 0.5 * d.E_p[n], 0.5 * d.G_t[n], 0.5 * d.E_p[n], E, F, 0.5 * d.G_t[n], F, G;
    const double det = E * G - F * F;
    K[n] = (m1.determinant() - m2.determinant()) / (det * det);
  }
  return K;
}

// Ambient curvature quantities sampled along the surface.
struct AmbientAlongSurface {
  std::vector<double> R, Rc, K12;
};

inline AmbientAlongSurface ambient_along(const FlowState& st, const AmbientMetric& ambient) {
  AmbientAlongSurface out;
  const std::size_t N = st.position.size();
  out.R.resize(N);
  out.Rc.resize(N);
  out.K12.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    const NormalCurvatures c = ambient.normal_curvatures(st.position[n], st.normal_cov[n]);
    out.R[n] = c.scalar;
    out.Rc[n] = c.ricci_normal;
    out.K12[n] = c.tangent_sectional;
  }
  return out;
}

struct GaussCurvature {
  ScalarField K;          // lambda1 lambda2 + K12
  ScalarField intrinsic;  // from the induced metric
};

inline GaussCurvature gauss_curvature(const FlowState& st, const AmbientAlongSurface& amb) {
  GaussCurvature out{ScalarField(st.grid()), intrinsic_gauss_curvature(st.g)};
  for (std::size_t n = 0; n < out.K.size(); ++n)
    out.K[n] = st.lambda1[n] * st.lambda2[n] + amb.K12[n];
  return out;
}

inline GaussCurvature gauss_curvature(const FlowState& st, const AmbientMetric& ambient) {
  return gauss_curvature(st, ambient_along(st, ambient));
}

inline double euler_characteristic(const FlowState& st, const AmbientAlongSurface& amb) {
  double sum = 0.0;
  const auto& grid = *st.grid();
  for (std::size_t n = 0; n < grid.size(); ++n)
    sum += (st.lambda1[n] * st.lambda2[n] + amb.K12[n]) * st.density[n] * grid.weight(n);
  return sum / (2.0 * std::numbers::pi);
}

inline double euler_characteristic(const FlowState& st, const AmbientMetric& ambient) {
  return euler_characteristic(st, ambient_along(st, ambient));
}

}  // namespace imcf
