#pragma once
// Integral quantities, identities and inequalities evaluated along a flow trace.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "imcf/geometry.hpp"
#include "imcf/spectral.hpp"
#include "imcf/spherical_harmonics.hpp"
#include "imcf/trace.hpp"

namespace imcf {

struct DiagnosticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kFourPi = 4.0 * std::numbers::pi;
inline constexpr double kSixteenPi = 16.0 * std::numbers::pi;

inline double hawking_mass(double area, double int_H2) {
  return std::sqrt(area / (kSixteenPi * kSixteenPi * kSixteenPi)) * (kSixteenPi - int_H2);
}

inline double hawking_mass(const FlowState& st) {
  std::vector<double> h2(st.H.size());
  for (std::size_t n = 0; n < h2.size(); ++n) h2[n] = st.H[n] * st.H[n];
  return hawking_mass(st.area, integrate_values(h2, st.density, *st.grid()));
}

// (16 pi)^{3/2} / |Sigma|^{1/2}
inline double mass_factor(double area) { return std::pow(kSixteenPi, 1.5) / std::sqrt(area); }

enum class Scenario { Pmt, Rpi };

inline double avg_H2_target(double t, double r0, double m, Scenario sc) {
  const double base = 4.0 / (r0 * r0) * std::exp(-t);
  if (sc == Scenario::Pmt) return base;
  return base * (1.0 - 2.0 * m / r0 * std::exp(-0.5 * t));
}

inline double mean_H(const FlowState& st) {
  return integrate_values(st.H.values, st.density, *st.grid()) / st.area;
}

// int (H - Hbar)^2 dmu
inline double h_concentration(const FlowState& st) {
  const double hb = mean_H(st);
  std::vector<double> d(st.H.size());
  for (std::size_t n = 0; n < d.size(); ++n) d[n] = (st.H[n] - hb) * (st.H[n] - hb);
  return integrate_values(d, st.density, *st.grid());
}

// (1/|Sigma|) 2^4 int (K - e^{-t}/r0^2)^2 dmu with K from the Gauss equation.
inline double roundness_deficit(const FlowState& st, const AmbientAlongSurface& amb, double r0) {
  const double lam = std::exp(-st.t) / (r0 * r0);
  std::vector<double> d(st.H.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    const double K = st.lambda1[n] * st.lambda2[n] + amb.K12[n];
    d[n] = (K - lam) * (K - lam);
  }
  return 16.0 * integrate_values(d, st.density, *st.grid()) / st.area;
}

// ---------------------------------------------------------------------------
// Uniform-sample calculus in t.

// Derivative at every sample from the five nearest samples (fourth order);
// NaN at the two endpoints.
inline std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  std::vector<double> out(n, kNaN);
  if (n < 3) return out;
  const int width = static_cast<int>(std::min<std::size_t>(5, n));
  for (std::size_t k = 1; k + 1 < n; ++k) {
    int lo = static_cast<int>(k) - width / 2;
    lo = std::clamp(lo, 0, static_cast<int>(n) - width);
    std::vector<double> x(t.begin() + lo, t.begin() + lo + width);
    const auto w = fornberg_weights(t[k], x, 1);
    double acc = 0.0;
    for (int q = 0; q < width; ++q) acc += w[1][q] * f[lo + q];
    out[k] = acc;
  }
  return out;
}

// Fourth-order composite rule on uniform samples (Simpson, with a 3/8 panel
// when the number of intervals is odd); trapezoid below four samples.
inline double integrate_uniform(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n < 4) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) s += 0.5 * h * (f[k] + f[k + 1]);
    return s;
  }
  const std::size_t intervals = n - 1;
  std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double s = 0.0;
  for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) s += h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  if (simpson_end != intervals) {
    const std::size_t k = simpson_end;
    s += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Per-state integrals.

struct DiagnosticsOptions {
  int spectral_stride = 0;  // compute lambda_1 and IN_1 on every k-th state; 0 disables
  std::vector<CandidateCurve> candidates = default_candidates();
};

inline DiagnosticsRecord state_integrals(const FlowState& st, const AmbientMetric& ambient, double r0) {
  const auto& grid = *st.grid();
  const std::size_t N = grid.size();
  const AmbientAlongSurface amb = ambient_along(st, ambient);
  const ScalarField gradH = grad_norm_sq(st.H, st.g);
  const ScalarField A2 = st.A_norm_sq();

  std::vector<double> h2(N), gh(N), shear(N), prod(N), K(N);
  double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0, amax = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const double H = st.H[n];
    h2[n] = H * H;
    gh[n] = gradH[n] / (H * H);
    shear[n] = (st.lambda1[n] - st.lambda2[n]) * (st.lambda1[n] - st.lambda2[n]);
    prod[n] = st.lambda1[n] * st.lambda2[n];
    K[n] = prod[n] + amb.K12[n];
    hmin = std::min(hmin, H);
    hmax = std::max(hmax, H);
    amax = std::max(amax, std::sqrt(std::max(0.0, A2[n])));
  }
  auto I = [&](const std::vector<double>& f) { return integrate_values(f, st.density, grid); };

  DiagnosticsRecord r;
  r.t = st.t;
  r.area = st.area;
  r.int_H2 = I(h2);
  r.avg_H2 = r.int_H2 / st.area;
  r.m_H = hawking_mass(st.area, r.int_H2);
  r.H_bar = mean_H(st);
  r.H_min = hmin;
  r.H_max = hmax;
  r.A_max = amax;
  r.int_gradH = I(gh);
  r.int_shear = I(shear);
  r.int_R = I(amb.R);
  r.int_Rc = I(amb.Rc);
  r.int_K12 = I(amb.K12);
  r.int_A2 = I(A2.values);
  r.int_prod = I(prod);
  r.chi = I(K) / (2.0 * std::numbers::pi);
  r.chi_intrinsic = integrate(intrinsic_gauss_curvature(st.g), st.g) / (2.0 * std::numbers::pi);
  r.l2_H_minus_avg = h_concentration(st);
  r.roundness_deficit = roundness_deficit(st, amb, r0);
  return r;
}

// 2|dH|^2/H^2 + (l1 - l2)^2/2 + R, integrated
inline double crucial_integrand(const DiagnosticsRecord& r) {
  return 2.0 * r.int_gradH + 0.5 * r.int_shear + r.int_R;
}

// Fill trace.diagnostics: per-state integrals, then the entries needing time
// derivatives.
inline void fill_diagnostics(FlowTrace& tr, const DiagnosticsOptions& opt = {}) {
  tr.diagnostics.clear();
  std::vector<CurveQuadrature> qs;
  if (opt.spectral_stride > 0 && !tr.states.empty())
    qs = build_curve_quadratures(tr.states.front().grid(), opt.candidates);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    auto r = state_integrals(tr.states[k], tr.ambient, tr.r0);
    if (opt.spectral_stride > 0 && k % opt.spectral_stride == 0) {
      const auto pc = poincare_check(tr.states[k], qs);
      r.lambda1_neumann = pc.lambda1;
      r.in1_upper = pc.in1_upper;
    }
    tr.diagnostics.push_back(r);
  }
  const auto t = tr.times();
  std::vector<double> ih2, mh;
  for (const auto& r : tr.diagnostics) {
    ih2.push_back(r.int_H2);
    mh.push_back(r.m_H);
  }
  const auto d_ih2 = time_derivative(t, ih2);
  const auto d_mh = time_derivative(t, mh);
  for (std::size_t k = 0; k < tr.diagnostics.size(); ++k) {
    auto& r = tr.diagnostics[k];
    r.dt_int_H2 = d_ih2[k];
    r.geroch_rate = d_mh[k];
    const double C = mass_factor(r.area);
    r.lemma22_rhs = C * (0.5 * r.m_H - r.geroch_rate);
    r.lemma22_residual = r.dt_int_H2 - r.lemma22_rhs;
    r.crucial_rhs = kFourPi * r.chi - (crucial_integrand(r) + 0.5 * r.int_H2);
    r.crucial_residual = r.dt_int_H2 - r.crucial_rhs;
    r.slack_statement = 0.5 * r.m_H * C - (r.dt_int_H2 + crucial_integrand(r));
    r.slack_proof = r.m_H * C - (r.dt_int_H2 + crucial_integrand(r));
  }
}

// ---------------------------------------------------------------------------
// Identity checks at one output index.

struct IdentityPair {
  double lhs = 0.0, rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

inline void require_interior(const FlowTrace& tr, std::size_t k) {
  if (tr.diagnostics.size() != tr.states.size()) throw DiagnosticsError("diagnostics not filled");
  if (k < 1 || k + 1 >= tr.states.size()) throw DiagnosticsError("output index is not interior");
}

inline IdentityPair dt_int_H2_identity(const FlowTrace& tr, std::size_t k) {
  require_interior(tr, k);
  const auto& r = tr.diagnostics[k];
  return {r.dt_int_H2, r.lemma22_rhs};
}

inline double crucial_identity_residual(const FlowTrace& tr, std::size_t k) {
  require_interior(tr, k);
  return std::abs(tr.diagnostics[k].crucial_residual);
}

// Integrated form of the crucial estimate: m_H(T) - m_H(0) against
// int_0^T (I / C) dt (statement factor) and int_0^T (I / C - m_H / 2) dt
// (proof factor), with I = int[2|dH|^2/H^2 + (l1-l2)^2/2 + R].
struct IntegratedCrucial {
  double mass_gain = 0.0;
  double bound_statement = 0.0;
  double bound_proof = 0.0;
  double slack_statement() const { return mass_gain - bound_statement; }
  double slack_proof() const { return mass_gain - bound_proof; }
};

inline IntegratedCrucial integrated_crucial(const FlowTrace& tr) {
  if (tr.diagnostics.size() < 2) throw DiagnosticsError("trace too short");
  std::vector<double> a, b;
  for (const auto& r : tr.diagnostics) {
    const double q = crucial_integrand(r) / mass_factor(r.area);
    a.push_back(q);
    b.push_back(q - 0.5 * r.m_H);
  }
  IntegratedCrucial out;
  out.mass_gain = tr.diagnostics.back().m_H - tr.diagnostics.front().m_H;
  out.bound_statement = integrate_uniform(a, tr.dt_out);
  out.bound_proof = integrate_uniform(b, tr.dt_out);
  return out;
}

// Closed-form limits of the integral quantities along a model flow of area
// radius r0 in Schwarzschild(m) (m = 0 for Euclidean).
struct CorollaryTargets {
  double int_H2, int_A2, int_prod, int_Rc, int_K12, int_gradH, int_shear, int_R;
};

inline CorollaryTargets corollary_targets(double t, double r0, double m) {
  const double q = 1.0 - 2.0 * m / r0 * std::exp(-0.5 * t);
  const double k = 8.0 * std::numbers::pi / r0 * m * std::exp(-0.5 * t);
  return {kSixteenPi * q, 8.0 * std::numbers::pi * q, kFourPi * q, -k, k, 0.0, 0.0, 0.0};
}

struct CorollaryRow {
  double t = 0.0;
  CorollaryTargets target{};
  CorollaryTargets value{};
  // |value - target| / max(|target|, scale), scale = 8 pi m / r0 or 1
  double max_rel_deviation = 0.0;
};

inline std::vector<CorollaryRow> corollary_limits_report(const FlowTrace& tr, double m) {
  std::vector<CorollaryRow> rows;
  for (const auto& r : tr.diagnostics) {
    CorollaryRow row;
    row.t = r.t;
    row.target = corollary_targets(r.t, tr.r0, m);
    row.value = {r.int_H2, r.int_A2, r.int_prod, r.int_Rc, r.int_K12, r.int_gradH, r.int_shear, r.int_R};
    const double tv[8] = {row.target.int_H2, row.target.int_A2, row.target.int_prod, row.target.int_Rc,
                          row.target.int_K12, row.target.int_gradH, row.target.int_shear, row.target.int_R};
    const double vv[8] = {row.value.int_H2, row.value.int_A2, row.value.int_prod, row.value.int_Rc,
                          row.value.int_K12, row.value.int_gradH, row.value.int_shear, row.value.int_R};
    for (int q = 0; q < 8; ++q) {
      const double scale = std::max(std::abs(tv[q]), 1.0);
      row.max_rel_deviation = std::max(row.max_rel_deviation, std::abs(vv[q] - tv[q]) / scale);
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Weak Ricci identity with test functions bump(t) Y_lm(x).

struct TestFunction {
  int l = 0, m = 0;  // l = 0 gives the constant spatial factor 1
  double a = 0.0, b = 1.0;

  double bump(double t) const {
    const double u = (2.0 * t - a - b) / (b - a);
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  double bump_rate(double t) const {
    const double u = (2.0 * t - a - b) / (b - a);
    if (std::abs(u) >= 1.0) return 0.0;
    const double d = 1.0 - u * u;
    return bump(t) * (-2.0 * u / (d * d)) * (2.0 / (b - a));
  }
  YlmValue spatial(double theta, double phi) const {
    if (l == 0) return {1.0, 0.0, 0.0};
    return real_ylm(l, m, theta, phi);
  }
};

struct WeakRicciResult {
  double lhs = 0.0;            // int int 2 phi Rc
  double rhs = 0.0;            // boundary terms plus the bulk integrand with -2 phi |dH|^2 / H^2
  double rhs_printed = 0.0;    // the same with +2 phi |dH|^2 / H^2
  double residual() const { return std::abs(lhs - rhs); }
  double residual_printed() const { return std::abs(lhs - rhs_printed); }
};

inline WeakRicciResult weak_ricci_identity(const FlowTrace& tr, const TestFunction& phi) {
  if (tr.states.size() < 3) throw DiagnosticsError("trace too short");
  const double t0 = tr.states.front().t, t1 = tr.states.back().t;
  if (phi.a < t0 - 1e-12 || phi.b > t1 + 1e-12 || !(phi.b > phi.a))
    throw DiagnosticsError("test function support leaves the flow interval");

  const auto& grid = *tr.states.front().grid();
  const std::size_t N = grid.size();
  std::vector<double> Y(N), Yt(N), Yp(N);
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j) {
      const auto v = phi.spatial(grid.theta(i), grid.phi(j));
      const std::size_t n = grid.index(i, j);
      Y[n] = v.value;
      Yt[n] = v.d_theta;
      Yp[n] = v.d_phi;
    }

  std::vector<double> lhs_t, bulk_t, bulk_printed_t;
  double boundary = 0.0;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const FlowState& st = tr.states[k];
    const double bt = phi.bump(st.t), dbt = phi.bump_rate(st.t);
    const AmbientAlongSurface amb = ambient_along(st, tr.ambient);
    const ScalarField gradH = grad_norm_sq(st.H, st.g);
    const auto Ht = d_theta(grid, st.H.values), Hp = d_phi(grid, st.H.values);
    const ScalarField A2 = st.A_norm_sq();
    std::vector<double> lhs(N), bulk(N), bulk_printed(N);
    for (std::size_t n = 0; n < N; ++n) {
      const double H = st.H[n];
      const Sym2 gi = st.g[n].inverse();
      const double dphi_dH = bt * (gi.tt * Yt[n] * Ht[n] + gi.tp * (Yt[n] * Hp[n] + Yp[n] * Ht[n]) +
                                   gi.pp * Yp[n] * Hp[n]);
      const double f = bt * Y[n];
      const double common = -2.0 * dphi_dH / H + f * (H * H - 2.0 * A2[n]) + dbt * Y[n] * H * H;
      lhs[n] = 2.0 * f * amb.Rc[n];
      bulk[n] = common - 2.0 * f * gradH[n] / (H * H);
      bulk_printed[n] = common + 2.0 * f * gradH[n] / (H * H);
    }
    lhs_t.push_back(integrate_values(lhs, st.density, grid));
    bulk_t.push_back(integrate_values(bulk, st.density, grid));
    bulk_printed_t.push_back(integrate_values(bulk_printed, st.density, grid));
    if (std::abs(st.t - phi.a) < 1e-12 || std::abs(st.t - phi.b) < 1e-12) {
      std::vector<double> fh2(N);
      for (std::size_t n = 0; n < N; ++n) fh2[n] = bt * Y[n] * st.H[n] * st.H[n];
      const double v = integrate_values(fh2, st.density, grid);
      boundary += std::abs(st.t - phi.a) < 1e-12 ? v : -v;
    }
  }
  // The integrands vanish to all orders outside (a, b), so the trapezoid rule
  // over the whole trace converges faster than any power of dt_out.
  auto trap = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k)
      s += 0.5 * (tr.states[k + 1].t - tr.states[k].t) * (f[k] + f[k + 1]);
    return s;
  };
  WeakRicciResult out;
  out.lhs = trap(lhs_t);
  out.rhs = boundary + trap(bulk_t);
  out.rhs_printed = boundary + trap(bulk_printed_t);
  return out;
}

// ---------------------------------------------------------------------------
// Evolution bounds.

// Metric sandwich: e^{E1} g(x,0) <= g(x,t) <= e^{E2} g(x,0) with
// E_i = int_0^t 2 lambda_i / H, accumulated by the trapezoid rule.
struct SandwichReport {
  double worst_lower = 0.0;  // max over nodes/times of (e^{E1} - mu_min) / scale, <= tol when it holds
  double worst_upper = 0.0;  // max of (mu_max - e^{E2}) / scale
  bool holds(double tol) const { return worst_lower <= tol && worst_upper <= tol; }
};

inline SandwichReport sandwich_check(const FlowTrace& tr) {
  SandwichReport rep;
  if (tr.states.empty()) return rep;
  const auto& g0 = tr.states.front().g;
  const std::size_t N = g0.size();
  std::vector<double> E1(N, 0.0), E2(N, 0.0);
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const FlowState& a = tr.states[k - 1];
    const FlowState& b = tr.states[k];
    const double dt = b.t - a.t;
    for (std::size_t n = 0; n < N; ++n) {
      E1[n] += 0.5 * dt * (2.0 * a.lambda1[n] / a.H[n] + 2.0 * b.lambda1[n] / b.H[n]);
      E2[n] += 0.5 * dt * (2.0 * a.lambda2[n] / a.H[n] + 2.0 * b.lambda2[n] / b.H[n]);
      // eigenvalues of g(t) relative to g(0)
      const auto [mu_lo, mu_hi] = relative_eigenvalues(b.g[n], g0[n]);
      const double scale = std::max(1.0, mu_hi);
      rep.worst_lower = std::max(rep.worst_lower, (std::exp(E1[n]) - mu_lo) / scale);
      rep.worst_upper = std::max(rep.worst_upper, (mu_hi - std::exp(E2[n])) / scale);
    }
  }
  return rep;
}

// Length bounds L^0 e^{-2 A0 t / H0} <= L^t <= L^0 e^{2 A0 t / H0} for marked curves.
struct LengthReport {
  double A0 = 0.0, H0 = 0.0;
  double worst = 0.0;  // max relative violation over curves and times; <= tol when it holds
  std::vector<std::vector<double>> lengths;  // [time][curve]
};

inline std::vector<CandidateCurve> marked_curves() {
  return {{Vec3::UnitZ(), 0.0, "equator"}, {Vec3(1.0, 0.0, 1.0).normalized(), 0.3, "offset"}};
}

inline LengthReport length_bounds(const FlowTrace& tr, const std::vector<CandidateCurve>& curves = marked_curves()) {
  LengthReport rep;
  if (tr.states.empty()) return rep;
  rep.A0 = tr.max_A();
  rep.H0 = tr.min_H();
  const auto qs = build_curve_quadratures(tr.states.front().grid(), curves);
  for (const auto& st : tr.states) {
    std::vector<double> L;
    for (const auto& m : measure_curves(st, qs)) L.push_back(m.length);
    rep.lengths.push_back(L);
  }
  const double k = 2.0 * rep.A0 / rep.H0;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const double t = tr.states[i].t;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const double L0 = rep.lengths[0][c], L = rep.lengths[i][c];
      const double lo = L0 * std::exp(-k * t), hi = L0 * std::exp(k * t);
      rep.worst = std::max({rep.worst, (lo - L) / L, (L - hi) / L});
    }
  }
  return rep;
}

// Isoperimetric band for alpha = 1: for each candidate curve,
// r0 e^{-(2A0/H0 + 1) t} <= r_t <= r0 e^{(2A0/H0 - 1) t} with r = L / min|S|,
// and the same band for the candidate minimum.
struct IsoperimetricReport {
  double worst = 0.0;
  std::vector<double> in1_upper;  // per time
};

inline IsoperimetricReport isoperimetric_band(const FlowTrace& tr,
                                              const std::vector<CandidateCurve>& curves = default_candidates()) {
  IsoperimetricReport rep;
  if (tr.states.empty()) return rep;
  const double k = 2.0 * tr.max_A() / tr.min_H();
  const auto qs = build_curve_quadratures(tr.states.front().grid(), curves);
  std::vector<std::vector<double>> ratio;
  for (const auto& st : tr.states) {
    std::vector<double> r;
    for (const auto& m : measure_curves(st, qs)) r.push_back(m.ratio(1.0));
    rep.in1_upper.push_back(*std::min_element(r.begin(), r.end()));
    ratio.push_back(r);
  }
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const double t = tr.states[i].t;
    const double lo_f = std::exp(-(k + 1.0) * t), hi_f = std::exp((k - 1.0) * t);
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const double r0 = ratio[0][c], r = ratio[i][c];
      rep.worst = std::max({rep.worst, (r0 * lo_f - r) / r, (r - r0 * hi_f) / r});
    }
    const double m0 = rep.in1_upper[0], m = rep.in1_upper[i];
    rep.worst = std::max({rep.worst, (m0 * lo_f - m) / m, (m - m0 * hi_f) / m});
  }
  return rep;
}

// Largest drop of m_H between consecutive output times.
inline double geroch_worst_drop(const FlowTrace& tr) {
  double worst = 0.0;
  for (std::size_t k = 1; k < tr.diagnostics.size(); ++k)
    worst = std::max(worst, tr.diagnostics[k - 1].m_H - tr.diagnostics[k].m_H);
  return worst;
}

// Worst relative deviation from the area law |Sigma_t| = |Sigma_0| e^t.
inline double area_law_deviation(const FlowTrace& tr) {
  double worst = 0.0;
  if (tr.states.empty()) return worst;
  const double a0 = tr.states.front().area;
  for (const auto& st : tr.states) {
    const double target = a0 * std::exp(st.t);
    worst = std::max(worst, std::abs(st.area - target) / target);
  }
  return worst;
}

}  // namespace imcf
