#pragma once
// Model asymptotically flat 3-metrics in a Cartesian chart y = s n, with
// metric jets and curvature accessors.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "imcf/spherical_harmonics.hpp"

namespace imcf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct ChartError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// G and its first partials: dG[k](i,j) = d_k G_ij.
struct MetricJet1 {
  Mat3 G;
  std::array<Mat3, 3> dG;
};

// ddG[k][l](i,j) = d_k d_l G_ij.
struct MetricJet2 : MetricJet1 {
  std::array<std::array<Mat3, 3>, 3> ddG;
};

// Christoffel symbols Gamma^k_ij = gamma[k](i,j).
inline std::array<Mat3, 3> christoffel(const MetricJet1& jet) {
  const Mat3 Ginv = jet.G.inverse();
  std::array<Mat3, 3> lower;  // Gamma_{l,ij}
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        lower[l](i, j) = 0.5 * (jet.dG[i](l, j) + jet.dG[j](l, i) - jet.dG[l](i, j));
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k) {
    gamma[k].setZero();
    for (int l = 0; l < 3; ++l) gamma[k] += Ginv(k, l) * lower[l];
  }
  return gamma;
}

// Fully covariant Riemann tensor R_iklm, with R_iklm u^i v^k u^l v^m the
// sectional numerator.
struct Riemann {
  double r[3][3][3][3];
  Mat3 G, Ginv;

  double sectional(const Vec3& u, const Vec3& v) const {
    double num = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m) num += r[i][k][l][m] * u[i] * v[k] * u[l] * v[m];
    const double uu = u.dot(G * u), vv = v.dot(G * v), uv = u.dot(G * v);
    const double den = uu * vv - uv * uv;
    if (!(den > 1e-300)) throw std::invalid_argument("degenerate plane");
    return num / den;
  }
  Mat3 ricci() const {
    Mat3 rc = Mat3::Zero();
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m)
        for (int i = 0; i < 3; ++i)
          for (int l = 0; l < 3; ++l) rc(k, m) += Ginv(i, l) * r[i][k][l][m];
    return rc;
  }
  double scalar() const { return (Ginv.cwiseProduct(ricci())).sum(); }
};

inline Riemann riemann_from_jet(const MetricJet2& jet) {
  Riemann out;
  out.G = jet.G;
  out.Ginv = jet.G.inverse();
  const auto gam = christoffel(jet);
  auto dd = [&](int a, int b, int i, int j) { return jet.ddG[a][b](i, j); };
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          double v = 0.5 * (dd(k, l, i, m) + dd(i, m, k, l) - dd(k, m, i, l) - dd(i, l, k, m));
          for (int n = 0; n < 3; ++n)
            for (int p = 0; p < 3; ++p)
              v += jet.G(n, p) * (gam[n](k, l) * gam[p](i, m) - gam[n](k, m) * gam[p](i, l));
          out.r[i][k][l][m] = v;
        }
  return out;
}

enum class AmbientKind { Euclidean, Schwarzschild, RotSym, Perturbed };

struct AmbientPerturbation {
  double amplitude = 0.0;
  int l = 2;
  int m = 0;
  double cutoff_inner = 10.0;  // full strength for s <= inner
  double cutoff_outer = 20.0;  // vanishes for s >= outer
};

// Curvature quantities at a point of a surface with unit normal nu.
struct NormalCurvatures {
  double scalar = 0.0;        // R
  double ricci_normal = 0.0;  // Rc(nu, nu)
  double tangent_sectional = 0.0;  // K_12
};

struct AFReport {
  double c_metric = 0.0;
  double c_deriv = 0.0;
  double c_deriv2 = 0.0;
  std::vector<double> shells;
  std::vector<double> metric_by_shell, deriv_by_shell, deriv2_by_shell;
};

// Smooth step: 1 for s <= a, 0 for s >= b.
inline double smooth_cutoff(double s, double a, double b) {
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double u = psi(b - s), v = psi(s - a);
  return u / (u + v);
}

class AmbientMetric {
 public:
  static AmbientMetric euclidean() { return AmbientMetric(AmbientKind::Euclidean, 0.0, 0.0); }
  static AmbientMetric schwarzschild(double mass) {
    if (!(mass > 0.0)) throw std::invalid_argument("schwarzschild mass must be positive");
    return AmbientMetric(AmbientKind::Schwarzschild, mass, 0.0);
  }
  // Mass function mu(s) = m s^3 / (s^3 + a^3): smooth at the origin,
  // nonnegative scalar curvature, Schwarzschild-like for s >> a.
  static AmbientMetric rotsym(double mass, double scale) {
    if (!(mass >= 0.0) || !(scale > 0.0)) throw std::invalid_argument("invalid warp profile");
    return AmbientMetric(AmbientKind::RotSym, mass, scale);
  }
  static AmbientMetric perturbed(const AmbientMetric& base, AmbientPerturbation p) {
    if (base.kind_ == AmbientKind::Perturbed)
      throw std::invalid_argument("cannot perturb a perturbed ambient");
    if (!(p.cutoff_outer > p.cutoff_inner)) throw std::invalid_argument("invalid perturbation cutoff");
    if (p.l < 0 || std::abs(p.m) > p.l) throw std::invalid_argument("invalid perturbation mode");
    AmbientMetric out = base;
    out.base_kind_ = base.kind_;
    out.kind_ = AmbientKind::Perturbed;
    out.pert_ = p;
    return out;
  }

  AmbientKind kind() const { return kind_; }
  AmbientKind base_kind() const { return kind_ == AmbientKind::Perturbed ? base_kind_ : kind_; }
  double mass() const { return mass_; }
  double profile_scale() const { return scale_; }
  const AmbientPerturbation& perturbation() const { return pert_; }
  bool rotationally_symmetric() const { return kind_ != AmbientKind::Perturbed; }

  std::string name() const {
    switch (kind_) {
      case AmbientKind::Euclidean: return "euclidean";
      case AmbientKind::Schwarzschild: return "schwarzschild";
      case AmbientKind::RotSym: return "rotsym";
      case AmbientKind::Perturbed: return "perturbed";
    }
    return "unknown";
  }

  double chart_inner_radius() const {
    if (base_kind() == AmbientKind::Schwarzschild) return 2.0 * mass_;
    if (base_kind() == AmbientKind::RotSym) {
      // largest root of s - 2 mu(s) = 0, if any
      double lo = 0.0;
      const double top = 2.0 * mass_ + 10.0 * scale_;
      const int n = 4000;
      for (int k = n; k >= 1; --k) {
        const double s = top * k / n;
        if (s - 2.0 * mu(s) <= 0.0) {
          lo = s;
          break;
        }
      }
      return std::max(lo, 1e-6);
    }
    return 0.0;
  }

  // Mass function and its first two derivatives.
  double mu(double s) const { return mu_jet(s)[0]; }
  std::array<double, 3> mu_jet(double s) const {
    switch (base_kind()) {
      case AmbientKind::Schwarzschild: return {mass_, 0.0, 0.0};
      case AmbientKind::RotSym: {
        const double a3 = scale_ * scale_ * scale_, s3 = s * s * s, d = s3 + a3;
        return {mass_ * s3 / d, 3.0 * mass_ * s * s * a3 / (d * d),
                6.0 * mass_ * s * a3 * (a3 - 2.0 * s3) / (d * d * d)};
      }
      default: return {0.0, 0.0, 0.0};
    }
  }
  // phi(s) with metric phi^2 ds^2 + s^2 sigma for the rotationally symmetric part.
  double warp(double s) const { return 1.0 / std::sqrt(1.0 - 2.0 * mu(s) / s); }

  Mat3 metric(const Vec3& y) const {
    const double s = check_chart(y);
    if (kind_ != AmbientKind::Perturbed) return Mat3::Identity() + q_jet(s)[0] * y * y.transpose();
    const Vec3 n = y / s;
    const double ph2 = warp(s) * warp(s);
    const double w = 1.0 + angular_factor(y, s);
    const Mat3 nn = n * n.transpose();
    return ph2 * nn + w * (Mat3::Identity() - nn);
  }

  MetricJet1 jet1(const Vec3& y) const {
    if (kind_ != AmbientKind::Perturbed) return rotsym_jet2(y, false);
    MetricJet1 out;
    out.G = metric(y);
    const double h = 1e-4 * y.norm();
    for (int k = 0; k < 3; ++k) out.dG[k] = fd_first(y, k, h, [&](const Vec3& p) { return metric(p); });
    return out;
  }

  MetricJet2 jet2(const Vec3& y) const {
    if (kind_ != AmbientKind::Perturbed) return rotsym_jet2(y, true);
    MetricJet2 out;
    static_cast<MetricJet1&>(out) = jet1(y);
    const double h = 1e-3 * y.norm();
    for (int k = 0; k < 3; ++k) {
      std::array<Mat3, 3> d;
      for (int l = 0; l < 3; ++l) d[l] = Mat3::Zero();
      const double c[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
      const double off[4] = {-2.0, -1.0, 1.0, 2.0};
      for (int q = 0; q < 4; ++q) {
        Vec3 p = y;
        p[k] += off[q] * h;
        const auto j = jet1(p);
        for (int l = 0; l < 3; ++l) d[l] += c[q] / h * j.dG[l];
      }
      for (int l = 0; l < 3; ++l) out.ddG[k][l] = d[l];
    }
    for (int k = 0; k < 3; ++k)
      for (int l = k + 1; l < 3; ++l) {
        const Mat3 avg = 0.5 * (out.ddG[k][l] + out.ddG[l][k]);
        out.ddG[k][l] = avg;
        out.ddG[l][k] = avg;
      }
    return out;
  }

  Riemann riemann(const Vec3& y) const { return riemann_from_jet(jet2(y)); }

  double scalar_curvature(const Vec3& y) const {
    const double s = check_chart(y);
    if (kind_ != AmbientKind::Perturbed) return 4.0 * mu_jet(s)[1] / (s * s);
    return riemann(y).scalar();
  }

  // Rc(v, v) for v normalized in G. If unit_defect is given it receives
  // | |v|_G - 1 | of the input.
  double ricci_normal(const Vec3& y, const Vec3& v, double* unit_defect = nullptr) const {
    const double s = check_chart(y);
    const Mat3 G = metric(y);
    const double len = std::sqrt(v.dot(G * v));
    if (!(len > 0.0)) throw std::invalid_argument("zero normal direction");
    if (unit_defect) *unit_defect = std::abs(len - 1.0);
    const Vec3 u = v / len;
    if (kind_ != AmbientKind::Perturbed) {
      const auto [rr, rt, kt] = rotsym_frame_curvatures(s);
      (void)kt;
      const double a = warp(s) * u.dot(y / s);
      return rr * a * a + rt * (1.0 - a * a);
    }
    const Mat3 rc = riemann(y).ricci();
    return u.dot(rc * u);
  }

  double sectional(const Vec3& y, const Vec3& u, const Vec3& v) const {
    const double s = check_chart(y);
    if (kind_ != AmbientKind::Perturbed) {
      const Mat3 G = metric(y);
      const Vec3 cov = u.cross(v);  // annihilates the plane
      const double nn = cov.dot(G.inverse() * cov);
      if (!(nn > 1e-300)) throw std::invalid_argument("degenerate plane");
      // radial component of the G-unit normal
      const Vec3 nu = G.inverse() * cov / std::sqrt(nn);
      const double a = warp(s) * nu.dot(y / s);
      const double k_tt = 2.0 * mu(s) / (s * s * s);
      const double k_rt = mu_jet(s)[1] / (s * s) - mu(s) / (s * s * s);
      return k_tt * a * a + k_rt * (1.0 - a * a);
    }
    return riemann(y).sectional(u, v);
  }

  // R, Rc(nu,nu) and K_12 for the plane G-orthogonal to the covector n_cov.
  NormalCurvatures normal_curvatures(const Vec3& y, const Vec3& n_cov) const {
    const double s = check_chart(y);
    NormalCurvatures out;
    if (kind_ != AmbientKind::Perturbed) {
      const Mat3 Ginv = metric(y).inverse();
      const Vec3 nu = Ginv * n_cov / std::sqrt(n_cov.dot(Ginv * n_cov));
      const double a = warp(s) * nu.dot(y / s);
      const auto [rr, rt, tt] = rotsym_frame_curvatures(s);
      const double k_tt = 2.0 * mu(s) / (s * s * s);
      const double k_rt = mu_jet(s)[1] / (s * s) - mu(s) / (s * s * s);
      out.scalar = rr + 2.0 * tt;
      out.ricci_normal = rr * a * a + rt * (1.0 - a * a);
      out.tangent_sectional = k_tt * a * a + k_rt * (1.0 - a * a);
      return out;
    }
    const Riemann rm = riemann(y);
    const Mat3 rc = rm.ricci();
    const Vec3 nu = rm.Ginv * n_cov / std::sqrt(n_cov.dot(rm.Ginv * n_cov));
    out.scalar = (rm.Ginv.cwiseProduct(rc)).sum();
    out.ricci_normal = nu.dot(rc * nu);
    // two tangent vectors spanning the plane: any basis of ker(n_cov)
    Vec3 e = std::abs(n_cov[0]) < 0.9 * n_cov.norm() ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = n_cov.cross(e);
    const Vec3 t2 = n_cov.cross(t1);
    out.tangent_sectional = rm.sectional(t1, t2);
    return out;
  }

  // Decay constants of Def-style asymptotic flatness sampled on shells.
  AFReport af_constants(const std::vector<double>& shells, int samples = 64) const {
    AFReport rep;
    rep.shells = shells;
    for (double s : shells) {
      if (!(s > chart_inner_radius())) throw ChartError("shell inside chart inner radius");
      double cm = 0.0, cd = 0.0, cdd = 0.0;
      for (int k = 0; k < samples; ++k) {
        // Fibonacci points on the shell
        const double z = 1.0 - (2.0 * k + 1.0) / samples;
        const double r = std::sqrt(1.0 - z * z);
        const double ang = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
        const Vec3 y = s * Vec3(r * std::cos(ang), r * std::sin(ang), z);
        const auto jet = jet2(y);
        cm = std::max(cm, (jet.G - Mat3::Identity()).cwiseAbs().maxCoeff() * s);
        double d1 = 0.0, d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
          d1 = std::max(d1, jet.dG[a].cwiseAbs().maxCoeff());
          for (int b = 0; b < 3; ++b) d2 = std::max(d2, jet.ddG[a][b].cwiseAbs().maxCoeff());
        }
        cd = std::max(cd, d1 * s * s);
        // third derivatives by central differences of the second
        const double h = 1e-3 * s;
        double d3 = 0.0;
        for (int c = 0; c < 3; ++c) {
          Vec3 p = y, q = y;
          p[c] += h;
          q[c] -= h;
          const auto jp = jet2(p), jq = jet2(q);
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              d3 = std::max(d3, ((jp.ddG[a][b] - jq.ddG[a][b]) / (2.0 * h)).cwiseAbs().maxCoeff());
        }
        cdd = std::max(cdd, std::max(d2, d3));
      }
      rep.metric_by_shell.push_back(cm);
      rep.deriv_by_shell.push_back(cd);
      rep.deriv2_by_shell.push_back(cdd);
      rep.c_metric = std::max(rep.c_metric, cm);
      rep.c_deriv = std::max(rep.c_deriv, cd);
      rep.c_deriv2 = std::max(rep.c_deriv2, cdd);
    }
    return rep;
  }

  double check_chart(const Vec3& y) const {
    const double s = y.norm();
    if (!std::isfinite(s) || s <= chart_inner_radius())
      throw ChartError("point at s=" + std::to_string(s) + " outside chart (inner radius " +
                       std::to_string(chart_inner_radius()) + ")");
    return s;
  }

 private:
  AmbientMetric(AmbientKind k, double mass, double scale) : kind_(k), mass_(mass), scale_(scale) {}

  // Orthonormal-frame Ricci eigenvalues (radial, tangential) and tangential Ricci.
  std::array<double, 3> rotsym_frame_curvatures(double s) const {
    const auto mj = mu_jet(s);
    const double rr = 2.0 * mj[1] / (s * s) - 2.0 * mj[0] / (s * s * s);
    const double rt = mj[1] / (s * s) + mj[0] / (s * s * s);
    return {rr, rt, rt};
  }

  // q(s) = (phi^2 - 1)/s^2 and its first two derivatives.
  std::array<double, 3> q_jet(double s) const {
    const auto mj = mu_jet(s);
    const double D = s - 2.0 * mj[0], D1 = 1.0 - 2.0 * mj[1], D2 = -2.0 * mj[2];
    const double N = 2.0 * mj[0], N1 = 2.0 * mj[1], N2 = 2.0 * mj[2];
    const double Q = s * s * D, Q1 = 2.0 * s * D + s * s * D1, Q2 = 2.0 * D + 4.0 * s * D1 + s * s * D2;
    const double q = N / Q;
    const double q1 = (N1 * Q - N * Q1) / (Q * Q);
    const double q2 = (N2 * Q - N * Q2) / (Q * Q) - 2.0 * Q1 * (N1 * Q - N * Q1) / (Q * Q * Q);
    return {q, q1, q2};
  }

  MetricJet2 rotsym_jet2(const Vec3& y, bool second) const {
    const double s = check_chart(y);
    const auto [q, q1, q2] = q_jet(s);
    MetricJet2 out;
    out.G = Mat3::Identity() + q * y * y.transpose();
    const double p = q1 / s;
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          out.dG[k](i, j) = p * y[k] * y[i] * y[j] + q * ((i == k) * y[j] + (j == k) * y[i]);
    if (!second) return out;
    const double p1 = q2 / s - q1 / (s * s);
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            out.ddG[l][k](i, j) =
                p1 / s * y[l] * y[k] * y[i] * y[j] +
                p * (d(k, l) * y[i] * y[j] + d(i, l) * y[k] * y[j] + d(j, l) * y[k] * y[i]) +
                p * y[l] * (d(i, k) * y[j] + d(j, k) * y[i]) +
                q * (d(i, k) * d(j, l) + d(j, k) * d(i, l));
    return out;
  }

  double angular_factor(const Vec3& y, double s) const {
    const double c = smooth_cutoff(s, pert_.cutoff_inner, pert_.cutoff_outer);
    if (c == 0.0) return 0.0;
    return pert_.amplitude * c * real_ylm_dir(pert_.l, pert_.m, y[0], y[1], y[2]);
  }

  template <class F>
  static Mat3 fd_first(const Vec3& y, int k, double h, F&& f) {
    Vec3 a = y, b = y, c = y, d = y;
    a[k] -= 2.0 * h;
    b[k] -= h;
    c[k] += h;
    d[k] += 2.0 * h;
    return (f(a) - 8.0 * f(b) + 8.0 * f(c) - f(d)) / (12.0 * h);
  }

  AmbientKind kind_;
  AmbientKind base_kind_ = AmbientKind::Euclidean;
  double mass_ = 0.0;
  double scale_ = 0.0;
  AmbientPerturbation pert_;
};

}  // namespace imcf
