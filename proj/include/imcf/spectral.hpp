#pragma once
// Laplace-Beltrami spectrum and candidate-curve isoperimetric estimates on a
// surface state.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "imcf/geometry.hpp"
#include "imcf/interp.hpp"

namespace imcf {

struct SpectralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

// Nodal matrix of f -> g^{ab}(f_ab - Gamma^c_ab f_c). Longitude derivatives use
// the widest stencil available since the 1/sin^2 factor amplifies their error
// near the poles.
inline SparseMatrix laplace_beltrami(const SymTensorField2& g) {
  const auto& grid = *g.grid;
  const int nt = grid.n_theta(), np = grid.n_phi();
  const MetricPartials d = metric_partials(g);
  const int wide = grid.max_width();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(grid.size() * 40);
  const auto w1p = grid.phi_d1(wide), w2p = grid.phi_d2(wide);
  const int pp = static_cast<int>(w1p.size() / 2);

  for (int i = 0; i < nt; ++i) {
    const auto t1 = grid.theta_d1(i), t2 = grid.theta_d2(i);
    for (int j = 0; j < np; ++j) {
      const std::size_t n = grid.index(i, j);
      const Sym2 gi = g[n].inverse();
      // Gamma^c_ab with a,b,c in {theta, phi}
      const double Et = d.E_t[n], Ep = d.E_p[n], Ft = d.F_t[n], Fp = d.F_p[n], Gt = d.G_t[n], Gp = d.G_p[n];
      const double c_tt_t = 0.5 * Et, c_tt_p = Ft - 0.5 * Ep;  // lowered: Gamma_{c,tt}
      const double c_tp_t = 0.5 * Ep, c_tp_p = 0.5 * Gt;
      const double c_pp_t = Fp - 0.5 * Gt, c_pp_p = 0.5 * Gp;
      auto raise = [&](double lt, double lp) {
        return std::pair{gi.tt * lt + gi.tp * lp, gi.tp * lt + gi.pp * lp};
      };
      const auto [Gtt_t, Gtt_p] = raise(c_tt_t, c_tt_p);
      const auto [Gtp_t, Gtp_p] = raise(c_tp_t, c_tp_p);
      const auto [Gpp_t, Gpp_p] = raise(c_pp_t, c_pp_p);
      const double coef_t = -(gi.tt * Gtt_t + 2.0 * gi.tp * Gtp_t + gi.pp * Gpp_t);
      const double coef_p = -(gi.tt * Gtt_p + 2.0 * gi.tp * Gtp_p + gi.pp * Gpp_p);

      const int ja = grid.antipodal_col(j);
      for (const auto& tap : t2) trip.emplace_back(n, grid.index(tap.row, tap.across ? ja : j), gi.tt * tap.weight);
      for (const auto& tap : t1) trip.emplace_back(n, grid.index(tap.row, tap.across ? ja : j), coef_t * tap.weight);
      for (int k = -pp; k <= pp; ++k) {
        const std::size_t m = grid.index(i, grid.wrap_col(j + k));
        trip.emplace_back(n, m, gi.pp * w2p[k + pp] + coef_p * w1p[k + pp]);
        const int jk = grid.wrap_col(j + k), jka = grid.antipodal_col(jk);
        for (const auto& tap : t1)
          trip.emplace_back(n, grid.index(tap.row, tap.across ? jka : jk), 2.0 * gi.tp * w1p[k + pp] * tap.weight);
      }
    }
  }
  SparseMatrix L(grid.size(), grid.size());
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

inline ScalarField apply_laplacian(const SymTensorField2& g, const ScalarField& f) {
  const SparseMatrix L = laplace_beltrami(g);
  const Eigen::Map<const Eigen::VectorXd> x(f.values.data(), f.size());
  const Eigen::VectorXd y = L * x;
  return ScalarField(g.grid, std::vector<double>(y.data(), y.data() + y.size()));
}

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
};

// First nonzero eigenvalue of -Laplace-Beltrami, by block inverse iteration
// on the mean-zero subspace followed by Rayleigh-Ritz.
inline Eigenpair first_nonzero_eigenvalue(const SymTensorField2& g, int block = 4, int max_iter = 60,
                                          double tol = 1e-12) {
  const auto& grid = *g.grid;
  const int N = static_cast<int>(grid.size());
  const SparseMatrix L = laplace_beltrami(g);
  Eigen::VectorXd w(N);
  for (int n = 0; n < N; ++n) w[n] = area_density(g, n) * grid.weight(n);

  // [ -L  1 ] [x]   [b]
  // [ w^T 0 ] [c] = [0]
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(L.nonZeros() + 2 * N);
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(L, k); it; ++it) trip.emplace_back(it.row(), it.col(), -it.value());
  for (int n = 0; n < N; ++n) {
    trip.emplace_back(n, N, 1.0);
    trip.emplace_back(N, n, w[n]);
  }
  SparseMatrix B(N + 1, N + 1);
  B.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw SpectralError("factorization of the bordered Laplacian failed");

  auto project = [&](Eigen::MatrixXd& X) {
    const double total = w.sum();
    for (int c = 0; c < X.cols(); ++c) X.col(c).array() -= w.dot(X.col(c)) / total;
  };
  // Weighted orthonormalization, so that the Ritz problem approximates the L2(dmu) one.
  auto orthonormalize = [&](Eigen::MatrixXd& X) {
    const Eigen::VectorXd sw = w.array().sqrt();
    Eigen::MatrixXd Y = sw.asDiagonal() * X;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(N, X.cols());
    X = sw.cwiseInverse().asDiagonal() * Y;
  };

  Eigen::MatrixXd X(N, block);
  for (int n = 0; n < N; ++n) {
    const int i = grid.row_of(n), j = grid.col_of(n);
    const double th = grid.theta(i), ph = grid.phi(j);
    const double basis[4] = {std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                             std::cos(th) * std::sin(th) * std::cos(ph) + 0.1 * std::cos(2.0 * th)};
    for (int c = 0; c < block; ++c) X(n, c) = basis[c % 4] + 0.01 * (c / 4) * std::cos((c + 2) * th);
  }
  project(X);
  orthonormalize(X);

  double prev = std::numeric_limits<double>::infinity();
  Eigenpair best;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd Y(N, block);
    for (int c = 0; c < block; ++c) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
      rhs.head(N) = X.col(c);
      const Eigen::VectorXd sol = lu.solve(rhs);
      Y.col(c) = sol.head(N);
    }
    project(Y);
    orthonormalize(Y);
    // Ritz values of -L on span(Y) in the weighted inner product.
    const Eigen::MatrixXd LY = -(L * Y);
    const Eigen::MatrixXd Am = Y.transpose() * w.asDiagonal() * LY;
    Eigen::EigenSolver<Eigen::MatrixXd> es(Am);
    int k_min = 0;
    for (int k = 1; k < block; ++k)
      if (es.eigenvalues()[k].real() < es.eigenvalues()[k_min].real()) k_min = k;
    const double lam = es.eigenvalues()[k_min].real();
    const Eigen::VectorXd coeff = es.eigenvectors().col(k_min).real();
    const Eigen::VectorXd v = Y * coeff;
    best.value = lam;
    best.vector.assign(v.data(), v.data() + N);
    X = Y;
    if (std::abs(lam - prev) <= tol * std::abs(lam)) break;
    prev = lam;
  }
  if (!(best.value > 0.0) || !std::isfinite(best.value)) throw SpectralError("eigenvalue iteration failed");
  return best;
}

// Cartesian form of the induced metric on the parameter sphere: for a
// tangent vector v of the unit sphere at p, g(v, v) = v^T Gc(p) v. The normal
// block is filled with the mean tangential eigenvalue, which makes Gc constant
// for round metrics and keeps it smooth in general.
inline std::array<std::vector<double>, 6> cartesian_metric(const SymTensorField2& g) {
  const auto& grid = *g.grid;
  std::array<std::vector<double>, 6> out;
  for (auto& c : out) c.resize(grid.size());
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t n = grid.index(i, j);
      const RadialFrame f = radial_frame(grid.theta(i), grid.phi(j));
      const double s = grid.sin_theta(i);
      const Vec3 et = f.t, ep = f.p / s;
      const Sym2& m = g[n];
      const Mat3 G = m.tt * et * et.transpose() + (m.tp / s) * (et * ep.transpose() + ep * et.transpose()) +
                     (m.pp / (s * s)) * ep * ep.transpose() +
                     0.5 * (m.tt + m.pp / (s * s)) * f.r * f.r.transpose();
      out[0][n] = G(0, 0);
      out[1][n] = G(0, 1);
      out[2][n] = G(0, 2);
      out[3][n] = G(1, 1);
      out[4][n] = G(1, 2);
      out[5][n] = G(2, 2);
    }
  }
  return out;
}

inline Vec3 sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline std::pair<double, double> sphere_angles(const Vec3& p) {
  const double z = std::clamp(p.z() / p.norm(), -1.0, 1.0);
  return {std::acos(z), std::atan2(p.y(), p.x())};
}

// The circle {p : p.axis = level} on the parameter sphere.
struct CandidateCurve {
  Vec3 axis;
  double level = 0.0;
  std::string label;
};

// Splitting curves used for the isoperimetric estimate: latitude circles about
// the three coordinate axes.
inline std::vector<CandidateCurve> default_candidates(int levels = 9) {
  std::vector<CandidateCurve> out;
  const Vec3 axes[3] = {Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()};
  const char* names[3] = {"z", "x", "y"};
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < levels; ++k) {
      const double c = -0.8 + 1.6 * k / (levels - 1);
      out.push_back({axes[a], c, std::string(names[a]) + "=" + std::to_string(c)});
    }
  return out;
}

struct CurveMeasure {
  double length = 0.0;
  double inner_area = 0.0;  // area of {p.axis > level}
  double outer_area = 0.0;
  double ratio(double alpha = 1.0) const {
    return length / std::pow(std::min(inner_area, outer_area), 1.0 / alpha);
  }
};

// Quadrature rules for a candidate circle, fixed per grid.
class CurveQuadrature {
 public:
  CurveQuadrature(const GridPtr& grid, const CandidateCurve& curve, int n_psi = 96, int n_z = 24)
      : grid_(grid), curve_(curve) {
    Vec3 u = curve.axis.unitOrthogonal(), v = curve.axis.cross(u);
    const double r = std::sqrt(1.0 - curve.level * curve.level);
    for (int k = 0; k < n_psi; ++k) {
      const double psi = 2.0 * std::numbers::pi * k / n_psi;
      const Vec3 p = curve.level * curve.axis + r * (std::cos(psi) * u + std::sin(psi) * v);
      const Vec3 dp = r * (-std::sin(psi) * u + std::cos(psi) * v);
      const auto [th, ph] = sphere_angles(p);
      line_.push_back({InterpStencil(*grid, th, ph), dp, 2.0 * std::numbers::pi / n_psi});
    }
    std::vector<double> x, w;
    gauss_legendre(n_z, x, w);
    for (int a = 0; a < n_z; ++a) {
      const double z = curve.level + (1.0 - curve.level) * 0.5 * (x[a] + 1.0);
      const double wz = (1.0 - curve.level) * 0.5 * w[a];
      const double rz = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int k = 0; k < n_psi; ++k) {
        const double psi = 2.0 * std::numbers::pi * (k + 0.5) / n_psi;
        const Vec3 p = z * curve.axis + rz * (std::cos(psi) * u + std::sin(psi) * v);
        const auto [th, ph] = sphere_angles(p);
        cap_.push_back({InterpStencil(*grid, th, ph), Vec3::Zero(), wz * 2.0 * std::numbers::pi / n_psi});
      }
    }
  }

  const CandidateCurve& curve() const { return curve_; }

  CurveMeasure measure(const std::array<std::vector<double>, 6>& Gc, std::span<const double> density,
                       double total_area) const {
    CurveMeasure m;
    for (const auto& s : line_) {
      Mat3 G;
      G(0, 0) = s.stencil.apply(Gc[0]);
      G(0, 1) = G(1, 0) = s.stencil.apply(Gc[1]);
      G(0, 2) = G(2, 0) = s.stencil.apply(Gc[2]);
      G(1, 1) = s.stencil.apply(Gc[3]);
      G(1, 2) = G(2, 1) = s.stencil.apply(Gc[4]);
      G(2, 2) = s.stencil.apply(Gc[5]);
      m.length += std::sqrt(std::max(0.0, s.tangent.dot(G * s.tangent))) * s.weight;
    }
    for (const auto& s : cap_) m.inner_area += s.stencil.apply(density) * s.weight;
    m.outer_area = total_area - m.inner_area;
    return m;
  }

 private:
  struct Sample {
    InterpStencil stencil;
    Vec3 tangent;
    double weight;
  };
  GridPtr grid_;
  CandidateCurve curve_;
  std::vector<Sample> line_, cap_;
};

inline std::vector<CurveQuadrature> build_curve_quadratures(const GridPtr& grid,
                                                            const std::vector<CandidateCurve>& curves) {
  std::vector<CurveQuadrature> out;
  out.reserve(curves.size());
  for (const auto& c : curves) out.emplace_back(grid, c);
  return out;
}

inline std::vector<CurveMeasure> measure_curves(const FlowState& st, const std::vector<CurveQuadrature>& qs) {
  const auto Gc = cartesian_metric(st.g);
  std::vector<CurveMeasure> out;
  out.reserve(qs.size());
  for (const auto& q : qs) out.push_back(q.measure(Gc, st.density, st.area));
  return out;
}

// Minimum of L / min(|S1|, |S2|) over the candidates; an upper bound for IN_1.
inline double in1_upper(const std::vector<CurveMeasure>& m) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : m) best = std::min(best, c.ratio(1.0));
  return best;
}

struct PoincareCheck {
  double lambda1 = 0.0;
  double in1_upper = 0.0;
  bool cheeger_ok = false;
};

inline PoincareCheck poincare_check(const FlowState& st, const std::vector<CurveQuadrature>& qs,
                                    double tol = 1e-9) {
  PoincareCheck out;
  out.lambda1 = first_nonzero_eigenvalue(st.g).value;
  out.in1_upper = in1_upper(measure_curves(st, qs));
  out.cheeger_ok = out.lambda1 >= out.in1_upper * out.in1_upper / 4.0 - tol;
  return out;
}

}  // namespace imcf
