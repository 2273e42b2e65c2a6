#pragma once
// Gauss-Legendre x uniform-longitude grid on the unit sphere, nodal fields and
// finite-difference stencils that continue across the poles.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace imcf {

struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Fornberg's recursion: weights[k][j] is the weight of node j in the
// k-th derivative at z, for k = 0..max_order.
inline std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x,
                                                         int max_order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], nodes descending.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Behaviour of a nodal quantity when a meridian stencil crosses a pole.
// Scalars are even; tensor components with an odd number of theta indices
// (and theta-derivatives of scalars) are odd.
enum class Parity { Even = 1, Odd = -1 };

struct ThetaTap {
  int row;
  bool across;  // value taken from the antipodal column
  double weight;
};

class SphericalGrid {
 public:
  SphericalGrid(int n_theta, int n_phi, int fd_half_width = 2)
      : n_theta_(n_theta), n_phi_(n_phi), half_width_(fd_half_width) {
    if (n_theta < 8) throw GridError("n_theta must be at least 8, got " + std::to_string(n_theta));
    if (n_phi < 16) throw GridError("n_phi must be at least 16, got " + std::to_string(n_phi));
    if (n_phi % 2 != 0) throw GridError("n_phi must be even for pole continuation");
    if (fd_half_width < 1 || fd_half_width > 4 || 2 * fd_half_width + 1 > n_theta)
      throw GridError("finite-difference half width out of range");

    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    theta_.resize(n_theta);
    cos_theta_ = x;
    sin_theta_.resize(n_theta);
    row_weight_ = w;
    for (int i = 0; i < n_theta; ++i) {
      theta_[i] = std::acos(x[i]);
      sin_theta_[i] = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
    }
    dphi_ = 2.0 * std::numbers::pi / n_phi;
    phi_.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) phi_[j] = j * dphi_;

    weights_.resize(size());
    for (int i = 0; i < n_theta; ++i)
      for (int j = 0; j < n_phi; ++j) weights_[index(i, j)] = w[i] * dphi_;

    build_theta_stencils();
    build_phi_stencils();
  }

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  int half_width() const { return half_width_; }
  int max_width() const { return max_width_; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_phi_ + j; }
  int row_of(std::size_t n) const { return static_cast<int>(n / n_phi_); }
  int col_of(std::size_t n) const { return static_cast<int>(n % n_phi_); }
  int antipodal_col(int j) const { return (j + n_phi_ / 2) % n_phi_; }
  int wrap_col(int j) const { return ((j % n_phi_) + n_phi_) % n_phi_; }

  double theta(int i) const { return theta_[i]; }
  double cos_theta(int i) const { return cos_theta_[i]; }
  double sin_theta(int i) const { return sin_theta_[i]; }
  double phi(int j) const { return phi_[j]; }
  double dphi() const { return dphi_; }
  double row_weight(int i) const { return row_weight_[i]; }
  // Quadrature weight of node n for the round measure d(sigma).
  double weight(std::size_t n) const { return weights_[n]; }
  std::span<const double> weights() const { return weights_; }

  // Position of extended meridian index e on the great circle through a column
  // and its antipode; e in [-n_theta, 2 n_theta).
  double extended_theta(int e) const {
    if (e < 0) return -theta_[-e - 1];
    if (e >= n_theta_) return 2.0 * std::numbers::pi - theta_[2 * n_theta_ - 1 - e];
    return theta_[e];
  }
  ThetaTap extended_tap(int e, double weight) const {
    if (e < 0) return {-e - 1, true, weight};
    if (e >= n_theta_) return {2 * n_theta_ - 1 - e, true, weight};
    return {e, false, weight};
  }

  // Stencils of half width p (0 selects the grid default); p up to 4 where the
  // meridian circle is long enough.
  int resolve_width(int p) const {
    const int q = p == 0 ? half_width_ : p;
    if (q < 1 || q > max_width_) throw GridError("stencil half width not available on this grid");
    return q;
  }
  std::span<const ThetaTap> theta_d1(int i, int p = 0) const { return theta_d1_[resolve_width(p)][i]; }
  std::span<const ThetaTap> theta_d2(int i, int p = 0) const { return theta_d2_[resolve_width(p)][i]; }
  // Periodic longitude weights for offsets -p..p.
  std::span<const double> phi_d1(int p = 0) const { return phi_d1_[resolve_width(p)]; }
  std::span<const double> phi_d2(int p = 0) const { return phi_d2_[resolve_width(p)]; }

  // Smallest meridian spacing, used as the grid scale h.
  double spacing() const {
    double h = theta_[0] * 2.0;
    for (int i = 1; i < n_theta_; ++i) h = std::min(h, theta_[i] - theta_[i - 1]);
    return h;
  }

 private:
  void build_theta_stencils() {
    max_width_ = std::min(4, (n_theta_ - 1) / 2);
    for (int p = 1; p <= max_width_; ++p) {
      theta_d1_[p].resize(n_theta_);
      theta_d2_[p].resize(n_theta_);
      std::vector<double> pos(2 * p + 1);
      for (int i = 0; i < n_theta_; ++i) {
        for (int k = 0; k < 2 * p + 1; ++k) pos[k] = extended_theta(i - p + k);
        const auto c = fornberg_weights(theta_[i], pos, 2);
        for (int k = 0; k < 2 * p + 1; ++k) {
          theta_d1_[p][i].push_back(extended_tap(i - p + k, c[1][k]));
          theta_d2_[p][i].push_back(extended_tap(i - p + k, c[2][k]));
        }
      }
    }
  }
  void build_phi_stencils() {
    for (int p = 1; p <= max_width_; ++p) {
      std::vector<double> pos(2 * p + 1);
      for (int k = 0; k < 2 * p + 1; ++k) pos[k] = (k - p) * dphi_;
      const auto c = fornberg_weights(0.0, pos, 2);
      phi_d1_[p] = c[1];
      phi_d2_[p] = c[2];
    }
  }

  int n_theta_, n_phi_, half_width_, max_width_ = 0;
  std::vector<double> theta_, cos_theta_, sin_theta_, row_weight_, phi_, weights_;
  double dphi_ = 0.0;
  std::array<std::vector<std::vector<ThetaTap>>, 5> theta_d1_, theta_d2_;
  std::array<std::vector<double>, 5> phi_d1_, phi_d2_;
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

inline GridPtr build_grid(int n_theta, int n_phi, int fd_half_width = 2) {
  return std::make_shared<const SphericalGrid>(n_theta, n_phi, fd_half_width);
}

// ---------------------------------------------------------------------------
// Nodal derivatives. Values are indexed by SphericalGrid::index.

namespace detail {
template <class Taps>
std::vector<double> apply_theta(const SphericalGrid& grid, std::span<const double> f, Parity parity,
                                Taps taps_of) {
  const int nt = grid.n_theta(), np = grid.n_phi();
  const double sign = static_cast<double>(parity);
  std::vector<double> out(grid.size(), 0.0);
  for (int i = 0; i < nt; ++i) {
    const auto taps = taps_of(i);
    for (int j = 0; j < np; ++j) {
      const int ja = grid.antipodal_col(j);
      double acc = 0.0;
      for (const auto& t : taps) {
        const double v = t.across ? sign * f[grid.index(t.row, ja)] : f[grid.index(t.row, j)];
        acc += t.weight * v;
      }
      out[grid.index(i, j)] = acc;
    }
  }
  return out;
}

inline std::vector<double> apply_phi(const SphericalGrid& grid, std::span<const double> f,
                                     std::span<const double> w) {
  const int nt = grid.n_theta(), np = grid.n_phi();
  const int p = static_cast<int>(w.size() / 2);
  std::vector<double> out(grid.size(), 0.0);
  for (int i = 0; i < nt; ++i) {
    const double* row = f.data() + grid.index(i, 0);
    for (int j = 0; j < np; ++j) {
      double acc = 0.0;
      for (int k = -p; k <= p; ++k) acc += w[k + p] * row[grid.wrap_col(j + k)];
      out[grid.index(i, j)] = acc;
    }
  }
  return out;
}
}  // namespace detail

inline std::vector<double> d_theta(const SphericalGrid& grid, std::span<const double> f,
                                   Parity parity = Parity::Even, int p = 0) {
  return detail::apply_theta(grid, f, parity, [&](int i) { return grid.theta_d1(i, p); });
}
inline std::vector<double> d_theta2(const SphericalGrid& grid, std::span<const double> f,
                                    Parity parity = Parity::Even, int p = 0) {
  return detail::apply_theta(grid, f, parity, [&](int i) { return grid.theta_d2(i, p); });
}
inline std::vector<double> d_phi(const SphericalGrid& grid, std::span<const double> f, int p = 0) {
  return detail::apply_phi(grid, f, grid.phi_d1(p));
}
inline std::vector<double> d_phi2(const SphericalGrid& grid, std::span<const double> f, int p = 0) {
  return detail::apply_phi(grid, f, grid.phi_d2(p));
}
inline std::vector<double> d_theta_phi(const SphericalGrid& grid, std::span<const double> f,
                                       Parity parity = Parity::Even, int p = 0) {
  const auto ft = d_theta(grid, f, parity, p);
  return d_phi(grid, ft, p);
}

// All first and second partials of one nodal quantity.
struct Partials {
  std::vector<double> t, p, tt, tp, pp;
};

inline Partials partials(const SphericalGrid& grid, std::span<const double> f,
                         Parity parity = Parity::Even, int p = 0) {
  Partials d;
  d.t = d_theta(grid, f, parity, p);
  d.p = d_phi(grid, f, p);
  d.tt = d_theta2(grid, f, parity, p);
  d.pp = d_phi2(grid, f, p);
  d.tp = d_phi(grid, d.t, p);
  return d;
}

}  // namespace imcf
