#pragma once
// Local tensor-product Lagrange interpolation of even (scalar-like) nodal data
// at arbitrary points of the sphere.

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "imcf/grid.hpp"

namespace imcf {

class InterpStencil {
 public:
  InterpStencil() = default;

  // order points per direction; order must be even.
  InterpStencil(const SphericalGrid& grid, double theta, double phi, int order = 8) {
    const int nt = grid.n_theta();
    const int half = order / 2;
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;

    // bracket theta among extended meridian positions
    int e0 = -1;
    for (int e = -1; e < nt; ++e) {
      if (grid.extended_theta(e) <= theta && theta < grid.extended_theta(e + 1)) {
        e0 = e;
        break;
      }
    }
    std::vector<double> tpos(order);
    for (int k = 0; k < order; ++k) tpos[k] = grid.extended_theta(e0 - half + 1 + k);
    const auto wt = fornberg_weights(theta, tpos, 0)[0];

    auto phi_weights = [&](double ph, std::vector<int>& cols, std::vector<double>& w) {
      const double dphi = grid.dphi();
      const int j0 = static_cast<int>(std::floor(ph / dphi));
      std::vector<double> ppos(order);
      cols.resize(order);
      for (int k = 0; k < order; ++k) {
        const int j = j0 - half + 1 + k;
        ppos[k] = j * dphi;
        cols[k] = grid.wrap_col(j);
      }
      w = fornberg_weights(ph, ppos, 0)[0];
    };
    std::vector<int> cols, cols_across;
    std::vector<double> wp, wp_across;
    phi_weights(phi, cols, wp);
    double phi_across = phi + std::numbers::pi;
    if (phi_across >= two_pi) phi_across -= two_pi;
    phi_weights(phi_across, cols_across, wp_across);

    taps_.reserve(order * order);
    for (int k = 0; k < order; ++k) {
      const ThetaTap t = grid.extended_tap(e0 - half + 1 + k, wt[k]);
      const auto& c = t.across ? cols_across : cols;
      const auto& w = t.across ? wp_across : wp;
      for (int q = 0; q < order; ++q) taps_.emplace_back(grid.index(t.row, c[q]), t.weight * w[q]);
    }
  }

  double apply(std::span<const double> f) const {
    double acc = 0.0;
    for (const auto& [n, w] : taps_) acc += w * f[n];
    return acc;
  }

 private:
  std::vector<std::pair<std::size_t, double>> taps_;
};

}  // namespace imcf
