#pragma once
// Area-equalizing diffeomorphism of the parameter sphere by Moser's flow.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "imcf/fields.hpp"
#include "imcf/geometry.hpp"
#include "imcf/interp.hpp"
#include "imcf/spherical_harmonics.hpp"

namespace imcf {

struct MoserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solution of Delta_sigma u = f on the unit sphere (f of mean zero) by
// projection onto spherical harmonics of degree < n_theta; returns the
// gradient of u as a Cartesian tangent field at the nodes.
inline std::array<std::vector<double>, 3> poisson_gradient(const SphericalGrid& grid, std::span<const double> f) {
  const int L = grid.n_theta() - 1;
  const std::size_t N = grid.size();
  std::array<std::vector<double>, 3> grad;
  for (auto& g : grad) g.assign(N, 0.0);
  std::vector<RadialFrame> frames(N);
  for (std::size_t n = 0; n < N; ++n) frames[n] = radial_frame(grid.theta(grid.row_of(n)), grid.phi(grid.col_of(n)));
  std::vector<YlmValue> y(N);
  for (int l = 1; l <= L; ++l) {
    for (int m = -l; m <= l; ++m) {
      double c = 0.0;
      for (std::size_t n = 0; n < N; ++n) {
        y[n] = real_ylm(l, m, grid.theta(grid.row_of(n)), grid.phi(grid.col_of(n)));
        c += f[n] * y[n].value * grid.weight(n);
      }
      c /= -static_cast<double>(l * (l + 1));
      for (std::size_t n = 0; n < N; ++n) {
        const double s = grid.sin_theta(grid.row_of(n));
        const Vec3 v = c * (y[n].d_theta * frames[n].t + (y[n].d_phi / (s * s)) * frames[n].p);
        for (int k = 0; k < 3; ++k) grad[k][n] += v[k];
      }
    }
  }
  return grad;
}

// Node positions N(x) on the unit sphere with N^* dsigma = rho dsigma, stored
// as displacements D = N - rhat so that derivatives can be taken with the
// grid stencils.
struct ReparamMap {
  GridPtr grid;
  std::array<std::vector<double>, 3> displacement;
  std::vector<double> jacobian;      // N^* dsigma / dsigma, from the map's derivatives
  std::vector<double> target;        // rho requested
  SymTensorField2 pullback_sigma;    // N^* sigma

  Vec3 image(std::size_t n) const {
    const auto f = radial_frame(grid->theta(grid->row_of(n)), grid->phi(grid->col_of(n)));
    return f.r + Vec3(displacement[0][n], displacement[1][n], displacement[2][n]);
  }
  double max_relative_jacobian_error() const {
    double e = 0.0;
    for (std::size_t n = 0; n < jacobian.size(); ++n) e = std::max(e, std::abs(jacobian[n] / target[n] - 1.0));
    return e;
  }
  double min_jacobian() const { return *std::min_element(jacobian.begin(), jacobian.end()); }
};

inline ReparamMap identity_reparam(const GridPtr& grid) {
  ReparamMap out;
  out.grid = grid;
  for (auto& d : out.displacement) d.assign(grid->size(), 0.0);
  out.jacobian.assign(grid->size(), 1.0);
  out.target.assign(grid->size(), 1.0);
  out.pullback_sigma = SymTensorField2::round(grid, 1.0);
  return out;
}

// Pull back of the round metric and its density for a map given by displacements.
inline void finish_reparam(ReparamMap& map) {
  const auto& grid = *map.grid;
  const int wide = grid.max_width();
  std::array<Partials, 3> d;
  for (int k = 0; k < 3; ++k) {
    d[k].t = d_theta(grid, map.displacement[k], Parity::Even, wide);
    d[k].p = d_phi(grid, map.displacement[k], wide);
  }
  map.pullback_sigma = SymTensorField2(map.grid);
  map.jacobian.resize(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const int i = grid.row_of(n);
    const auto f = radial_frame(grid.theta(i), grid.phi(grid.col_of(n)));
    Vec3 Nt = f.t, Np = f.p;
    for (int k = 0; k < 3; ++k) {
      Nt[k] += d[k].t[n];
      Np[k] += d[k].p[n];
    }
    const Sym2 s{Nt.dot(Nt), Nt.dot(Np), Np.dot(Np)};
    map.pullback_sigma[n] = s;
    map.jacobian[n] = std::sqrt(std::max(0.0, s.det())) / grid.sin_theta(i);
  }
}

// Moser's construction: with rho_tau = (1 - tau) rho + tau and Delta u = rho - 1,
// the flow of v_tau = grad u / rho_tau for tau in [0, 1] maps rho dsigma to dsigma.
inline ReparamMap moser_reparam_density(const GridPtr& grid, std::vector<double> rho, int steps = 24) {
  const auto& G = *grid;
  const std::size_t N = G.size();
  const double total = integrate_round(rho, G);
  if (!(total > 0.0)) throw MoserError("density must have positive total");
  for (double& r : rho) {
    r *= 4.0 * std::numbers::pi / total;
    if (!(r > 0.0)) throw MoserError("density must be positive");
  }
  std::vector<double> f(N);
  for (std::size_t n = 0; n < N; ++n) f[n] = rho[n] - 1.0;
  const auto grad = poisson_gradient(G, f);

  auto velocity = [&](const Vec3& p, double tau) {
    const auto [th, ph] = std::pair{std::acos(std::clamp(p.z(), -1.0, 1.0)), std::atan2(p.y(), p.x())};
    const InterpStencil s(G, th, ph);
    Vec3 v(s.apply(grad[0]), s.apply(grad[1]), s.apply(grad[2]));
    const double r = (1.0 - tau) * s.apply(rho) + tau;
    if (!(r > 0.0)) throw MoserError("interpolated density is not positive");
    v -= v.dot(p) * p;
    return Vec3(v / r);
  };

  ReparamMap map;
  map.grid = grid;
  map.target = rho;
  for (auto& d : map.displacement) d.resize(N);
  const double h = 1.0 / steps;
  for (std::size_t n = 0; n < N; ++n) {
    const auto fr = radial_frame(G.theta(G.row_of(n)), G.phi(G.col_of(n)));
    Vec3 p = fr.r;
    for (int k = 0; k < steps; ++k) {
      const double tau = k * h;
      const Vec3 k1 = velocity(p, tau);
      const Vec3 k2 = velocity((p + 0.5 * h * k1).normalized(), tau + 0.5 * h);
      const Vec3 k3 = velocity((p + 0.5 * h * k2).normalized(), tau + 0.5 * h);
      const Vec3 k4 = velocity((p + h * k3).normalized(), tau + h);
      p = (p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).normalized();
    }
    for (int c = 0; c < 3; ++c) map.displacement[c][n] = p[c] - fr.r[c];
  }
  finish_reparam(map);
  if (map.min_jacobian() <= 0.0) throw MoserError("reparameterization is not orientation preserving");
  return map;
}

// Map with r0^2 N^* dsigma = dmu_0 for the induced metric g0 of area 4 pi r0^2.
inline ReparamMap moser_reparam(const SymTensorField2& g0, double r0, int steps = 24) {
  const auto rho = area_densities(g0);
  const double area = integrate_round(rho, *g0.grid);
  const double target = 4.0 * std::numbers::pi * r0 * r0;
  if (std::abs(area - target) > 1e-6 * target) throw MoserError("area of g0 differs from 4 pi r0^2; rescale first");
  bool round = true;
  for (double r : rho)
    if (std::abs(r - r0 * r0) > 1e-14 * r0 * r0) round = false;
  if (round) return identity_reparam(g0.grid);
  return moser_reparam_density(g0.grid, rho, steps);
}

}  // namespace imcf
