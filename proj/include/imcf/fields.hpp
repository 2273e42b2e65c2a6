#pragma once
// Nodal scalar and symmetric 2-tensor fields on a SphericalGrid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "imcf/grid.hpp"

namespace imcf {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symmetric 2x2 matrix in the (theta, phi) coordinate basis.
struct Sym2 {
  double tt = 0.0, tp = 0.0, pp = 0.0;

  double det() const { return tt * pp - tp * tp; }
  double trace() const { return tt + pp; }
  Sym2 inverse() const {
    const double d = det();
    return {pp / d, -tp / d, tt / d};
  }
  bool positive_definite() const { return tt > 0.0 && det() > 0.0; }
  Sym2 operator+(const Sym2& o) const { return {tt + o.tt, tp + o.tp, pp + o.pp}; }
  Sym2 operator-(const Sym2& o) const { return {tt - o.tt, tp - o.tp, pp - o.pp}; }
  Sym2 operator*(double s) const { return {tt * s, tp * s, pp * s}; }
  double max_abs() const { return std::max({std::abs(tt), std::abs(tp), std::abs(pp)}); }
};

// Eigenvalues of a with respect to g (eigenvalues of g^{-1} a), ascending.
inline std::pair<double, double> relative_eigenvalues(const Sym2& a, const Sym2& g) {
  const Sym2 gi = g.inverse();
  const double s11 = gi.tt * a.tt + gi.tp * a.tp, s12 = gi.tt * a.tp + gi.tp * a.pp;
  const double s21 = gi.tp * a.tt + gi.pp * a.tp, s22 = gi.tp * a.tp + gi.pp * a.pp;
  const double half_tr = 0.5 * (s11 + s22);
  const double r = 0.5 * std::sqrt(std::max(0.0, (s11 - s22) * (s11 - s22) + 4.0 * s12 * s21));
  return {half_tr - r, half_tr + r};
}

// g^{ac} g^{bd} a_ab b_cd
inline double contract(const Sym2& a, const Sym2& b, const Sym2& ginv) {
  const double m00 = ginv.tt * a.tt + ginv.tp * a.tp, m01 = ginv.tt * a.tp + ginv.tp * a.pp;
  const double m10 = ginv.tp * a.tt + ginv.pp * a.tp, m11 = ginv.tp * a.tp + ginv.pp * a.pp;
  const double n00 = ginv.tt * b.tt + ginv.tp * b.tp, n01 = ginv.tt * b.tp + ginv.tp * b.pp;
  const double n10 = ginv.tp * b.tt + ginv.pp * b.tp, n11 = ginv.tp * b.tp + ginv.pp * b.pp;
  return m00 * n00 + m01 * n10 + m10 * n01 + m11 * n11;
}

struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(GridPtr g, double fill = 0.0) : grid(std::move(g)), values(grid->size(), fill) {}
  ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw std::invalid_argument("field size does not match grid");
  }
  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t n) { return values[n]; }
  double operator[](std::size_t n) const { return values[n]; }

  static ScalarField from_function(GridPtr g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int i = 0; i < g->n_theta(); ++i)
      for (int j = 0; j < g->n_phi(); ++j) out[g->index(i, j)] = f(g->theta(i), g->phi(j));
    return out;
  }
  bool finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

struct SymTensorField2 {
  GridPtr grid;
  std::vector<Sym2> values;

  SymTensorField2() = default;
  explicit SymTensorField2(GridPtr g) : grid(std::move(g)), values(grid->size()) {}
  std::size_t size() const { return values.size(); }
  Sym2& operator[](std::size_t n) { return values[n]; }
  const Sym2& operator[](std::size_t n) const { return values[n]; }

  std::vector<double> component(int which) const {
    std::vector<double> out(values.size());
    for (std::size_t n = 0; n < values.size(); ++n)
      out[n] = which == 0 ? values[n].tt : which == 1 ? values[n].tp : values[n].pp;
    return out;
  }
  // r^2 times the round metric.
  static SymTensorField2 round(GridPtr g, double r) {
    SymTensorField2 out(g);
    for (int i = 0; i < g->n_theta(); ++i) {
      const double s = g->sin_theta(i);
      for (int j = 0; j < g->n_phi(); ++j) out[g->index(i, j)] = {r * r, 0.0, r * r * s * s};
    }
    return out;
  }
  SymTensorField2 scaled(double c) const {
    SymTensorField2 out(grid);
    for (std::size_t n = 0; n < values.size(); ++n) out[n] = values[n] * c;
    return out;
  }
};

// Density of dmu_g with respect to the round measure d(sigma) at node n.
inline double area_density(const SymTensorField2& g, std::size_t n) {
  const double d = g[n].det();
  if (!(d > 0.0) || !(g[n].tt > 0.0)) throw GeometryError("metric is not positive definite");
  return std::sqrt(d) / g.grid->sin_theta(g.grid->row_of(n));
}

inline std::vector<double> area_densities(const SymTensorField2& g) {
  std::vector<double> out(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) out[n] = area_density(g, n);
  return out;
}

// Integral of f with respect to dmu_g.
inline double integrate(const ScalarField& f, const SymTensorField2& g) {
  if (f.grid.get() != g.grid.get() && (f.grid->n_theta() != g.grid->n_theta() ||
                                       f.grid->n_phi() != g.grid->n_phi()))
    throw std::invalid_argument("fields live on different grids");
  const auto& grid = *g.grid;
  double sum = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) sum += f[n] * area_density(g, n) * grid.weight(n);
  return sum;
}

inline double integrate_values(std::span<const double> f, std::span<const double> density,
                               const SphericalGrid& grid) {
  double sum = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) sum += f[n] * density[n] * grid.weight(n);
  return sum;
}

// Integral against the round measure.
inline double integrate_round(std::span<const double> f, const SphericalGrid& grid) {
  double sum = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) sum += f[n] * grid.weight(n);
  return sum;
}

}  // namespace imcf
