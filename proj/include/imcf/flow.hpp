#pragma once
// Inverse mean curvature flow: the exact coordinate-sphere solution in
// rotationally symmetric ambients and a marker (Lagrangian) scheme for general
// star-shaped surfaces, with class-bound monitoring.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "imcf/ambient.hpp"
#include "imcf/geometry.hpp"
#include "imcf/trace.hpp"

namespace imcf {

struct FlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Integrator { Heun, Rkc };

struct FlowConfig {
  FlowMode mode = FlowMode::PdeGraph;
  Integrator integrator = Integrator::Rkc;
  double T = 1.0;
  double dt_out = 0.05;
  double max_dt = 0.005;      // upper bound on a single substep
  double cfl_safety = 0.8;    // fraction of the explicit stability limit
  double max_rel_change = 0.01;
  ClassBounds bounds;
  ViolationPolicy policy = ViolationPolicy::RecordAndContinue;
  long max_substeps = 50'000'000;
  std::function<void(const FlowState&)> on_state;  // called at each output time
};

// Coordinate spheres stay coordinate spheres. Their tangential metric is
// s^2 times the round one and the area grows like e^t, so s grows by e^{dt/2}.
inline double step_ode_rotsym(const AmbientMetric& ambient, double s, double dt) {
  if (!ambient.rotationally_symmetric())
    throw FlowError("ode mode needs a rotationally symmetric ambient");
  return s * std::exp(0.5 * dt);
}

// Marker velocity y_t = nu / H, split into radial speed and drift rate.
struct SurfaceRate {
  std::vector<double> rho;
  std::array<std::vector<double>, 3> drift;
};

inline SurfaceRate flow_rate(const FlowState& st) {
  const auto& grid = *st.grid();
  const std::size_t N = grid.size();
  SurfaceRate r;
  r.rho.resize(N);
  for (auto& d : r.drift) d.resize(N);
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t n = grid.index(i, j);
      const double h = st.H[n];
      if (!(h > 0.0)) throw GeometryError("mean curvature is not positive");
      const Vec3 v = st.normal[n] / h;
      const Vec3 rhat = radial_frame(grid.theta(i), grid.phi(j)).r;
      const double vr = v.dot(rhat);
      r.rho[n] = vr;
      for (int c = 0; c < 3; ++c) r.drift[c][n] = v[c] - vr * rhat[c];
    }
  }
  return r;
}

// Gershgorin bound on the spectral radius of the linearized operator
// H^{-2} g^{ab} d_a d_b as discretized on the grid.
inline double stability_limit(const FlowState& st) {
  const auto& grid = *st.grid();
  double s2p = 0.0, s1p = 0.0;
  for (double w : grid.phi_d2()) s2p += std::abs(w);
  for (double w : grid.phi_d1()) s1p += std::abs(w);
  double lam = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i) {
    double s2t = 0.0, s1t = 0.0;
    for (const auto& tap : grid.theta_d2(i)) s2t += std::abs(tap.weight);
    for (const auto& tap : grid.theta_d1(i)) s1t += std::abs(tap.weight);
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t n = grid.index(i, j);
      const Sym2 gi = st.g[n].inverse();
      const double h = st.H[n];
      const double l = (std::abs(gi.tt) * s2t + std::abs(gi.pp) * s2p +
                        2.0 * std::abs(gi.tp) * s1t * s1p) /
                       (h * h);
      lam = std::max(lam, l);
    }
  }
  return lam > 0.0 ? 2.0 / lam : std::numeric_limits<double>::infinity();
}

// Flat state vector (rho, drift_x, drift_y, drift_z) for the explicit integrators.
inline std::vector<double> pack(const Surface& s) {
  const std::size_t N = s.rho.size();
  std::vector<double> y(4 * N);
  std::copy(s.rho.begin(), s.rho.end(), y.begin());
  for (int c = 0; c < 3; ++c) std::copy(s.drift[c].begin(), s.drift[c].end(), y.begin() + (c + 1) * N);
  return y;
}

inline Surface unpack(const GridPtr& grid, const std::vector<double>& y) {
  const std::size_t N = grid->size();
  Surface s{grid, std::vector<double>(y.begin(), y.begin() + N), {}};
  for (int c = 0; c < 3; ++c) s.drift[c].assign(y.begin() + (c + 1) * N, y.begin() + (c + 2) * N);
  return s;
}

inline std::vector<double> pack(const SurfaceRate& r) {
  const std::size_t N = r.rho.size();
  std::vector<double> y(4 * N);
  std::copy(r.rho.begin(), r.rho.end(), y.begin());
  for (int c = 0; c < 3; ++c) std::copy(r.drift[c].begin(), r.drift[c].end(), y.begin() + (c + 1) * N);
  return y;
}

// Admissible substep from the current state, before the stability limit.
inline double substep_size(const FlowState& st, const SurfaceRate& rate, const FlowConfig& cfg) {
  double dt = cfg.max_dt;
  double rel = 0.0;
  for (std::size_t n = 0; n < rate.rho.size(); ++n)
    rel = std::max(rel, std::abs(rate.rho[n]) / st.rho[n]);
  if (rel > 0.0) dt = std::min(dt, cfg.max_rel_change / rel);
  return dt;
}

struct ChebyshevValue {
  double T, dT, d2T;
};

// T_j, T_j' and T_j'' at x for j = 0..s.
inline std::vector<ChebyshevValue> chebyshev_table(int s, double x) {
  std::vector<ChebyshevValue> c(s + 1);
  c[0] = {1.0, 0.0, 0.0};
  if (s >= 1) c[1] = {x, 1.0, 0.0};
  for (int j = 2; j <= s; ++j) {
    c[j].T = 2.0 * x * c[j - 1].T - c[j - 2].T;
    c[j].dT = 2.0 * c[j - 1].T + 2.0 * x * c[j - 1].dT - c[j - 2].dT;
    c[j].d2T = 4.0 * c[j - 1].dT + 2.0 * x * c[j - 1].d2T - c[j - 2].d2T;
  }
  return c;
}

// Number of stages for a second-order Runge-Kutta-Chebyshev step of size dt
// with spectral radius lambda.
inline int rkc_stages(double dt, double lambda) {
  return std::max(2, 1 + static_cast<int>(std::sqrt(1.54 * dt * lambda + 1.0)));
}

// Integrate the marker flow from st to time t_end.
inline FlowState step_pde_graph(const AmbientMetric& ambient, const FlowState& st, double t_end,
                                const FlowConfig& cfg, long* substeps = nullptr) {
  const GridPtr grid = st.grid();
  FlowState cur = st;
  long count = 0;
  auto rhs = [&](const std::vector<double>& y, double t) {
    return pack(flow_rate(induced_geometry(ambient, unpack(grid, y), t)));
  };
  while (cur.t < t_end - 1e-12) {
    const std::vector<double> y0 = pack(cur.surface());
    const SurfaceRate rate = flow_rate(cur);
    const std::vector<double> F0 = pack(rate);
    const double lambda = 2.0 / stability_limit(cur);
    double dt = substep_size(cur, rate, cfg);
    if (cfg.integrator == Integrator::Heun) dt = std::min(dt, cfg.cfl_safety * 2.0 / lambda);
    const double remaining = t_end - cur.t;
    if (dt >= remaining) {
      dt = remaining;
    } else {
      // Even out the substeps so that the output time is hit exactly.
      dt = remaining / std::ceil(remaining / dt);
    }
    const double t_new = std::abs(cur.t + dt - t_end) < 1e-12 ? t_end : cur.t + dt;
    const std::size_t M = y0.size();
    std::vector<double> y1(M);

    if (cfg.integrator == Integrator::Heun) {
      for (std::size_t k = 0; k < M; ++k) y1[k] = y0[k] + dt * F0[k];
      const auto F1 = rhs(y1, cur.t + dt);
      for (std::size_t k = 0; k < M; ++k) y1[k] = y0[k] + 0.5 * dt * (F0[k] + F1[k]);
      cur = induced_geometry(ambient, unpack(grid, y1), t_new);
    } else {
      const int s = rkc_stages(dt, lambda / cfg.cfl_safety);
      const double eps = 2.0 / 13.0;
      const double w0 = 1.0 + eps / (s * s);
      const auto ch = chebyshev_table(s, w0);
      const double w1 = ch[s].dT / ch[s].d2T;
      std::vector<double> b(s + 1);
      for (int j = 2; j <= s; ++j) b[j] = ch[j].d2T / (ch[j].dT * ch[j].dT);
      b[0] = b[1] = b[2];
      std::vector<double> ym2 = y0, ym1(M), yj(M);
      const double mt1 = b[1] * w1;
      for (std::size_t k = 0; k < M; ++k) ym1[k] = y0[k] + mt1 * dt * F0[k];
      std::vector<double> c(s + 1);
      c[0] = 0.0;
      c[1] = mt1;
      for (int j = 2; j <= s; ++j) {
        const double mu = 2.0 * b[j] * w0 / b[j - 1];
        const double nu = -b[j] / b[j - 2];
        const double mt = 2.0 * b[j] * w1 / b[j - 1];
        const double gt = -(1.0 - b[j - 1] * ch[j - 1].T) * mt;
        const auto Fj = rhs(ym1, cur.t + c[j - 1] * dt);
        for (std::size_t k = 0; k < M; ++k)
          yj[k] = (1.0 - mu - nu) * y0[k] + mu * ym1[k] + nu * ym2[k] + mt * dt * Fj[k] + gt * dt * F0[k];
        c[j] = mu * c[j - 1] + nu * c[j - 2] + mt + gt;
        std::swap(ym2, ym1);
        std::swap(ym1, yj);
      }
      cur = induced_geometry(ambient, unpack(grid, ym1), t_new);
    }
    if (++count > cfg.max_substeps) throw FlowError("substep budget exhausted");
  }
  if (substeps) *substeps += count;
  return cur;
}

inline void check_class(const FlowState& st, const ClassBounds& b, std::vector<ClassViolation>& out) {
  double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0, amax = 0.0;
  for (double h : st.H.values) {
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
  }
  for (double a : st.A_norm_sq().values) amax = std::max(amax, std::sqrt(std::max(0.0, a)));
  if (hmin < b.H0) out.push_back({st.t, "H0", hmin});
  if (hmax > b.H1) out.push_back({st.t, "H1", hmax});
  if (amax > b.A1) out.push_back({st.t, "A1", amax});
}

inline bool is_coordinate_sphere(const Surface& s) {
  if (s.has_drift()) return false;
  const double r0 = s.rho.front();
  for (double r : s.rho)
    if (std::abs(r - r0) > 1e-14 * r0) return false;
  return true;
}

// Run the flow, sampling states at multiples of dt_out up to T.
inline FlowTrace run_flow(const AmbientMetric& ambient, const Surface& initial, const FlowConfig& cfg) {
  if (!(cfg.T > 0.0) || !(cfg.dt_out > 0.0)) throw std::invalid_argument("T and dt_out must be positive");
  const long steps = std::lround(cfg.T / cfg.dt_out);
  if (steps < 1 || std::abs(steps * cfg.dt_out - cfg.T) > 1e-9 * cfg.T)
    throw std::invalid_argument("T must be a multiple of dt_out");
  if (cfg.mode == FlowMode::OdeRotsym) {
    if (!ambient.rotationally_symmetric()) throw FlowError("ode mode needs a rotationally symmetric ambient");
    if (!is_coordinate_sphere(initial)) throw FlowError("ode mode needs a coordinate sphere");
  }

  FlowTrace tr;
  tr.ambient = ambient;
  tr.mode = cfg.mode;
  tr.bounds = cfg.bounds;
  tr.dt_out = cfg.dt_out;

  FlowState st = induced_geometry(ambient, initial, 0.0);
  tr.r0 = std::sqrt(st.area / (4.0 * std::numbers::pi));
  const double s0 = initial.rho.front();

  auto record = [&](const FlowState& s) {
    const std::size_t before = tr.class_violations.size();
    check_class(s, cfg.bounds, tr.class_violations);
    tr.states.push_back(s);
    if (cfg.on_state) cfg.on_state(s);
    if (tr.class_violations.size() > before && cfg.policy == ViolationPolicy::Abort) {
      tr.aborted = true;
      const auto& v = tr.class_violations[before];
      tr.abort_reason = "class bound " + v.bound + " violated at t=" + std::to_string(v.t);
      return false;
    }
    return true;
  };

  if (!record(st)) return tr;
  for (long k = 1; k <= steps; ++k) {
    const double t = k * cfg.dt_out;
    try {
      if (cfg.mode == FlowMode::OdeRotsym) {
        st = induced_geometry(ambient, Surface::sphere(initial.grid, step_ode_rotsym(ambient, s0, t)), t);
      } else {
        st = step_pde_graph(ambient, st, t, cfg, &tr.substeps);
      }
    } catch (const std::exception& e) {
      tr.aborted = true;
      tr.abort_reason = e.what();
      return tr;
    }
    if (!record(st)) return tr;
  }
  return tr;
}

}  // namespace imcf
