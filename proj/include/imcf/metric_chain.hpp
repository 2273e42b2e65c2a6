#pragma once
// Block metrics lapse^2 dt^2 + g on Sigma x [0,T] built from a flow trace, and
// their L^2 distances.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "imcf/diagnostics.hpp"
#include "imcf/moser.hpp"
#include "imcf/trace.hpp"

namespace imcf {

struct MetricChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BlockKind { HatG, G1, G2, G2Prime, G3Flat, G3Schwarz, Delta, Gs };

inline std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::HatG: return "hat_g";
    case BlockKind::G1: return "g1";
    case BlockKind::G2: return "g2";
    case BlockKind::G2Prime: return "g2prime";
    case BlockKind::G3Flat: return "g3_flat";
    case BlockKind::G3Schwarz: return "g3_schwarz";
    case BlockKind::Delta: return "delta";
    case BlockKind::Gs: return "g_s";
  }
  return "?";
}

// Sampled at the trace's output times, in the flow's parameter coordinates.
struct MetricBlock {
  BlockKind kind = BlockKind::HatG;
  std::vector<std::vector<double>> lapse_sq;  // [time][node]
  std::vector<SymTensorField2> spatial;       // [time]

  std::size_t n_times() const { return spatial.size(); }
};

enum class VolumeForm {
  HatG,   // dmu_t dt / H
  Delta,  // sqrt(det delta) dx dt
};

// Norm used for |A - B|^2: a block metric, or the lapse-only coordinate
// difference |lapse_A^2 - lapse_B^2|^2 that the proofs compute when the
// spatial parts coincide.
struct BlockNorm {
  const MetricBlock* metric = nullptr;
  static BlockNorm lapse_only() { return {}; }
  static BlockNorm of(const MetricBlock& b) { return {&b}; }
};

struct BlockSet {
  double r0 = 0.0;
  double m = 0.0;
  std::vector<double> times;
  ReparamMap reparam;
  std::map<BlockKind, MetricBlock> blocks;
  std::vector<std::vector<double>> hatg_volume;   // [time][node], density against dsigma
  std::vector<std::vector<double>> delta_volume;  // [time][node]

  const MetricBlock& operator[](BlockKind k) const { return blocks.at(k); }
  const SphericalGrid& grid() const { return *reparam.grid; }
};

inline MetricBlock make_block(BlockKind kind, std::size_t nt) {
  MetricBlock b;
  b.kind = kind;
  b.lapse_sq.resize(nt);
  b.spatial.reserve(nt);
  return b;
}

inline BlockSet assemble_blocks(const FlowTrace& tr, double m, double r0) {
  if (tr.states.empty()) throw MetricChainError("empty trace");
  if (!(r0 > 0.0)) throw MetricChainError("r0 must be positive");
  if (2.0 * m >= r0) throw MetricChainError("2m >= r0: Schwarzschild lapse undefined at t = 0");
  const std::size_t nt = tr.size();
  const auto& grid = tr.states.front().grid();
  const std::size_t N = grid->size();
  const auto& g0 = tr.states.front().g;
  const auto& gT = tr.states.back().g;
  const double T = tr.states.back().t;

  BlockSet set;
  set.r0 = r0;
  set.m = m;
  set.times = tr.times();
  const double area0 = tr.states.front().area;
  set.reparam = moser_reparam(g0.scaled(4.0 * std::numbers::pi * r0 * r0 / area0), r0);
  const auto& sigma = set.reparam.pullback_sigma;

  for (auto k : {BlockKind::HatG, BlockKind::G1, BlockKind::G2, BlockKind::G2Prime, BlockKind::G3Flat,
                 BlockKind::G3Schwarz, BlockKind::Delta, BlockKind::Gs})
    set.blocks.emplace(k, make_block(k, nt));
  auto& hat = set.blocks[BlockKind::HatG];
  auto& g1 = set.blocks[BlockKind::G1];
  auto& g2 = set.blocks[BlockKind::G2];
  auto& g2p = set.blocks[BlockKind::G2Prime];
  auto& g3f = set.blocks[BlockKind::G3Flat];
  auto& g3s = set.blocks[BlockKind::G3Schwarz];
  auto& del = set.blocks[BlockKind::Delta];
  auto& gs = set.blocks[BlockKind::Gs];
  set.hatg_volume.resize(nt);
  set.delta_volume.resize(nt);

  for (std::size_t k = 0; k < nt; ++k) {
    const auto& st = tr.states[k];
    const double t = st.t, et = std::exp(t);
    const double Hbar = mean_H(st);
    if (!(Hbar > 0.0)) throw MetricChainError("mean curvature average is not positive");
    const double flat = r0 * r0 * et / 4.0;
    const double schw = flat / (1.0 - 2.0 * m / r0 * std::exp(-t / 2.0));
    const double s = r0 * std::exp(t / 2.0);
    hat.lapse_sq[k].resize(N);
    set.hatg_volume[k].resize(N);
    set.delta_volume[k].resize(N);
    for (std::size_t n = 0; n < N; ++n) {
      hat.lapse_sq[k][n] = 1.0 / (st.H[n] * st.H[n]);
      set.hatg_volume[k][n] = st.density[n] / st.H[n];
      set.delta_volume[k][n] = 0.5 * s * s * s * set.reparam.jacobian[n];
    }
    g1.lapse_sq[k].assign(N, 1.0 / (Hbar * Hbar));
    g2.lapse_sq[k] = g1.lapse_sq[k];
    g2p.lapse_sq[k] = g1.lapse_sq[k];
    g3f.lapse_sq[k].assign(N, flat);
    g3s.lapse_sq[k].assign(N, schw);
    del.lapse_sq[k].assign(N, flat);
    gs.lapse_sq[k].assign(N, schw);

    hat.spatial.push_back(st.g);
    g1.spatial.push_back(st.g);
    g2.spatial.push_back(g0.scaled(et));
    g2p.spatial.push_back(gT.scaled(std::exp(t - T)));
    g3f.spatial.push_back(g0.scaled(et));
    g3s.spatial.push_back(g0.scaled(et));
    del.spatial.push_back(sigma.scaled(s * s));
    gs.spatial.push_back(sigma.scaled(s * s));
  }
  return set;
}

// |A - B|^2 at one node and time.
inline double block_norm_sq(const MetricBlock& A, const MetricBlock& B, const BlockNorm& norm, std::size_t k,
                            std::size_t n) {
  const double dl = A.lapse_sq[k][n] - B.lapse_sq[k][n];
  if (!norm.metric) return dl * dl;
  const double L = norm.metric->lapse_sq[k][n];
  const Sym2 ds = A.spatial[k][n] - B.spatial[k][n];
  return dl * dl / (L * L) + contract(ds, ds, norm.metric->spatial[k][n].inverse());
}

// int_Sigma |A - B|^2 dV at each output time (dV without the dt).
inline std::vector<double> block_distance_profile(const BlockSet& set, const MetricBlock& A, const MetricBlock& B,
                                                  const BlockNorm& norm, VolumeForm vol) {
  if (A.n_times() != set.times.size() || B.n_times() != set.times.size() ||
      (norm.metric && norm.metric->n_times() != set.times.size()))
    throw MetricChainError("blocks sampled at different times");
  const auto& grid = set.grid();
  const auto& V = vol == VolumeForm::HatG ? set.hatg_volume : set.delta_volume;
  std::vector<double> out(set.times.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double sum = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) sum += block_norm_sq(A, B, norm, k, n) * V[k][n] * grid.weight(n);
    out[k] = sum;
  }
  return out;
}

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) s += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return s;
}

// int_0^T int_Sigma |A - B|^2_norm dV
inline double l2_block_distance(const BlockSet& set, const MetricBlock& A, const MetricBlock& B,
                                const BlockNorm& norm, VolumeForm vol) {
  return trapezoid(set.times, block_distance_profile(set, A, B, norm, vol));
}

struct ChainReport {
  Scenario scenario = Scenario::Pmt;
  // each theorem's own convention
  double hat_g1 = 0.0;        // lapse only, dmu dt / H
  double g1_g2 = 0.0;         // g3 norm, dmu dt / H
  double g1_g2prime = 0.0;    // g3 norm, dmu dt / H
  double g2_g3 = 0.0;         // lapse only, dmu dt / H
  // common convention (g3 norm, dmu dt / H) for the triangle inequality
  double common_hat_g1 = 0.0, common_g1_g2 = 0.0, common_g2_g3 = 0.0, common_hat_g3 = 0.0;
  bool triangle_ok = false;
  // |hat g - delta|^2_delta (pmt) or |hat g - g_s|^2_delta (rpi), delta volume
  double target = 0.0;
  double g3_target = 0.0;             // |g3 - delta|^2_delta or |g3 - g_s|^2_delta
  std::vector<double> target_profile; // per output time
  std::vector<double> moser_jacobian_error;

  double triangle_bound() const {
    const double s = std::sqrt(common_hat_g1) + std::sqrt(common_g1_g2) + std::sqrt(common_g2_g3);
    return s * s;
  }
};

inline ChainReport chain_report(const BlockSet& set, Scenario sc) {
  ChainReport r;
  r.scenario = sc;
  const auto g3k = sc == Scenario::Pmt ? BlockKind::G3Flat : BlockKind::G3Schwarz;
  const auto tk = sc == Scenario::Pmt ? BlockKind::Delta : BlockKind::Gs;
  const auto& hat = set[BlockKind::HatG];
  const auto& g1 = set[BlockKind::G1];
  const auto& g2 = set[BlockKind::G2];
  const auto& g3 = set[g3k];
  const auto& target = set[tk];
  const auto lapse = BlockNorm::lapse_only();
  const auto n3 = BlockNorm::of(set[BlockKind::G3Flat]);
  const auto nd = BlockNorm::of(set[BlockKind::Delta]);

  r.hat_g1 = l2_block_distance(set, hat, g1, lapse, VolumeForm::HatG);
  r.g1_g2 = l2_block_distance(set, g1, g2, n3, VolumeForm::HatG);
  r.g1_g2prime = l2_block_distance(set, g1, set[BlockKind::G2Prime], n3, VolumeForm::HatG);
  r.g2_g3 = l2_block_distance(set, g2, g3, lapse, VolumeForm::HatG);

  r.common_hat_g1 = l2_block_distance(set, hat, g1, n3, VolumeForm::HatG);
  r.common_g1_g2 = r.g1_g2;
  r.common_g2_g3 = l2_block_distance(set, g2, g3, n3, VolumeForm::HatG);
  r.common_hat_g3 = l2_block_distance(set, hat, g3, n3, VolumeForm::HatG);
  r.triangle_ok = std::sqrt(r.common_hat_g3) <= std::sqrt(r.triangle_bound()) * (1.0 + 1e-12) + 1e-300;

  r.target_profile = block_distance_profile(set, hat, target, nd, VolumeForm::Delta);
  r.target = trapezoid(set.times, r.target_profile);
  r.g3_target = l2_block_distance(set, g3, target, nd, VolumeForm::Delta);
  return r;
}

inline ChainReport chain_report(const FlowTrace& tr, double m, Scenario sc) {
  return chain_report(assemble_blocks(tr, m, tr.r0), sc);
}

// 2^4 (1/|Sigma_t|) int (K - e^{-t}/r0^2)^2 dmu at each output time.
inline std::vector<double> roundness_deficit_series(const FlowTrace& tr, double r0) {
  std::vector<double> out;
  out.reserve(tr.size());
  for (const auto& st : tr.states) out.push_back(roundness_deficit(st, ambient_along(st, tr.ambient), r0));
  return out;
}

// Scalar curvature of (r0^2 e^t / 4) dt^2 + e^t g(x,0) from the warped product
// formula, s = r0 e^{t/2}; K0 is the Gauss curvature of g(x,0).
inline double warped_scalar_curvature(double K0, double r0, double t) {
  const double s2 = r0 * r0 * std::exp(t);
  return -2.0 / s2 + 2.0 * K0 * r0 * r0 / s2;
}

inline std::vector<std::vector<double>> warped_scalar_curvature(const FlowTrace& tr, double r0) {
  const auto& st0 = tr.states.front();
  const auto K0 = gauss_curvature(st0, tr.ambient).K;
  std::vector<std::vector<double>> out(tr.size(), std::vector<double>(K0.size()));
  for (std::size_t k = 0; k < tr.size(); ++k)
    for (std::size_t n = 0; n < K0.size(); ++n) out[k][n] = warped_scalar_curvature(K0[n], r0, tr.states[k].t);
  return out;
}

}  // namespace imcf
