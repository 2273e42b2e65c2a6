#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/flow.hpp"
#include "imcf/metric_chain.hpp"

using namespace imcf;

namespace {

constexpr double kPi = std::numbers::pi;

FlowTrace ode_trace(const AmbientMetric& amb, double s0, double T, double dt_out = 0.02, int nt = 12) {
  FlowConfig c;
  c.mode = FlowMode::OdeRotsym;
  c.T = T;
  c.dt_out = dt_out;
  return run_flow(amb, Surface::sphere(build_grid(nt, 2 * nt), s0), c);
}

FlowTrace pde_trace(const AmbientMetric& amb, double s0, double eps, double T, int nt = 16) {
  auto grid = build_grid(nt, 2 * nt);
  std::vector<double> rho(grid->size());
  for (std::size_t n = 0; n < rho.size(); ++n)
    rho[n] = s0 * (1.0 + eps * real_ylm(2, 0, grid->theta(grid->row_of(n)), grid->phi(grid->col_of(n))).value);
  FlowConfig c;
  c.T = T;
  c.dt_out = 0.05;
  return run_flow(amb, Surface::graph(grid, rho), c);
}

// integrand of |g_s - delta|^2_delta over Sigma_t: 4 pi (s^3 / 2) (2m / (s - 2m))^2
double schwarzschild_profile(double r0, double m, double t) {
  const double s = r0 * std::exp(t / 2.0);
  const double q = 2.0 * m / (s - 2.0 * m);
  return 4.0 * kPi * 0.5 * s * s * s * q * q;
}

}  // namespace

TEST(MetricChain, EuclideanBlocksCoincideWithDelta) {
  const auto tr = ode_trace(AmbientMetric::euclidean(), 1.3, 1.0);
  const auto set = assemble_blocks(tr, 0.0, tr.r0);
  for (std::size_t k = 0; k < set.times.size(); ++k)
    for (std::size_t n = 0; n < set.grid().size(); ++n) {
      EXPECT_NEAR(set[BlockKind::HatG].lapse_sq[k][n], set[BlockKind::Delta].lapse_sq[k][n], 1e-12);
      EXPECT_LT((set[BlockKind::HatG].spatial[k][n] - set[BlockKind::Delta].spatial[k][n]).max_abs(), 1e-12);
    }
  for (auto sc : {Scenario::Pmt, Scenario::Rpi}) {
    const auto r = chain_report(set, sc);
    EXPECT_LE(r.target, 1e-10);
    EXPECT_LE(r.hat_g1, 1e-10);
    EXPECT_LE(r.g1_g2, 1e-10);
    EXPECT_LE(r.g2_g3, 1e-10);
    EXPECT_LE(r.common_hat_g3, 1e-10);
    EXPECT_TRUE(r.triangle_ok);
  }
}

TEST(MetricChain, SchwarzschildBlocksCoincideWithGs) {
  const double m = 0.5, s0 = 3.0;
  const auto tr = ode_trace(AmbientMetric::schwarzschild(m), s0, 1.0);
  const auto set = assemble_blocks(tr, m, tr.r0);
  EXPECT_NEAR(tr.r0, s0, 1e-12);
  for (std::size_t k = 0; k < set.times.size(); ++k)
    for (std::size_t n = 0; n < set.grid().size(); ++n)
      EXPECT_NEAR(set[BlockKind::HatG].lapse_sq[k][n] / set[BlockKind::Gs].lapse_sq[k][n], 1.0, 1e-10);
  const auto r = chain_report(set, Scenario::Rpi);
  EXPECT_LE(r.target, 1e-8);
  EXPECT_LE(r.hat_g1, 1e-8);
  EXPECT_LE(r.g1_g2, 1e-8);
  EXPECT_LE(r.g1_g2prime, 1e-8);
  EXPECT_LE(r.g2_g3, 1e-8);
  EXPECT_LE(r.common_hat_g3, 1e-8);
  EXPECT_TRUE(r.triangle_ok);
}

TEST(MetricChain, SchwarzschildDistanceToDelta) {
  const double r0 = 2.0;
  double previous = 0.0;
  for (double m : {0.05, 0.1, 0.2}) {
    const auto tr = ode_trace(AmbientMetric::schwarzschild(m), r0, 1.0, 0.01);
    const auto r = chain_report(tr, m, Scenario::Pmt);
    for (std::size_t k = 0; k < tr.size(); ++k)
      EXPECT_NEAR(r.target_profile[k] / schwarzschild_profile(r0, m, tr.states[k].t), 1.0, 1e-9);
    // composite Simpson on a fine grid
    const int n = 2000;
    double fine = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      fine += w * schwarzschild_profile(r0, m, static_cast<double>(i) / n);
    }
    fine /= 3.0 * n;
    EXPECT_NEAR(r.target / fine, 1.0, 1e-4);
    EXPECT_GT(r.target, previous);
    previous = r.target;
  }
}

TEST(MetricChain, FlatAndSchwarzschildG3AgreeAtZeroMass) {
  const auto tr = ode_trace(AmbientMetric::euclidean(), 1.0, 0.5);
  const auto set = assemble_blocks(tr, 0.0, tr.r0);
  for (std::size_t k = 0; k < set.times.size(); ++k)
    EXPECT_EQ(set[BlockKind::G3Flat].lapse_sq[k], set[BlockKind::G3Schwarz].lapse_sq[k]);
  EXPECT_THROW(assemble_blocks(tr, 0.5, 1.0), MetricChainError);
}

TEST(MetricChain, DistanceIsSymmetricAndZeroOnDiagonal) {
  const auto tr = pde_trace(AmbientMetric::schwarzschild(0.1), 2.0, 0.05, 0.5);
  const auto set = assemble_blocks(tr, 0.1, tr.r0);
  const auto norm = BlockNorm::of(set[BlockKind::Delta]);
  for (auto a : {BlockKind::HatG, BlockKind::G2, BlockKind::Gs}) {
    EXPECT_EQ(l2_block_distance(set, set[a], set[a], norm, VolumeForm::Delta), 0.0);
    for (auto b : {BlockKind::G1, BlockKind::G3Flat, BlockKind::Delta})
      EXPECT_DOUBLE_EQ(l2_block_distance(set, set[a], set[b], norm, VolumeForm::HatG),
                       l2_block_distance(set, set[b], set[a], norm, VolumeForm::HatG));
  }
}

TEST(MetricChain, PerturbedFlowChain) {
  const double m = 0.1;
  const auto tr = pde_trace(AmbientMetric::schwarzschild(m), 2.0, 0.05, 0.5);
  const auto set = assemble_blocks(tr, m, tr.r0);
  EXPECT_LT(set.reparam.max_relative_jacobian_error(), 1e-5);
  EXPECT_GT(set.reparam.min_jacobian(), 0.0);
  // the reparameterized delta volume carries the area of the flow surfaces
  for (std::size_t k = 0; k < set.times.size(); ++k) {
    const double s = tr.r0 * std::exp(set.times[k] / 2.0);
    double vol = 0.0;
    for (std::size_t n = 0; n < set.grid().size(); ++n) vol += set.delta_volume[k][n] * set.grid().weight(n);
    EXPECT_NEAR(vol / (0.5 * s * s * s * 4.0 * kPi), 1.0, 1e-6);
  }
  for (auto sc : {Scenario::Pmt, Scenario::Rpi}) {
    const auto r = chain_report(set, sc);
    EXPECT_TRUE(r.triangle_ok);
    EXPECT_GT(r.target, 0.0);
    EXPECT_GT(r.hat_g1, 0.0);
    EXPECT_GT(r.g1_g2, 0.0);
  }
}

TEST(MetricChain, RoundnessAndWarpedCurvature) {
  const auto tr = ode_trace(AmbientMetric::schwarzschild(0.3), 2.0, 1.0);
  for (double d : roundness_deficit_series(tr, tr.r0)) EXPECT_LE(d, 1e-8);
  const double r0 = 1.5;
  for (double t : {0.0, 0.4, 1.0}) {
    const double s2 = r0 * r0 * std::exp(t);
    EXPECT_DOUBLE_EQ(warped_scalar_curvature(1.0 / (r0 * r0), r0, t), 0.0);
    EXPECT_NEAR(warped_scalar_curvature(2.0 / (r0 * r0), r0, t), 2.0 / s2, 1e-14);
    EXPECT_LT(warped_scalar_curvature(0.9 / (r0 * r0), r0, t), 0.0);
  }
  const auto eu = ode_trace(AmbientMetric::euclidean(), r0, 0.5);
  for (const auto& row : warped_scalar_curvature(eu, r0))
    for (double v : row) EXPECT_NEAR(v, 0.0, 1e-10);
}
