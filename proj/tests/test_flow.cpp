#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "imcf/flow.hpp"
#include "imcf/spherical_harmonics.hpp"

using namespace imcf;

namespace {

FlowConfig pde_config(double T, double dt_out) {
  FlowConfig c;
  c.mode = FlowMode::PdeGraph;
  c.T = T;
  c.dt_out = dt_out;
  return c;
}

}  // namespace

TEST(Flow, OdeSphereRadiusLaw) {
  auto grid = build_grid(12, 24);
  const auto amb = AmbientMetric::schwarzschild(1.0);
  FlowConfig c;
  c.mode = FlowMode::OdeRotsym;
  c.T = 1.0;
  c.dt_out = 0.25;
  const auto tr = run_flow(amb, Surface::sphere(grid, 5.0), c);
  ASSERT_EQ(tr.size(), 5u);
  for (const auto& st : tr.states) {
    EXPECT_NEAR(st.rho[0], 5.0 * std::exp(0.5 * st.t), 1e-12);
    EXPECT_NEAR(st.area, 4.0 * std::numbers::pi * 25.0 * std::exp(st.t), 1e-9 * st.area);
  }
}

TEST(Flow, OdeRejectsPerturbedAmbient) {
  auto grid = build_grid(12, 24);
  const auto amb = AmbientMetric::perturbed(AmbientMetric::schwarzschild(1.0), {1e-3});
  FlowConfig c;
  c.mode = FlowMode::OdeRotsym;
  EXPECT_THROW(run_flow(amb, Surface::sphere(grid, 5.0), c), FlowError);
}

TEST(Flow, PdeSphereMatchesOdeEuclidean) {
  auto grid = build_grid(12, 24);
  const auto tr = run_flow(AmbientMetric::euclidean(), Surface::sphere(grid, 1.0), pde_config(0.5, 0.25));
  ASSERT_FALSE(tr.aborted) << tr.abort_reason;
  for (const auto& st : tr.states)
    for (double r : st.rho.values) EXPECT_NEAR(r, std::exp(0.5 * st.t), 1e-6);
}

TEST(Flow, PdeSphereMatchesOdeSchwarzschild) {
  auto grid = build_grid(12, 24);
  const auto tr = run_flow(AmbientMetric::schwarzschild(1.0), Surface::sphere(grid, 4.0), pde_config(0.5, 0.25));
  ASSERT_FALSE(tr.aborted) << tr.abort_reason;
  for (const auto& st : tr.states)
    for (double r : st.rho.values) EXPECT_NEAR(r / (4.0 * std::exp(0.5 * st.t)), 1.0, 1e-6);
}

TEST(Flow, AreaGrowsExponentiallyForGraphs) {
  auto grid = build_grid(16, 32);
  std::vector<double> rho(grid->size());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const int i = grid->row_of(n), j = grid->col_of(n);
    rho[n] = 1.0 + 0.1 * real_ylm(2, 1, grid->theta(i), grid->phi(j)).value;
  }
  const auto tr = run_flow(AmbientMetric::euclidean(), Surface::graph(grid, rho), pde_config(0.4, 0.1));
  ASSERT_FALSE(tr.aborted) << tr.abort_reason;
  const double a0 = tr.states.front().area;
  for (const auto& st : tr.states) EXPECT_NEAR(st.area / (a0 * std::exp(st.t)), 1.0, 2e-4);
}

TEST(Flow, GraphBecomesRounder) {
  auto grid = build_grid(16, 32);
  std::vector<double> rho(grid->size());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const int i = grid->row_of(n), j = grid->col_of(n);
    rho[n] = 1.0 + 0.1 * real_ylm(2, 0, grid->theta(i), grid->phi(j)).value;
  }
  const auto tr = run_flow(AmbientMetric::euclidean(), Surface::graph(grid, rho), pde_config(1.0, 0.5));
  ASSERT_FALSE(tr.aborted) << tr.abort_reason;
  auto spread = [](const FlowState& st) {
    double lo = 1e300, hi = 0.0;
    for (double h : st.H.values) lo = std::min(lo, h), hi = std::max(hi, h);
    return (hi - lo) / hi;
  };
  EXPECT_LT(spread(tr.states.back()), 0.7 * spread(tr.states.front()));
}

TEST(Flow, ClassViolationRecordedOrAborted) {
  auto grid = build_grid(12, 24);
  FlowConfig c = pde_config(0.5, 0.25);
  c.bounds.H1 = 1.5;  // the unit sphere has H = 2
  auto tr = run_flow(AmbientMetric::euclidean(), Surface::sphere(grid, 1.0), c);
  EXPECT_FALSE(tr.class_violations.empty());
  EXPECT_EQ(tr.class_violations.front().bound, "H1");
  EXPECT_FALSE(tr.aborted);
  EXPECT_EQ(tr.size(), 3u);
  c.policy = ViolationPolicy::Abort;
  tr = run_flow(AmbientMetric::euclidean(), Surface::sphere(grid, 1.0), c);
  EXPECT_TRUE(tr.aborted);
  EXPECT_EQ(tr.size(), 1u);
}

TEST(Flow, RejectsBadOutputSpacing) {
  auto grid = build_grid(12, 24);
  EXPECT_THROW(run_flow(AmbientMetric::euclidean(), Surface::sphere(grid, 1.0), pde_config(1.0, 0.3)),
               std::invalid_argument);
}

TEST(Flow, HeunAndChebyshevAgree) {
  auto grid = build_grid(12, 24);
  std::vector<double> rho(grid->size());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const int i = grid->row_of(n), j = grid->col_of(n);
    rho[n] = 3.0 * (1.0 + 0.05 * real_ylm(2, 2, grid->theta(i), grid->phi(j)).value);
  }
  const auto amb = AmbientMetric::schwarzschild(0.5);
  FlowConfig a = pde_config(0.2, 0.1), b = a;
  b.integrator = Integrator::Heun;
  const auto ta = run_flow(amb, Surface::graph(grid, rho), a);
  const auto tb = run_flow(amb, Surface::graph(grid, rho), b);
  ASSERT_FALSE(ta.aborted || tb.aborted);
  EXPECT_GT(tb.substeps, ta.substeps);
  for (std::size_t n = 0; n < grid->size(); ++n)
    EXPECT_NEAR(ta.states.back().rho[n], tb.states.back().rho[n], 1e-6);
}

TEST(Flow, ChebyshevTableMatchesTrig) {
  const double x = 0.3;
  const auto c = chebyshev_table(6, x);
  for (int j = 0; j <= 6; ++j) EXPECT_NEAR(c[j].T, std::cos(j * std::acos(x)), 1e-13);
  // T_j'(1) = j^2, T_j''(1) = j^2 (j^2 - 1) / 3
  const auto d = chebyshev_table(5, 1.0);
  EXPECT_NEAR(d[5].dT, 25.0, 1e-12);
  EXPECT_NEAR(d[5].d2T, 25.0 * 24.0 / 3.0, 1e-10);
}
