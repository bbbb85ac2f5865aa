#include "apde/kinetic.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "apde/gallery.hpp"

namespace {

using apde::Field;
using apde::GridSpec;
using apde::Model;
using apde::SolverConfig;
using apde::SphereDirection;
using apde::Trajectory;

TEST(Chi, DefiningCases) {
  EXPECT_EQ(apde::chi(1.0, 2.0), 1);
  EXPECT_EQ(apde::chi(-0.5, -1.0), -1);
  EXPECT_EQ(apde::chi(3.0, 2.0), 0);
  EXPECT_EQ(apde::chi(0.0, 2.0), 0);   // boundaries excluded
  EXPECT_EQ(apde::chi(2.0, 2.0), 0);
}

TEST(Chi, OddInThePair) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double xi = v(rng), u = v(rng);
    EXPECT_EQ(apde::chi(xi, u), -apde::chi(-xi, -u));
  }
}

TEST(ChiMoments, ZeroFieldIsExact) {
  Field f(GridSpec(1, {1.0}, {8}), 0.0);
  auto r = apde::chi_moment_check(f, 256, 1.0);
  EXPECT_EQ(r.max_zeroth_residual, 0.0);
  EXPECT_EQ(r.max_first_residual, 0.0);
}

TEST(ChiMoments, SingleStateAnalyticValues) {
  // u = 2 with M = 2: int chi = 2 and int xi chi = 2 exactly.
  Field f(GridSpec(1, {1.0}, {4}), 2.0);
  auto r = apde::chi_moment_check(f, 1024, 2.0);
  EXPECT_LE(r.max_zeroth_residual, r.bound);
  EXPECT_LE(r.max_first_residual, r.bound);
  EXPECT_NEAR(r.bound, 4.0 / 1024.0, 1e-15);
}

TEST(ChiMoments, RandomStatesStayWithinBound) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  GridSpec grid(1, {1.0}, {1000});
  Field f(grid, 0.0);
  for (double& x : f.values) x = v(rng);
  auto r = apde::chi_moment_check(f, 1024, 1.0);
  EXPECT_LE(r.max_zeroth_residual, 2.0 / 1024.0);
  EXPECT_LE(r.max_first_residual, 2.0 / 1024.0);
}

TEST(ChiMoments, ValidatesInputs) {
  Field f(GridSpec(1, {1.0}, {8}), 0.0);
  EXPECT_THROW((void)apde::chi_moment_check(f, 32, 1.0), std::invalid_argument);
}

TEST(DissipationBudget, ConstantRunHasZeroBudget) {
  SolverConfig cfg{apde::gallery::burgers_1d(), GridSpec(1, {1.0}, {32})};
  cfg.end_time = 0.2;
  apde::APSignal sig(1);
  sig.add_constant(0.5);
  auto d = apde::dissipation_budget(apde::run(cfg, sig));
  EXPECT_EQ(d.cumulative_budget, 0.0);
  EXPECT_TRUE(d.steps_nonnegative);
  EXPECT_TRUE(d.within_bound);
}

TEST(DissipationBudget, IdentityAndBoundOnBurgersRun) {
  Model burgers = apde::gallery::burgers_1d(0.5);
  SolverConfig cfg{burgers, GridSpec(1, {1.0}, {256})};
  cfg.end_time = 1.0;
  cfg.field_stride = 64;
  Trajectory traj = apde::run(cfg, apde::gallery::sine_1d(0.5, 1.0));
  auto d = apde::dissipation_budget(traj);
  // Identity against the series, re-verified from the stored snapshots.
  EXPECT_DOUBLE_EQ(
      d.cumulative_budget,
      0.5 * (traj.second_moments.front() - traj.second_moments.back()));
  EXPECT_NEAR(traj.second_moments.front(), traj.snapshots.front().second_moment(),
              1e-15);
  EXPECT_NEAR(traj.second_moments.back(), traj.snapshots.back().second_moment(),
              1e-15);
  EXPECT_TRUE(d.steps_nonnegative);
  EXPECT_GT(d.cumulative_budget, 0.0);
  EXPECT_LE(d.cumulative_budget, 0.125 + 1e-12);  // half of M^2 with M = 0.5
  double sum = 0.0;
  for (double s : d.dissipation_per_step) sum += s;
  EXPECT_NEAR(sum, d.cumulative_budget, 1e-10);
}

TEST(MultiplierProbe, ZeroDirectionGivesInverseSqrtEll) {
  Model burgers = apde::gallery::burgers_1d();
  auto p = apde::multiplier_probe(burgers, 0.0, {0.0}, 1.0, 512);
  EXPECT_DOUBLE_EQ(p.sup_m, 1.0);
  EXPECT_NEAR(p.int_m2, 2.0, 1e-12);  // |m| = 1 across [-1, 1]
}

TEST(MultiplierProbe, SupBoundedByInverseSqrtEll) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  for (const Model& m : apde::gallery::all_models()) {
    for (int trial = 0; trial < 20; ++trial) {
      double ell = std::pow(10.0, -4.0 * (rng() % 1000) / 1000.0);
      std::vector<double> kappa(m.dims());
      for (double& k : kappa) k = v(rng);
      auto p = apde::multiplier_probe(m, v(rng), kappa, ell, 256);
      EXPECT_LE(p.sup_m, 1.0 / std::sqrt(ell) + 1e-12) << m.name();
    }
  }
}

TEST(MultiplierProbe, SupMonotoneNonIncreasingInEll) {
  Model m = apde::gallery::degenerate_diffusion_1d();
  double prev = std::numeric_limits<double>::infinity();
  for (double ell : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    // increasing ell must not increase sup |m|
    auto p = apde::multiplier_probe(m, 0.1, {0.7}, ell, 512);
    EXPECT_LE(p.sup_m, prev + 1e-15);
    prev = p.sup_m;
  }
}

// Pointwise the multiplier obeys ell |m|^2 <= integrand of the
// non-degeneracy functional; checked on the grid and at integral level.
TEST(MultiplierProbe, DominatedByOmegaIntegrand) {
  for (const Model& m : apde::gallery::all_models()) {
    auto dirs = apde::l1_sphere_directions(m.dims(), 1.0, 40, 9);
    for (double ell : {0.04, 0.01}) {
      for (const auto& dir : dirs) {
        const int K = 1024;
        const double M = m.state_bound();
        double sq = std::sqrt(ell);
        for (int j = 0; j < K; ++j) {
          double xi = -M + 2.0 * M * j / (K - 1);
          double x = dir.tau + m.flux_derivative_dot(xi, dir.kappa);
          double y = m.diffusion_quadratic_form(xi, dir.kappa);
          double lhs = ell / ((sq + y) * (sq + y) + x * x);
          double rhs = ell / (ell + x * x + y * y);
          EXPECT_LE(lhs, rhs + 1e-15);
        }
        auto p = apde::multiplier_probe(m, dir.tau, dir.kappa, ell, K);
        double omega = apde::omega_delta(m, 1.0, ell, 40, 4096, 9).value;
        EXPECT_LE(ell * p.int_m2, omega * (1.0 + 1e-6) + 1e-12) << m.name();
      }
    }
  }
}

TEST(TimeTruncation, DefiningValues) {
  EXPECT_EQ(apde::time_truncation(1.0, 0.5), 1.0);
  EXPECT_EQ(apde::time_truncation(1.0, 1.5), 0.5);
  EXPECT_EQ(apde::time_truncation(1.0, 3.0), 0.0);
}

TEST(TimeTruncation, ShapeProperties) {
  const double B = 2.0;
  double prev = apde::time_truncation(B, 0.0);
  EXPECT_EQ(prev, 1.0);
  for (double t = 0.0; t <= 5.0; t += 0.01) {
    double v = apde::time_truncation(B, t);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v, apde::time_truncation(B, -t));              // even
    EXPECT_LE(std::abs(v - prev), 0.01 / B + 1e-12);         // 1/B-Lipschitz
    prev = v;
  }
  EXPECT_EQ(apde::time_truncation(B, 2.0 * B), 0.0);
  EXPECT_EQ(apde::time_truncation(B, 2.0 * B + 0.1), 0.0);
}

}  // namespace
