#include "apde/model.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "apde/gallery.hpp"

namespace {

using apde::DegeneracyReport;
using apde::Model;
using apde::ModelSpec;
using apde::Polynomial;
using apde::SphereDirection;

ModelSpec burgers_spec() {
  ModelSpec s;
  s.dims = 1;
  s.flux = {Polynomial({0.0, 0.0, 0.5})};
  s.diffusion_primitive = {{Polynomial()}};
  s.sqrt_factors = {{Polynomial()}};
  s.state_bound = 1.0;
  s.name = "burgers1d";
  return s;
}

TEST(Validate, AcceptsGallery) {
  EXPECT_NO_THROW((void)apde::gallery::burgers_1d());
  EXPECT_NO_THROW((void)apde::gallery::linear_advection_1d());
  EXPECT_NO_THROW((void)apde::gallery::degenerate_diffusion_1d());
  EXPECT_NO_THROW((void)apde::gallery::zero_model_1d());
  EXPECT_NO_THROW((void)apde::gallery::anisotropic_2d());
}

TEST(Validate, RejectsNegativeDiffusion) {
  ModelSpec s = burgers_spec();
  s.diffusion_primitive = {{Polynomial({0.0, -1.0})}};  // A = -u, A' = -1
  s.sqrt_factors = {{Polynomial()}};
  EXPECT_THROW((void)Model::validate(s), std::invalid_argument);
}

TEST(Validate, CubicPrimitiveWithLinearSqrtFactor) {
  ModelSpec s = burgers_spec();
  s.flux = {Polynomial()};
  s.diffusion_primitive = {{Polynomial({0.0, 0.0, 0.0, 1.0 / 3.0})}};
  s.sqrt_factors = {{Polynomial({0.0, 1.0})}};  // sigma = u, sigma^2 = u^2 = A'
  EXPECT_NO_THROW((void)Model::validate(s));
}

TEST(Validate, RejectsSqrtFactorMismatch) {
  ModelSpec s = burgers_spec();
  s.diffusion_primitive = {{Polynomial({0.0, 0.0, 0.0, 1.0 / 3.0})}};
  s.sqrt_factors = {{Polynomial({0.0, 2.0})}};  // sigma^2 = 4u^2 != u^2
  EXPECT_THROW((void)Model::validate(s), std::invalid_argument);
}

TEST(Validate, RejectsAsymmetricPrimitive) {
  ModelSpec s;
  s.dims = 2;
  s.flux = {Polynomial(), Polynomial()};
  s.diffusion_primitive = {{Polynomial({0.0, 1.0}), Polynomial({0.0, 0.5})},
                           {Polynomial(), Polynomial({0.0, 1.0})}};
  s.sqrt_factors = {{Polynomial({1.0}), Polynomial()},
                    {Polynomial(), Polynomial({1.0})}};
  s.state_bound = 1.0;
  EXPECT_THROW((void)Model::validate(s), std::invalid_argument);
}

TEST(Beta, PolynomialAntiderivatives) {
  ModelSpec s = burgers_spec();
  s.flux = {Polynomial()};
  s.diffusion_primitive = {{Polynomial({0.0, 0.0, 0.0, 1.0 / 3.0})}};
  s.sqrt_factors = {{Polynomial({0.0, 1.0})}};
  s.state_bound = 2.0;
  Model m = Model::validate(s);
  EXPECT_NEAR(m.beta(0, 0, 2.0), 2.0, 1e-14);  // int_0^2 v dv
  EXPECT_EQ(m.beta(0, 0, 0.0), 0.0);
  EXPECT_THROW((void)m.beta(0, 0, 2.5), std::out_of_range);

  Model zero = apde::gallery::zero_model_1d();
  EXPECT_EQ(zero.beta(0, 0, 0.5), 0.0);
}

TEST(Beta, CubicFactor) {
  ModelSpec s = burgers_spec();
  s.flux = {Polynomial()};
  // sigma = 3u^2, A' = 9u^4, A = 9u^5/5; beta = u^3
  s.diffusion_primitive = {{Polynomial({0.0, 0.0, 0.0, 0.0, 0.0, 9.0 / 5.0})}};
  s.sqrt_factors = {{Polynomial({0.0, 0.0, 3.0})}};
  Model m = Model::validate(s);
  EXPECT_NEAR(m.beta(0, 0, -1.0), -1.0, 1e-14);
}

TEST(DiagonalSqrtFactors, EmitsMonomialRoots) {
  // A = u^3/3 (A' = u^2 -> sigma = u) alongside A = u (A' = 1 -> sigma = 1).
  std::vector<std::vector<Polynomial>> A = {
      {Polynomial({0.0, 0.0, 0.0, 1.0 / 3.0}), Polynomial()},
      {Polynomial(), Polynomial({0.0, 1.0})}};
  auto sigma = apde::diagonal_sqrt_factors(A);
  EXPECT_TRUE(sigma[0][0].almost_equal(Polynomial({0.0, 1.0}), 1e-15));
  EXPECT_TRUE(sigma[1][1].almost_equal(Polynomial({1.0}), 1e-15));
  EXPECT_TRUE(sigma[0][1].is_zero());

  ModelSpec s;
  s.dims = 2;
  s.flux = {Polynomial(), Polynomial()};
  s.diffusion_primitive = A;
  s.sqrt_factors = sigma;
  s.state_bound = 1.0;
  EXPECT_NO_THROW((void)Model::validate(s));
}

TEST(DiagonalSqrtFactors, RejectsUnsupportedShapes) {
  // Odd power: A' = u.
  EXPECT_THROW(
      (void)apde::diagonal_sqrt_factors({{Polynomial({0.0, 0.0, 0.5})}}),
      std::invalid_argument);
  // Negative coefficient: A' = -u^2.
  EXPECT_THROW((void)apde::diagonal_sqrt_factors(
                   {{Polynomial({0.0, 0.0, 0.0, -1.0 / 3.0})}}),
               std::invalid_argument);
  // Off-diagonal entry present.
  EXPECT_THROW((void)apde::diagonal_sqrt_factors(
                   {{Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0})},
                    {Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0})}}),
               std::invalid_argument);
}

// Closed-form cross-check of the quadrature: for Burgers at (tau, kappa) =
// (0, 1) the inner integral is int_{-1}^{1} ell/(ell + xi^2) dxi
// = 2 sqrt(ell) atan(1/sqrt(ell)).
TEST(OmegaIntegral, BurgersClosedForm) {
  Model burgers = apde::gallery::burgers_1d();
  SphereDirection dir{0.0, {1.0}};
  double ell = 0.01;
  double got = apde::omega_integrand_integral(burgers, dir, ell, 4096);
  double expected = 2.0 * std::sqrt(ell) * std::atan(1.0 / std::sqrt(ell));
  EXPECT_NEAR(expected, 0.2942256, 1e-6);
  EXPECT_NEAR(got, expected, 1e-6);
}

// A degenerate direction saturates the integrand at 1, so the integral is
// the full state-interval length 2M.
TEST(OmegaIntegral, DegenerateDirectionsSaturate) {
  Model advection = apde::gallery::linear_advection_1d(2.0);
  double delta = 0.7;
  SphereDirection dir{-2.0 * delta / 3.0, {delta / 3.0}};  // tau + c*kappa = 0
  for (double ell : {1.0, 1e-2, 1e-4})
    EXPECT_NEAR(apde::omega_integrand_integral(advection, dir, ell, 4096), 2.0,
                1e-12);

  Model zero = apde::gallery::zero_model_1d();
  SphereDirection dz{0.0, {0.5}};
  EXPECT_NEAR(apde::omega_integrand_integral(zero, dz, 1e-3, 4096), 2.0, 1e-12);
}

TEST(OmegaIntegral, BoundedByTwoM) {
  Model m = apde::gallery::degenerate_diffusion_1d();
  for (double ell : {1e-1, 1e-3}) {
    auto v = apde::omega_delta(m, 2.5, ell, 180, 1024, 7);
    EXPECT_GT(v.value, 0.0);
    EXPECT_LE(v.value, 2.0 + 1e-12);
  }
}

TEST(OmegaSchedule, MonotoneInEll) {
  for (const Model& m :
       {apde::gallery::burgers_1d(), apde::gallery::degenerate_diffusion_1d(),
        apde::gallery::linear_advection_1d()}) {
    auto values =
        apde::omega_schedule(m, 1.0, {1e-1, 1e-2, 1e-3, 1e-4}, 180, 1024, 3);
    for (std::size_t i = 1; i < values.size(); ++i)
      EXPECT_LE(values[i].value, values[i - 1].value + 1e-12) << m.name();
  }
}

TEST(OmegaDelta, NonIncreasingInDelta) {
  for (const Model& m :
       {apde::gallery::burgers_1d(), apde::gallery::degenerate_diffusion_1d()}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {0.5, 1.0, 2.0, 4.0}) {
      double v = apde::omega_delta(m, delta, 1e-2, 180, 1024, 3).value;
      EXPECT_LE(v, prev + 1e-9) << m.name() << " delta=" << delta;
      prev = v;
    }
  }
}

TEST(OmegaDelta, QuadratureDoublingIsConverged) {
  for (const Model& m : apde::gallery::all_models()) {
    if (m.dims() != 1) continue;
    for (double ell : {1e-2, 1e-4}) {
      double coarse = apde::omega_delta(m, 2.5, ell, 90, 4096, 5).value;
      double fine = apde::omega_delta(m, 2.5, ell, 90, 8192, 5).value;
      EXPECT_NEAR(coarse, fine, 1e-6) << m.name() << " ell=" << ell;
    }
  }
}

// At delta = 0.5 the sup sits near (tau, kappa) ~ (-delta M, delta)/(1 + M)
// where the integrand peak is interior, so omega ~ pi sqrt(ell) (1 + M) /
// delta: the default threshold is crossed around ell ~ 1e-6, not 1e-4.
TEST(Verdict, BurgersNondegenerateAtHalfDelta) {
  auto rep = apde::nondegeneracy_verdict(
      apde::gallery::burgers_1d(), 0.5, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  EXPECT_EQ(rep.verdict, DegeneracyReport::Verdict::nondegenerate);
  for (std::size_t i = 1; i < rep.omega_values.size(); ++i)
    EXPECT_LE(rep.omega_values[i], rep.omega_values[i - 1] + 1e-12);
}

TEST(Verdict, GalleryClassifiesAtDefaults) {
  const double delta = 2.5;
  const std::vector<double> schedule{1e-1, 1e-2, 1e-3, 1e-4};
  EXPECT_EQ(apde::nondegeneracy_verdict(apde::gallery::burgers_1d(), delta,
                                        schedule)
                .verdict,
            DegeneracyReport::Verdict::nondegenerate);
  EXPECT_EQ(apde::nondegeneracy_verdict(apde::gallery::degenerate_diffusion_1d(),
                                        delta, schedule)
                .verdict,
            DegeneracyReport::Verdict::nondegenerate);
  EXPECT_EQ(apde::nondegeneracy_verdict(apde::gallery::linear_advection_1d(),
                                        delta, schedule)
                .verdict,
            DegeneracyReport::Verdict::degenerate);
  EXPECT_EQ(
      apde::nondegeneracy_verdict(apde::gallery::zero_model_1d(), delta, schedule)
          .verdict,
      DegeneracyReport::Verdict::degenerate);
}

TEST(Verdict, ScheduleValidation) {
  Model m = apde::gallery::burgers_1d();
  EXPECT_THROW((void)apde::nondegeneracy_verdict(m, 0.5, {1e-1, 1e-2}),
               std::invalid_argument);
  EXPECT_THROW((void)apde::nondegeneracy_verdict(m, 0.5, {1e-2, 1e-1, 1e-3}),
               std::invalid_argument);
}

TEST(Verdict, MeasureConditionIsReported) {
  auto rep = apde::nondegeneracy_verdict(apde::gallery::burgers_1d(), 0.5,
                                         {1e-1, 1e-2, 1e-3}, {}, 90, 1024, 1);
  EXPECT_EQ(rep.measure_condition.size(), rep.measure_directions.size());
  for (double v : rep.measure_condition) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 2.0);
  }
}

}  // namespace
