#pragma once

// Kinetic-formulation utilities: the chi function and its moment
// identities, the entropy dissipation budget of a run, the ell-parametrized
// multiplier probe, and the trapezoidal time-truncation profile.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "apde/grid.hpp"
#include "apde/model.hpp"
#include "apde/solver.hpp"

namespace apde {

/// chi(xi; u): 1 for 0 < xi < u, -1 for u < xi < 0, 0 otherwise.
inline int chi(double xi, double u) {
  if (0.0 < xi && xi < u) return 1;
  if (u < xi && xi < 0.0) return -1;
  return 0;
}

struct ChiMomentResult {
  int xi_nodes = 0;
  double max_zeroth_residual = 0.0;  // | int chi dxi - u |
  double max_first_residual = 0.0;   // | int xi chi dxi - u^2/2 |
  double bound = 0.0;                // 2M/K
};

/// Midpoint quadrature of the chi moments on a uniform K-node grid over
/// [-M, M], per cell; residuals against u and u^2/2 are bounded by 2M/K.
inline ChiMomentResult chi_moment_check(const Field& field, int K,
                                        double state_bound) {
  if (K < 64) throw std::invalid_argument("chi_moment_check: K must be >= 64");
  if (!(state_bound > 0.0))
    throw std::invalid_argument("chi_moment_check: state bound must be > 0");
  const double M = state_bound;
  const double h = 2.0 * M / static_cast<double>(K);
  ChiMomentResult r;
  r.xi_nodes = K;
  r.bound = 2.0 * M / static_cast<double>(K);
  for (double u : field.values) {
    double m0 = 0.0, m1 = 0.0;
    for (int j = 0; j < K; ++j) {
      double xi = -M + (static_cast<double>(j) + 0.5) * h;
      int c = chi(xi, u);
      if (c != 0) {
        m0 += h * c;
        m1 += h * xi * c;
      }
    }
    r.max_zeroth_residual = std::max(r.max_zeroth_residual, std::abs(m0 - u));
    r.max_first_residual = std::max(r.max_first_residual, std::abs(m1 - 0.5 * u * u));
  }
  return r;
}

struct KineticDiagnostics {
  std::vector<double> dissipation_per_step;  // 0.5 * (I(t_n) - I(t_{n+1}))
  double cumulative_budget = 0.0;            // 0.5 * (I(0) - I(T))
  double budget_bound = 0.0;                 // 0.5 * M^2
  double worst_negative_step = 0.0;
  bool steps_nonnegative = true;             // up to the 1e-12 roundoff floor
  bool within_bound = true;
};

/// Entropy dissipation budget from the second-moment series of a run.
inline KineticDiagnostics dissipation_budget(const Trajectory& traj) {
  if (traj.second_moments.size() < 1)
    throw std::invalid_argument("dissipation_budget: empty trajectory");
  KineticDiagnostics d;
  const auto& i2 = traj.second_moments;
  for (std::size_t n = 0; n + 1 < i2.size(); ++n) {
    double step = 0.5 * (i2[n] - i2[n + 1]);
    d.dissipation_per_step.push_back(step);
    if (step < d.worst_negative_step) d.worst_negative_step = step;
  }
  d.cumulative_budget = 0.5 * (i2.front() - i2.back());
  double M = traj.config.model.state_bound();
  d.budget_bound = 0.5 * M * M;
  d.steps_nonnegative = d.worst_negative_step >= -1e-12;
  d.within_bound = d.cumulative_budget <= d.budget_bound + 1e-12;
  return d;
}

struct MultiplierProbe {
  double sup_m = 0.0;
  double int_m2 = 0.0;
};

/// Evaluates |m(xi)| = |sqrt(ell) + i(tau + a(xi).kappa) + kappa^T A'(xi)
/// kappa|^{-1} on an inclusive uniform K-node grid over [-M, M]; returns
/// the grid sup and the trapezoid integral of |m|^2.
inline MultiplierProbe multiplier_probe(const Model& model, double tau,
                                        const std::vector<double>& kappa,
                                        double ell, int K = 1024) {
  if (!(ell > 0.0)) throw std::invalid_argument("multiplier_probe: ell must be > 0");
  if (static_cast<int>(kappa.size()) != model.dims())
    throw std::invalid_argument("multiplier_probe: kappa dimension mismatch");
  if (K < 2) throw std::invalid_argument("multiplier_probe: K must be >= 2");
  const double M = model.state_bound();
  const double sq = std::sqrt(ell);
  const double h = 2.0 * M / static_cast<double>(K - 1);
  MultiplierProbe p;
  for (int j = 0; j < K; ++j) {
    double xi = -M + h * static_cast<double>(j);
    double x = tau + model.flux_derivative_dot(xi, kappa);
    double y = model.diffusion_quadratic_form(xi, kappa);
    double m2 = 1.0 / ((sq + y) * (sq + y) + x * x);
    p.sup_m = std::max(p.sup_m, std::sqrt(m2));
    double w = (j == 0 || j == K - 1) ? 0.5 * h : h;
    p.int_m2 += w * m2;
  }
  return p;
}

/// Trapezoidal cutoff: 1 on [-B, B], linear down to 0 on B <= |t| <= 2B.
inline double time_truncation(double B, double t) {
  if (!(B > 0.0)) throw std::invalid_argument("time_truncation: B must be > 0");
  double a = std::abs(t);
  if (a <= B) return 1.0;
  if (a >= 2.0 * B) return 0.0;
  return (2.0 * B - a) / B;
}

}  // namespace apde
