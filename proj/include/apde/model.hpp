#pragma once

// Constitutive model of the conservation law: polynomial flux components
// f_i, diffusion primitives A_ij (so the diffusion matrix is a_ij = A_ij'),
// user-supplied square-root factors sigma_ik with a_ij = sum_k s_ik s_jk,
// and a state bound M.  Everything downstream (Engquist-Osher splitting,
// stability bounds, the non-degeneracy functional) is derived here once,
// at validation time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apde/poly.hpp"

namespace apde {

struct ModelSpec {
  int dims = 1;
  std::vector<Polynomial> flux;                              // f_i, size d
  std::vector<std::vector<Polynomial>> diffusion_primitive;  // A_ij, d x d
  std::vector<std::vector<Polynomial>> sqrt_factors;         // sigma_ik, d x d
  double state_bound = 1.0;                                  // M
  std::string name;
};

namespace detail {

/// Smallest and largest eigenvalue of a small symmetric matrix via cyclic
/// Jacobi rotations.  Deterministic; adequate for d <= 4.
inline std::pair<double, double> symmetric_eigen_bounds(
    std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  if (n == 1) return {m[0][0], m[0][0]};
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (m[p][q] == 0.0) continue;
        double theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
  }
  double lo = m[0][0], hi = m[0][0];
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, m[i][i]);
    hi = std::max(hi, m[i][i]);
  }
  return {lo, hi};
}

}  // namespace detail

/// A validated model.  Construction checks the ModelSpec invariants and
/// caches the derived polynomials and bounds; all evaluation methods are
/// pure and cheap.
class Model {
 public:
  static constexpr int kValidationSamples = 1024;
  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kSqrtResidualTol = 1e-8;
  static constexpr double kPsdTol = -1e-10;

  static Model validate(ModelSpec spec) {
    const int d = spec.dims;
    if (d < 1) throw std::invalid_argument("ModelSpec: dims must be >= 1");
    if (!(spec.state_bound > 0.0))
      throw std::invalid_argument("ModelSpec: state bound M must be > 0");
    auto shape_ok = [&](const std::vector<std::vector<Polynomial>>& m) {
      if (static_cast<int>(m.size()) != d) return false;
      for (const auto& row : m)
        if (static_cast<int>(row.size()) != d) return false;
      return true;
    };
    if (static_cast<int>(spec.flux.size()) != d)
      throw std::invalid_argument("ModelSpec: flux must have one polynomial per axis");
    if (!shape_ok(spec.diffusion_primitive))
      throw std::invalid_argument("ModelSpec: diffusion primitive must be d x d");
    if (!shape_ok(spec.sqrt_factors))
      throw std::invalid_argument("ModelSpec: sqrt factors must be d x d");

    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (!spec.diffusion_primitive[i][j].almost_equal(
                spec.diffusion_primitive[j][i], kSymmetryTol))
          throw std::invalid_argument(
              "ModelSpec: diffusion primitive not symmetric at (" +
              std::to_string(i) + "," + std::to_string(j) + ")");

    Model m;
    m.spec_ = std::move(spec);
    m.flux_deriv_.reserve(d);
    for (int i = 0; i < d; ++i) m.flux_deriv_.push_back(m.spec_.flux[i].derivative());
    m.diffusion_.assign(d, std::vector<Polynomial>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        m.diffusion_[i][j] = m.spec_.diffusion_primitive[i][j].derivative();
    m.beta_.assign(d, std::vector<Polynomial>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        m.beta_[i][j] = m.spec_.sqrt_factors[i][j].antiderivative();

    const double M = m.spec_.state_bound;
    std::vector<std::vector<double>> a(d, std::vector<double>(d, 0.0));
    double max_radius = 0.0;
    std::vector<double> max_flux(d, 0.0);
    for (int s = 0; s < kValidationSamples; ++s) {
      double u = -M + 2.0 * M * static_cast<double>(s) /
                          static_cast<double>(kValidationSamples - 1);
      // sigma sigma^T must reproduce the diffusion matrix.
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double ss = 0.0;
          for (int k = 0; k < d; ++k)
            ss += m.spec_.sqrt_factors[i][k](u) * m.spec_.sqrt_factors[j][k](u);
          double target = m.diffusion_[i][j](u);
          if (std::abs(ss - target) > kSqrtResidualTol)
            throw std::invalid_argument(
                "ModelSpec: sigma*sigma^T differs from A' at (" +
                std::to_string(i) + "," + std::to_string(j) +
                "), u=" + std::to_string(u) +
                ", residual=" + std::to_string(std::abs(ss - target)));
          a[i][j] = target;
        }
      auto [lo, hi] = detail::symmetric_eigen_bounds(a);
      if (lo < kPsdTol)
        throw std::invalid_argument(
            "ModelSpec: diffusion matrix not positive semidefinite at u=" +
            std::to_string(u) + " (min eigenvalue " + std::to_string(lo) + ")");
      max_radius = std::max(max_radius, hi);
      for (int i = 0; i < d; ++i)
        max_flux[i] = std::max(max_flux[i], std::abs(m.flux_deriv_[i](u)));
    }
    m.max_diffusion_radius_ = max_radius;
    m.max_flux_derivative_ = std::move(max_flux);

    m.diagonal_ = true;
    for (int i = 0; i < d && m.diagonal_; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j && !m.diffusion_[i][j].is_zero()) m.diagonal_ = false;

    m.eo_segments_.resize(d);
    for (int i = 0; i < d; ++i) m.build_eo_segments(i);
    return m;
  }

  const ModelSpec& spec() const { return spec_; }
  int dims() const { return spec_.dims; }
  double state_bound() const { return spec_.state_bound; }
  const std::string& name() const { return spec_.name; }

  const Polynomial& flux(int axis) const { return spec_.flux[axis]; }
  const Polynomial& flux_derivative(int axis) const { return flux_deriv_[axis]; }
  const Polynomial& diffusion(int i, int j) const { return diffusion_[i][j]; }
  const Polynomial& diffusion_primitive(int i, int j) const {
    return spec_.diffusion_primitive[i][j];
  }
  bool diffusion_is_diagonal() const { return diagonal_; }
  double max_flux_derivative(int axis) const { return max_flux_derivative_[axis]; }
  double max_diffusion_radius() const { return max_diffusion_radius_; }

  /// beta_ik(u) = int_0^u sigma_ik(v) dv, defined on [-M, M].
  double beta(int i, int k, double u) const {
    check_state(u, "beta");
    return beta_[i][k](u);
  }

  /// kappa^T A'(u) kappa.
  double diffusion_quadratic_form(double u, const std::vector<double>& kappa) const {
    double acc = 0.0;
    for (int i = 0; i < dims(); ++i)
      for (int j = 0; j < dims(); ++j)
        acc += kappa[i] * diffusion_[i][j](u) * kappa[j];
    return acc;
  }

  /// a(u) . kappa with a = f'.
  double flux_derivative_dot(double u, const std::vector<double>& kappa) const {
    double acc = 0.0;
    for (int i = 0; i < dims(); ++i) acc += flux_deriv_[i](u) * kappa[i];
    return acc;
  }

  /// int_0^u max(f_axis', 0) dv, exact piecewise polynomial integration
  /// from the cached segment table.
  double eo_positive_part(int axis, double u) const {
    check_state(u, "numerical flux");
    const EoSegment& s = find_segment(axis, u);
    return s.plus_sign ? s.plus_const + spec_.flux[axis](u) : s.plus_const;
  }

  /// int_0^u min(f_axis', 0) dv.
  double eo_negative_part(int axis, double u) const {
    check_state(u, "numerical flux");
    const EoSegment& s = find_segment(axis, u);
    return s.minus_sign ? s.minus_const + spec_.flux[axis](u) : s.minus_const;
  }

  /// True when the axis flux is constant, so its divergence vanishes.
  bool flux_is_constant(int axis) const { return flux_deriv_[axis].is_zero(); }

 private:
  Model() = default;

  // On each sign-constant segment of f' the Engquist-Osher parts are either
  // locally constant or f itself plus a constant; the table makes a flux
  // evaluation one Horner pass instead of a breakpoint walk.
  struct EoSegment {
    double upper;  // segment is (previous upper, upper]
    bool plus_sign;
    bool minus_sign;
    double plus_const;
    double minus_const;
  };

  void check_state(double u, const char* what) const {
    double M = spec_.state_bound;
    if (std::abs(u) > M * (1.0 + 1e-12) + 1e-12)
      throw std::out_of_range(std::string(what) + ": state " + std::to_string(u) +
                              " outside [-M, M], M=" + std::to_string(M));
  }

  const EoSegment& find_segment(int axis, double u) const {
    const auto& segs = eo_segments_[axis];
    for (const EoSegment& s : segs)
      if (u <= s.upper) return s;
    return segs.back();
  }

  void build_eo_segments(int axis) {
    const double M = spec_.state_bound;
    const Polynomial& f = spec_.flux[axis];
    const Polynomial& df = flux_deriv_[axis];
    std::vector<double> pts{-M, 0.0, M};
    for (double r : real_roots_in(df, -M, M))
      if (r > -M && r < M && r != 0.0) pts.push_back(r);
    std::sort(pts.begin(), pts.end());

    // Assemble segments in ascending order, then accumulate the integral
    // constants outward from 0 where both parts vanish.
    std::vector<EoSegment> segs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      double sgn = df(0.5 * (pts[i] + pts[i + 1]));
      segs.push_back(EoSegment{pts[i + 1], sgn > 0.0, sgn < 0.0, 0.0, 0.0});
    }
    std::size_t zero_index = 0;
    for (std::size_t i = 0; i < segs.size(); ++i)
      if (pts[i + 1] == 0.0) zero_index = i;  // segment ending at 0
    // Upward from 0: H(u) = H(lo) + sign * (f(u) - f(lo)).
    double hp = 0.0, hm = 0.0;
    for (std::size_t i = zero_index + 1; i < segs.size(); ++i) {
      double lo = pts[i];
      segs[i].plus_const = hp - (segs[i].plus_sign ? f(lo) : 0.0);
      segs[i].minus_const = hm - (segs[i].minus_sign ? f(lo) : 0.0);
      hp = segs[i].plus_const + (segs[i].plus_sign ? f(pts[i + 1]) : 0.0);
      hm = segs[i].minus_const + (segs[i].minus_sign ? f(pts[i + 1]) : 0.0);
    }
    // Downward from 0: H(u) = H(hi) + sign * (f(u) - f(hi)).
    hp = 0.0;
    hm = 0.0;
    for (std::size_t i = zero_index + 1; i-- > 0;) {
      double hi = pts[i + 1];
      segs[i].plus_const = hp - (segs[i].plus_sign ? f(hi) : 0.0);
      segs[i].minus_const = hm - (segs[i].minus_sign ? f(hi) : 0.0);
      hp = segs[i].plus_const + (segs[i].plus_sign ? f(pts[i]) : 0.0);
      hm = segs[i].minus_const + (segs[i].minus_sign ? f(pts[i]) : 0.0);
    }
    eo_segments_[axis] = std::move(segs);
  }

  ModelSpec spec_;
  std::vector<Polynomial> flux_deriv_;
  std::vector<std::vector<Polynomial>> diffusion_;
  std::vector<std::vector<Polynomial>> beta_;
  std::vector<std::vector<EoSegment>> eo_segments_;
  std::vector<double> max_flux_derivative_;
  double max_diffusion_radius_ = 0.0;
  bool diagonal_ = true;
};

/// Emits square-root factors for a diagonal diffusion primitive whose
/// derivative entries are single even powers with nonnegative coefficient:
/// A_ii' = c u^{2k} gives sigma_ii = sqrt(c) u^k.  Anything else (mixed
/// entries, odd powers, negative coefficients, multi-term derivatives) is
/// rejected; supply sigma by hand in those cases.
inline std::vector<std::vector<Polynomial>> diagonal_sqrt_factors(
    const std::vector<std::vector<Polynomial>>& diffusion_primitive) {
  const std::size_t d = diffusion_primitive.size();
  std::vector<std::vector<Polynomial>> sigma(d, std::vector<Polynomial>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (diffusion_primitive[i].size() != d)
      throw std::invalid_argument("diagonal_sqrt_factors: matrix must be d x d");
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      if (!diffusion_primitive[i][j].is_zero())
        throw std::invalid_argument(
            "diagonal_sqrt_factors: off-diagonal entry at (" + std::to_string(i) +
            "," + std::to_string(j) + ") is nonzero");
    }
    Polynomial deriv = diffusion_primitive[i][i].derivative();
    if (deriv.is_zero()) continue;
    const std::vector<double>& c = deriv.coeffs();
    int power = -1;
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (c[m] == 0.0) continue;
      if (power >= 0)
        throw std::invalid_argument(
            "diagonal_sqrt_factors: A'_{" + std::to_string(i) + std::to_string(i) +
            "} is not a single power");
      power = static_cast<int>(m);
    }
    if (power % 2 != 0 || c[power] < 0.0)
      throw std::invalid_argument(
          "diagonal_sqrt_factors: A'_{" + std::to_string(i) + std::to_string(i) +
          "} is not a nonnegative even power");
    std::vector<double> s(power / 2 + 1, 0.0);
    s.back() = std::sqrt(c[power]);
    sigma[i][i] = Polynomial(std::move(s));
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Non-degeneracy functional omega_delta(ell)
// ---------------------------------------------------------------------------

struct SphereDirection {
  double tau = 0.0;
  std::vector<double> kappa;
};

namespace detail {

inline double splitmix64_u01(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x = x ^ (x >> 31);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre polynomial.
inline const std::pair<std::array<double, 16>, std::array<double, 16>>&
gauss_legendre_16() {
  static const auto table = [] {
    std::array<double, 16> x{}, w{};
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return std::make_pair(x, w);
  }();
  return table;
}

/// Maps (s, t) in [0,1)^2 onto the unit l1 sphere in R^3 (octahedron).
inline std::array<double, 3> octahedron_point(double s, double t) {
  double a = 2.0 * s - 1.0;
  double b = 2.0 * t - 1.0;
  double x, y, z;
  if (std::abs(a) + std::abs(b) <= 1.0) {
    x = a;
    y = b;
    z = 1.0 - std::abs(a) - std::abs(b);
  } else {
    x = (a >= 0.0 ? 1.0 : -1.0) * (1.0 - std::abs(b));
    y = (b >= 0.0 ? 1.0 : -1.0) * (1.0 - std::abs(a));
    z = -(std::abs(a) + std::abs(b) - 1.0);
  }
  return {x, y, z};
}

inline SphereDirection circle_direction(double theta, double delta) {
  double c = std::cos(theta), s = std::sin(theta);
  double n1 = std::abs(c) + std::abs(s);
  SphereDirection d;
  d.tau = delta * c / n1;
  d.kappa = {delta * s / n1};
  return d;
}

}  // namespace detail

/// `count` directions on the l1 sphere |tau| + |kappa|_1 = delta in 1 + d
/// variables, from a seeded low-discrepancy sequence (uniform grid with a
/// seeded rotation).  For d = 2 the count is rounded up to a square.
inline std::vector<SphereDirection> l1_sphere_directions(int dims, double delta,
                                                         int count,
                                                         std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("l1_sphere_directions: count >= 1");
  std::vector<SphereDirection> dirs;
  if (dims == 1) {
    dirs.reserve(count);
    double off = detail::splitmix64_u01(seed);
    for (int j = 0; j < count; ++j) {
      double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) + off) /
                     static_cast<double>(count);
      dirs.push_back(detail::circle_direction(theta, delta));
    }
  } else if (dims == 2) {
    int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
    double off0 = detail::splitmix64_u01(seed);
    double off1 = detail::splitmix64_u01(seed ^ 0x5bf03635ULL);
    dirs.reserve(static_cast<std::size_t>(g) * g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        double s = (static_cast<double>(i) + off0) / g;
        double t = (static_cast<double>(j) + off1) / g;
        auto p = detail::octahedron_point(s - std::floor(s), t - std::floor(t));
        SphereDirection dir;
        dir.tau = delta * p[2];
        dir.kappa = {delta * p[0], delta * p[1]};
        dirs.push_back(std::move(dir));
      }
  } else {
    throw std::invalid_argument("l1_sphere_directions: dims must be 1 or 2");
  }
  return dirs;
}

/// Composite 16-point Gauss-Legendre evaluation of
///   int_{|xi| <= M} ell / (ell + |tau + a(xi).kappa|^2 + (kappa^T A'(xi) kappa)^2) dxi
/// with ~xi_nodes total nodes.
inline double omega_integrand_integral(const Model& m, const SphereDirection& dir,
                                       double ell, int xi_nodes = 4096) {
  if (!(ell > 0.0))
    throw std::invalid_argument("omega_integrand_integral: ell must be > 0");
  const double M = m.state_bound();
  const auto& [gx, gw] = detail::gauss_legendre_16();
  int panels = std::max(1, xi_nodes / 16);
  double h = 2.0 * M / static_cast<double>(panels);
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = -M + p * h;
    double mid = a + 0.5 * h;
    double half = 0.5 * h;
    double panel = 0.0;
    for (int q = 0; q < 16; ++q) {
      double xi = mid + half * gx[q];
      double conv = dir.tau + m.flux_derivative_dot(xi, dir.kappa);
      double diff = m.diffusion_quadratic_form(xi, dir.kappa);
      panel += gw[q] * (ell / (ell + conv * conv + diff * diff));
    }
    acc += half * panel;
  }
  return acc;
}

struct OmegaValue {
  double value = 0.0;
  SphereDirection argsup;
};

namespace detail {

inline int default_sphere_samples(int dims) { return dims == 1 ? 720 : 4096; }

/// Refinement candidates around the best base sample: a denser local scan
/// in the sphere parametrization (64 samples in 1+1 variables, 16x16 in
/// 2+1).  The sup is continuous in the direction, so one local pass around
/// the best coarse sample recovers it to grid resolution.
inline std::vector<SphereDirection> refine_directions(int dims, double delta,
                                                      int base_count,
                                                      std::uint64_t seed,
                                                      int best_index) {
  std::vector<SphereDirection> out;
  if (dims == 1) {
    double off = splitmix64_u01(seed);
    double theta0 = 2.0 * std::numbers::pi * (static_cast<double>(best_index) + off) /
                    static_cast<double>(base_count);
    double spread = 2.0 * std::numbers::pi / static_cast<double>(base_count);
    const int n = 64;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
      double theta = theta0 - spread +
                     2.0 * spread * static_cast<double>(j) / static_cast<double>(n - 1);
      out.push_back(circle_direction(theta, delta));
    }
  } else {
    int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(base_count))));
    double off0 = splitmix64_u01(seed);
    double off1 = splitmix64_u01(seed ^ 0x5bf03635ULL);
    int bi = best_index / g, bj = best_index % g;
    double s0 = (static_cast<double>(bi) + off0) / g;
    double t0 = (static_cast<double>(bj) + off1) / g;
    double spread = 1.0 / static_cast<double>(g);
    const int n = 16;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = s0 - spread + 2.0 * spread * static_cast<double>(i) / (n - 1);
        double t = t0 - spread + 2.0 * spread * static_cast<double>(j) / (n - 1);
        auto p = octahedron_point(s - std::floor(s), t - std::floor(t));
        SphereDirection dir;
        dir.tau = delta * p[2];
        dir.kappa = {delta * p[0], delta * p[1]};
        out.push_back(std::move(dir));
      }
  }
  return out;
}

}  // namespace detail

/// Sampled sup over the l1 sphere |tau| + |kappa|_1 = delta of the
/// integrand integral, with one local refinement pass around the best base
/// sample.  Ties break to the lowest index; fully deterministic given the
/// seed.
inline OmegaValue omega_delta(const Model& m, double delta, double ell,
                              int sphere_samples = 0, int xi_nodes = 4096,
                              std::uint64_t seed = 0) {
  if (!(delta > 0.0)) throw std::invalid_argument("omega_delta: delta must be > 0");
  int n = sphere_samples > 0 ? sphere_samples
                             : detail::default_sphere_samples(m.dims());
  auto base = l1_sphere_directions(m.dims(), delta, n, seed);
  OmegaValue best;
  best.value = -1.0;
  int best_index = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    double v = omega_integrand_integral(m, base[i], ell, xi_nodes);
    if (v > best.value) {
      best.value = v;
      best.argsup = base[i];
      best_index = static_cast<int>(i);
    }
  }
  for (const auto& dir :
       detail::refine_directions(m.dims(), delta, n, seed, best_index)) {
    double v = omega_integrand_integral(m, dir, ell, xi_nodes);
    if (v > best.value) {
      best.value = v;
      best.argsup = dir;
    }
  }
  return best;
}

/// omega_delta along a whole ell schedule, evaluated over one shared
/// direction set (base scan plus the refinement fans of every per-ell
/// argmax).  Sharing the set makes the sampled values exactly monotone in
/// ell, matching the pointwise monotonicity of the integrand.
inline std::vector<OmegaValue> omega_schedule(const Model& m, double delta,
                                              const std::vector<double>& ells,
                                              int sphere_samples = 0,
                                              int xi_nodes = 4096,
                                              std::uint64_t seed = 0) {
  if (!(delta > 0.0)) throw std::invalid_argument("omega_schedule: delta must be > 0");
  int n = sphere_samples > 0 ? sphere_samples
                             : detail::default_sphere_samples(m.dims());
  auto dirs = l1_sphere_directions(m.dims(), delta, n, seed);
  const std::size_t base_count = dirs.size();

  std::vector<int> argmax_per_ell;
  argmax_per_ell.reserve(ells.size());
  for (double ell : ells) {
    double best = -1.0;
    int best_index = 0;
    for (std::size_t i = 0; i < base_count; ++i) {
      double v = omega_integrand_integral(m, dirs[i], ell, xi_nodes);
      if (v > best) {
        best = v;
        best_index = static_cast<int>(i);
      }
    }
    argmax_per_ell.push_back(best_index);
  }
  std::vector<int> distinct;
  for (int idx : argmax_per_ell)
    if (std::find(distinct.begin(), distinct.end(), idx) == distinct.end())
      distinct.push_back(idx);
  for (int idx : distinct) {
    auto fan = detail::refine_directions(m.dims(), delta, n, seed, idx);
    dirs.insert(dirs.end(), fan.begin(), fan.end());
  }

  std::vector<OmegaValue> out;
  out.reserve(ells.size());
  for (double ell : ells) {
    OmegaValue best;
    best.value = -1.0;
    for (const auto& dir : dirs) {
      double v = omega_integrand_integral(m, dir, ell, xi_nodes);
      if (v > best.value) {
        best.value = v;
        best.argsup = dir;
      }
    }
    out.push_back(std::move(best));
  }
  return out;
}

struct DegeneracyThresholds {
  double low_fraction = 0.05;   // nondegenerate when final < low_fraction * 2M
  double high_fraction = 0.5;   // degenerate when final > high_fraction * 2M ...
  double flat_rel_change = 0.01;  // ... and the last two values are this flat
};

struct DegeneracyReport {
  double delta = 0.0;
  std::vector<double> ell_schedule;
  std::vector<double> omega_values;
  std::vector<SphereDirection> argsup;
  enum class Verdict { nondegenerate, degenerate, inconclusive } verdict =
      Verdict::inconclusive;
  // Sampled Eq.-style measure condition: for unit (tau, kappa) directions,
  // the estimated xi-measure where both symbols are below eps_zero.
  double eps_zero = 1e-6;
  std::vector<SphereDirection> measure_directions;
  std::vector<double> measure_condition;
  double max_measure = 0.0;
};

inline const char* to_string(DegeneracyReport::Verdict v) {
  switch (v) {
    case DegeneracyReport::Verdict::nondegenerate: return "nondegenerate";
    case DegeneracyReport::Verdict::degenerate: return "degenerate";
    default: return "inconclusive";
  }
}

/// Runs omega_delta along a strictly decreasing schedule (>= 3 entries) and
/// classifies the model.  Also samples, per unit direction, the measure of
/// the state set where both the convective and diffusive symbols vanish to
/// within eps_zero (reported, never asserted).
inline DegeneracyReport nondegeneracy_verdict(
    const Model& m, double delta, const std::vector<double>& ell_schedule,
    const DegeneracyThresholds& thresholds = {}, int sphere_samples = 0,
    int xi_nodes = 4096, std::uint64_t seed = 0, double eps_zero = 1e-6) {
  if (ell_schedule.size() < 3)
    throw std::invalid_argument("nondegeneracy_verdict: need >= 3 schedule entries");
  for (std::size_t i = 0; i < ell_schedule.size(); ++i) {
    if (!(ell_schedule[i] > 0.0))
      throw std::invalid_argument("nondegeneracy_verdict: schedule must be > 0");
    if (i > 0 && !(ell_schedule[i] < ell_schedule[i - 1]))
      throw std::invalid_argument(
          "nondegeneracy_verdict: schedule must be strictly decreasing");
  }

  DegeneracyReport rep;
  rep.delta = delta;
  rep.ell_schedule = ell_schedule;
  rep.eps_zero = eps_zero;
  auto values = omega_schedule(m, delta, ell_schedule, sphere_samples, xi_nodes, seed);
  for (auto& v : values) {
    rep.omega_values.push_back(v.value);
    rep.argsup.push_back(std::move(v.argsup));
  }

  const double two_m = 2.0 * m.state_bound();
  bool nonincreasing = true;
  for (std::size_t i = 1; i < rep.omega_values.size(); ++i)
    if (rep.omega_values[i] > rep.omega_values[i - 1] + 1e-12) nonincreasing = false;
  double final_value = rep.omega_values.back();
  double prev = rep.omega_values[rep.omega_values.size() - 2];
  double rel_change = prev > 0.0 ? std::abs(prev - final_value) / prev : 0.0;

  if (nonincreasing && final_value < thresholds.low_fraction * two_m)
    rep.verdict = DegeneracyReport::Verdict::nondegenerate;
  else if (final_value > thresholds.high_fraction * two_m &&
           rel_change < thresholds.flat_rel_change)
    rep.verdict = DegeneracyReport::Verdict::degenerate;
  else
    rep.verdict = DegeneracyReport::Verdict::inconclusive;

  // Measure-condition sampling on Euclidean-unit directions.
  int n = sphere_samples > 0 ? sphere_samples
                             : detail::default_sphere_samples(m.dims());
  auto base = l1_sphere_directions(m.dims(), delta, n, seed);
  const int xi_samples = 4096;
  const double M = m.state_bound();
  for (const auto& dir : base) {
    double norm = dir.tau * dir.tau;
    for (double k : dir.kappa) norm += k * k;
    norm = std::sqrt(norm);
    SphereDirection unit;
    unit.tau = dir.tau / norm;
    unit.kappa = dir.kappa;
    for (double& k : unit.kappa) k /= norm;
    int hits = 0;
    for (int s = 0; s < xi_samples; ++s) {
      double xi = -M + (static_cast<double>(s) + 0.5) * (2.0 * M / xi_samples);
      double conv = unit.tau + m.flux_derivative_dot(xi, unit.kappa);
      double diff = m.diffusion_quadratic_form(xi, unit.kappa);
      if (std::abs(conv) < eps_zero && std::abs(diff) < eps_zero) ++hits;
    }
    double measure = 2.0 * M * static_cast<double>(hits) / xi_samples;
    rep.measure_directions.push_back(std::move(unit));
    rep.measure_condition.push_back(measure);
    rep.max_measure = std::max(rep.max_measure, measure);
  }
  return rep;
}

}  // namespace apde
