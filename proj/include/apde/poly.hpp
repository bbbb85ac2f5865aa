#pragma once

// Dense univariate polynomials over the reals, with the exact calculus
// helpers (derivative, antiderivative, root isolation on an interval) that
// the constitutive-model layer builds on.  Coefficients are stored in
// ascending degree order; the zero polynomial has an empty coefficient
// vector and degree() == -1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace apde {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  static Polynomial constant(double v) {
    return Polynomial(std::vector<double>{v});
  }

  /// Horner evaluation.
  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// Antiderivative normalized to vanish at 0.
  Polynomial antiderivative() const {
    if (c_.empty()) return Polynomial();
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      a[i + 1] = c_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> s(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) s[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) s[i] += b.c_[i];
    return Polynomial(std::move(s));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<double> s(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) s[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) s[i] -= b.c_[i];
    return Polynomial(std::move(s));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return Polynomial();
    std::vector<double> s(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) s[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(s));
  }

  friend Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> c = p.c_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c));
  }

  /// Coefficient-wise comparison up to `tol`.
  bool almost_equal(const Polynomial& o, double tol) const {
    std::size_t n = std::max(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < n; ++i) {
      double a = i < c_.size() ? c_[i] : 0.0;
      double b = i < o.c_.size() ? o.c_[i] : 0.0;
      if (std::abs(a - b) > tol) return false;
    }
    return true;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

namespace detail {

inline double bisect_root(const Polynomial& p, double a, double b) {
  double fa = p(a);
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    double fm = p(m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// All real roots of `p` in [lo, hi], ascending, deduplicated.  Roots are
/// isolated recursively: between consecutive critical points the polynomial
/// is monotone and bisection applies.  The zero polynomial yields no roots.
inline std::vector<double> real_roots_in(const Polynomial& p, double lo,
                                         double hi) {
  std::vector<double> roots;
  if (p.degree() <= 0 || !(lo < hi)) return roots;
  if (p.degree() == 1) {
    double r = -p.coeffs()[0] / p.coeffs()[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }
  std::vector<double> breaks = real_roots_in(p.derivative(), lo, hi);
  std::vector<double> pts;
  pts.push_back(lo);
  for (double b : breaks)
    if (b > lo && b < hi) pts.push_back(b);
  pts.push_back(hi);

  const double dedup_tol = 1e-11 * std::max(1.0, std::abs(hi - lo));
  auto push = [&](double r) {
    if (roots.empty() || std::abs(roots.back() - r) > dedup_tol)
      roots.push_back(r);
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    double fa = p(a), fb = p(b);
    if (fa == 0.0) push(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
      push(detail::bisect_root(p, a, b));
  }
  if (p(hi) == 0.0) push(hi);
  return roots;
}

}  // namespace apde
