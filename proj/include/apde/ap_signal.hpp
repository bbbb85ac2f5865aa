#pragma once

// Finite trigonometric polynomials as the working representation of almost
// periodic signals: association of real frequency vectors (cycles per unit
// length) with complex amplitudes, plus the mean-value / Fourier /
// seminorm / group-closure / almost-period machinery built on top.
//
// Frequency identity is decided after canonical rounding to a declared
// resolution (default 1e-12): two frequencies are the same key iff every
// component rounds to the same integer multiple of the resolution.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace apde {

inline constexpr double kFrequencyResolution = 1e-12;

using FrequencyKey = std::vector<std::int64_t>;

namespace detail {

inline FrequencyKey canonical_key(const std::vector<double>& freq,
                                  double resolution) {
  FrequencyKey k(freq.size());
  for (std::size_t i = 0; i < freq.size(); ++i)
    k[i] = std::llround(freq[i] / resolution);
  return k;
}

inline void check_dims(std::size_t got, int want, const char* what) {
  if (static_cast<int>(got) != want)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(got) + ", expected " +
                                std::to_string(want) + ")");
}

}  // namespace detail

/// Finite set of frequency vectors, distinct under canonical rounding.
class FrequencySet {
 public:
  explicit FrequencySet(int dims, double resolution = kFrequencyResolution)
      : dims_(dims), resolution_(resolution) {
    if (dims < 1) throw std::invalid_argument("FrequencySet: dims must be >= 1");
  }

  int dims() const { return dims_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return members_.size(); }

  void insert(const std::vector<double>& freq) {
    detail::check_dims(freq.size(), dims_, "FrequencySet::insert");
    members_.emplace(detail::canonical_key(freq, resolution_), freq);
  }

  bool contains(const std::vector<double>& freq) const {
    detail::check_dims(freq.size(), dims_, "FrequencySet::contains");
    return members_.count(detail::canonical_key(freq, resolution_)) > 0;
  }

  bool contains_key(const FrequencyKey& k) const { return members_.count(k) > 0; }

  /// Key-ordered members; values are the first-seen representatives.
  const std::map<FrequencyKey, std::vector<double>>& members() const {
    return members_;
  }

 private:
  int dims_;
  double resolution_;
  std::map<FrequencyKey, std::vector<double>> members_;
};

/// Finite trigonometric polynomial  sum_l a_l exp(2*pi*i l.x).
///
/// Invariants: stored frequencies are distinct under canonical rounding and
/// every stored amplitude is nonzero (exact zeros are purged on insertion).
class APSignal {
 public:
  struct Term {
    std::vector<double> freq;
    std::complex<double> amp;
  };

  explicit APSignal(int dims, double resolution = kFrequencyResolution)
      : dims_(dims), resolution_(resolution) {
    if (dims < 1) throw std::invalid_argument("APSignal: dims must be >= 1");
  }

  /// Builds a signal from (frequency, amplitude) pairs; colliding keys are
  /// summed.  With `require_real` the conjugate-symmetry invariant is
  /// enforced once all terms are in.
  static APSignal from_terms(
      int dims, const std::vector<std::pair<std::vector<double>, std::complex<double>>>& terms,
      bool require_real = false, double resolution = kFrequencyResolution) {
    APSignal s(dims, resolution);
    for (const auto& [f, a] : terms) s.add(f, a);
    if (require_real) s.require_real();
    return s;
  }

  int dims() const { return dims_; }
  double resolution() const { return resolution_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<FrequencyKey, Term>& terms() const { return terms_; }

  APSignal& add(const std::vector<double>& freq, std::complex<double> amp) {
    detail::check_dims(freq.size(), dims_, "APSignal::add");
    FrequencyKey k = detail::canonical_key(freq, resolution_);
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (amp != std::complex<double>(0.0, 0.0))
        terms_.emplace(std::move(k), Term{freq, amp});
    } else {
      it->second.amp += amp;
      if (it->second.amp == std::complex<double>(0.0, 0.0)) terms_.erase(it);
    }
    return *this;
  }

  /// amplitude * sin(2*pi f.x) as the pair of conjugate terms.
  APSignal& add_sine(const std::vector<double>& freq, double amplitude) {
    std::vector<double> neg(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) neg[i] = -freq[i];
    add(freq, std::complex<double>(0.0, -0.5 * amplitude));
    add(neg, std::complex<double>(0.0, 0.5 * amplitude));
    return *this;
  }

  /// amplitude * cos(2*pi f.x) as the pair of conjugate terms.
  APSignal& add_cosine(const std::vector<double>& freq, double amplitude) {
    std::vector<double> neg(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) neg[i] = -freq[i];
    add(freq, std::complex<double>(0.5 * amplitude, 0.0));
    add(neg, std::complex<double>(0.5 * amplitude, 0.0));
    return *this;
  }

  APSignal& add_constant(double c) {
    add(std::vector<double>(dims_, 0.0), std::complex<double>(c, 0.0));
    return *this;
  }

  /// True iff for every stored frequency the amplitude at the negated
  /// frequency is the complex conjugate, up to `tol`.
  bool is_real(double tol = 1e-12) const {
    for (const auto& [key, term] : terms_) {
      FrequencyKey neg(key.size());
      for (std::size_t i = 0; i < key.size(); ++i) neg[i] = -key[i];
      auto it = terms_.find(neg);
      std::complex<double> partner =
          it == terms_.end() ? std::complex<double>(0.0, 0.0) : it->second.amp;
      if (std::abs(partner - std::conj(term.amp)) > tol) return false;
    }
    return true;
  }

  void require_real(double tol = 1e-12) const {
    if (!is_real(tol))
      throw std::invalid_argument(
          "APSignal: signal is not real-valued (missing conjugate partner)");
  }

  std::complex<double> eval(const std::vector<double>& x) const {
    detail::check_dims(x.size(), dims_, "APSignal::eval");
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [key, term] : terms_) {
      double phase = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) phase += term.freq[i] * x[i];
      phase *= 2.0 * std::numbers::pi;
      acc += term.amp * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
  }

  double eval_real(const std::vector<double>& x) const { return eval(x).real(); }

  std::complex<double> mean_value() const {
    auto it = terms_.find(FrequencyKey(dims_, 0));
    return it == terms_.end() ? std::complex<double>(0.0, 0.0) : it->second.amp;
  }

  std::complex<double> fourier_coefficient(const std::vector<double>& lambda) const {
    detail::check_dims(lambda.size(), dims_, "APSignal::fourier_coefficient");
    auto it = terms_.find(detail::canonical_key(lambda, resolution_));
    return it == terms_.end() ? std::complex<double>(0.0, 0.0) : it->second.amp;
  }

  FrequencySet spectrum() const {
    FrequencySet s(dims_, resolution_);
    for (const auto& [key, term] : terms_) s.insert(term.freq);
    return s;
  }

  /// The Parseval value sqrt(sum |a_l|^2).
  double n2() const {
    double acc = 0.0;
    for (const auto& [key, term] : terms_) acc += std::norm(term.amp);
    return std::sqrt(acc);
  }

 private:
  int dims_;
  double resolution_;
  std::map<FrequencyKey, Term> terms_;
};

inline std::complex<double> mean_value(const APSignal& sig) {
  return sig.mean_value();
}

inline std::complex<double> fourier_coefficient(const APSignal& sig,
                                                const std::vector<double>& lambda) {
  return sig.fourier_coefficient(lambda);
}

inline FrequencySet spectrum(const APSignal& sig) { return sig.spectrum(); }

/// All integer combinations sum_j n_j l_j with sum |n_j| <= order, as a
/// finite truncation of the additive group generated by `base`.  Throws if
/// the result would exceed `cap` members.
inline FrequencySet group_closure(const FrequencySet& base, int order,
                                  std::size_t cap = 1000000) {
  if (order < 1) throw std::invalid_argument("group_closure: order must be >= 1");
  std::vector<std::vector<double>> gens;
  gens.reserve(base.size());
  for (const auto& [key, rep] : base.members()) gens.push_back(rep);

  FrequencySet out(base.dims(), base.resolution());
  std::vector<double> current(base.dims(), 0.0);
  // Depth-first assignment of coefficients with an |n|-budget.
  auto rec = [&](auto&& self, std::size_t idx, int budget) -> void {
    if (idx == gens.size()) {
      out.insert(current);
      if (out.size() > cap)
        throw std::runtime_error("group_closure: member cap exceeded (" +
                                 std::to_string(cap) + ")");
      return;
    }
    for (int c = -budget; c <= budget; ++c) {
      for (int i = 0; i < base.dims(); ++i) current[i] += c * gens[idx][i];
      self(self, idx + 1, budget - std::abs(c));
      for (int i = 0; i < base.dims(); ++i) current[i] -= c * gens[idx][i];
    }
  };
  rec(rec, 0, order);
  return out;
}

struct SeminormEstimate {
  enum class Method { parseval_exact, box_average };
  double value = 0.0;
  Method method = Method::parseval_exact;
  std::vector<double> box_sizes;
  double residual = 0.0;
};

/// Box-average estimate of N_p over the cubes I_R for each R in `boxes`
/// (midpoint quadrature, `samples_per_unit` per unit length per axis).
/// The returned value is the estimate at the largest R; the residual is the
/// spread of the last two estimates (0 with a single box).
inline SeminormEstimate box_average_seminorm(const APSignal& sig, int p,
                                             const std::vector<double>& boxes,
                                             int samples_per_unit = 64) {
  if (p != 1 && p != 2)
    throw std::invalid_argument("box_average_seminorm: p must be 1 or 2");
  if (boxes.empty())
    throw std::invalid_argument("box_average_seminorm: boxes must be nonempty");
  for (std::size_t i = 1; i < boxes.size(); ++i)
    if (!(boxes[i] > boxes[i - 1]))
      throw std::invalid_argument("box_average_seminorm: boxes must be increasing");

  const int d = sig.dims();
  std::vector<double> estimates;
  estimates.reserve(boxes.size());
  for (double R : boxes) {
    if (!(R > 0.0))
      throw std::invalid_argument("box_average_seminorm: box sizes must be > 0");
    std::int64_t n = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(samples_per_unit) * R));
    double h = R / static_cast<double>(n);
    double acc = 0.0;
    std::vector<double> x(d, 0.0);
    if (d == 1) {
      for (std::int64_t j = 0; j < n; ++j) {
        x[0] = -0.5 * R + (static_cast<double>(j) + 0.5) * h;
        double v = std::abs(sig.eval(x));
        acc += (p == 1) ? v : v * v;
      }
      acc /= static_cast<double>(n);
    } else if (d == 2) {
      for (std::int64_t j0 = 0; j0 < n; ++j0) {
        x[0] = -0.5 * R + (static_cast<double>(j0) + 0.5) * h;
        for (std::int64_t j1 = 0; j1 < n; ++j1) {
          x[1] = -0.5 * R + (static_cast<double>(j1) + 0.5) * h;
          double v = std::abs(sig.eval(x));
          acc += (p == 1) ? v : v * v;
        }
      }
      acc /= static_cast<double>(n) * static_cast<double>(n);
    } else {
      throw std::invalid_argument("box_average_seminorm: dims > 2 not supported");
    }
    estimates.push_back(p == 1 ? acc : std::sqrt(acc));
  }

  SeminormEstimate e;
  e.method = SeminormEstimate::Method::box_average;
  e.box_sizes = boxes;
  e.value = estimates.back();
  e.residual = estimates.size() >= 2
                   ? std::abs(estimates.back() - estimates[estimates.size() - 2])
                   : 0.0;
  return e;
}

/// N_p of the signal.  p = 2 is exact by Parseval (distinct frequencies);
/// p = 1 falls back to the box-average estimator over `boxes`.
inline SeminormEstimate besicovitch_seminorm(const APSignal& sig, int p,
                                             const std::vector<double>& boxes = {}) {
  if (p == 2) {
    SeminormEstimate e;
    e.method = SeminormEstimate::Method::parseval_exact;
    e.value = sig.n2();
    e.residual = 0.0;
    return e;
  }
  if (p == 1) return box_average_seminorm(sig, 1, boxes);
  throw std::invalid_argument("besicovitch_seminorm: p must be 1 or 2");
}

/// Projects every frequency component onto the lattice Z/L_i, summing
/// amplitudes that collide.  Returns the projected signal and the largest
/// per-component projection error |l_i - k_i/L_i|.
inline std::pair<APSignal, double> commensurate_project(
    const APSignal& sig, const std::vector<double>& L) {
  detail::check_dims(L.size(), sig.dims(), "commensurate_project");
  for (double l : L)
    if (!(l > 0.0))
      throw std::invalid_argument("commensurate_project: lengths must be > 0");
  APSignal out(sig.dims(), sig.resolution());
  double max_err = 0.0;
  for (const auto& [key, term] : sig.terms()) {
    std::vector<double> f(term.freq.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      double k = std::round(term.freq[i] * L[i]);
      f[i] = k / L[i];
      max_err = std::max(max_err, std::abs(term.freq[i] - f[i]));
    }
    out.add(f, term.amp);
  }
  return {std::move(out), max_err};
}

/// Drops terms outside `keep`; terms inside are scaled by their weight
/// (default 1).  Weights, when given, must cover every kept frequency and
/// lie in [0, 1].
inline APSignal spectral_truncate(
    const APSignal& sig, const FrequencySet& keep,
    const std::optional<std::vector<std::pair<std::vector<double>, double>>>&
        weights = std::nullopt) {
  std::map<FrequencyKey, double> w;
  if (weights) {
    for (const auto& [f, v] : *weights) {
      if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("spectral_truncate: weights must be in [0,1]");
      w.emplace(detail::canonical_key(f, sig.resolution()), v);
    }
  }
  APSignal out(sig.dims(), sig.resolution());
  for (const auto& [key, term] : sig.terms()) {
    if (!keep.contains(term.freq)) continue;
    double weight = 1.0;
    if (weights) {
      auto it = w.find(key);
      if (it == w.end())
        throw std::invalid_argument(
            "spectral_truncate: weights must be defined on every kept frequency");
      weight = it->second;
    }
    out.add(term.freq, weight * term.amp);
  }
  return out;
}

/// Sampling parameters for the Stepanoff-distance estimator: the sup over
/// translates x is sampled on a grid covering one cell of side `sup_cell`
/// per axis, and the local integral over the unit cube centered at x uses
/// midpoint quadrature with `quad_samples_per_unit` per axis.
struct StepanoffParams {
  double sup_cell = 16.0;
  int sup_samples_per_axis = 64;
  int quad_samples_per_unit = 64;
};

/// Estimate of sup_x int_{I_1(x)} |f(y+shift) - f(y)| dy.
inline double stepanoff_distance(const APSignal& sig,
                                 const std::vector<double>& shift,
                                 const StepanoffParams& params = {}) {
  detail::check_dims(shift.size(), sig.dims(), "stepanoff_distance");
  // The difference signal has the same frequencies with amplitudes
  // a_l (exp(2*pi*i l.shift) - 1).
  APSignal diff(sig.dims(), sig.resolution());
  for (const auto& [key, term] : sig.terms()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < shift.size(); ++i)
      phase += term.freq[i] * shift[i];
    phase *= 2.0 * std::numbers::pi;
    std::complex<double> rot(std::cos(phase), std::sin(phase));
    diff.add(term.freq, term.amp * (rot - 1.0));
  }

  const int d = sig.dims();
  const int ns = params.sup_samples_per_axis;
  const int nq = params.quad_samples_per_unit;
  const double hq = 1.0 / static_cast<double>(nq);

  auto local_integral_1d = [&](double x0) {
    double acc = 0.0;
    std::vector<double> y(1);
    for (int q = 0; q < nq; ++q) {
      y[0] = x0 - 0.5 + (q + 0.5) * hq;
      acc += std::abs(diff.eval(y));
    }
    return acc * hq;
  };

  double sup = 0.0;
  if (d == 1) {
    double hs = params.sup_cell / ns;
    for (int s = 0; s < ns; ++s) {
      double x0 = -0.5 * params.sup_cell + (s + 0.5) * hs;
      sup = std::max(sup, local_integral_1d(x0));
    }
  } else if (d == 2) {
    double hs = params.sup_cell / ns;
    std::vector<double> y(2);
    for (int s0 = 0; s0 < ns; ++s0) {
      double x0 = -0.5 * params.sup_cell + (s0 + 0.5) * hs;
      for (int s1 = 0; s1 < ns; ++s1) {
        double x1 = -0.5 * params.sup_cell + (s1 + 0.5) * hs;
        double acc = 0.0;
        for (int q0 = 0; q0 < nq; ++q0) {
          y[0] = x0 - 0.5 + (q0 + 0.5) * hq;
          for (int q1 = 0; q1 < nq; ++q1) {
            y[1] = x1 - 0.5 + (q1 + 0.5) * hq;
            acc += std::abs(diff.eval(y));
          }
        }
        sup = std::max(sup, acc * hq * hq);
      }
    }
  } else {
    throw std::invalid_argument("stepanoff_distance: dims > 2 not supported");
  }
  return sup;
}

/// All shifts tau on the grid step*Z^d inside I_{search_box} whose sampled
/// Stepanoff distance is <= eps.  Lexicographic order; possibly empty.
inline std::vector<std::vector<double>> epsilon_almost_periods(
    const APSignal& sig, double eps, double search_box, double step,
    const StepanoffParams& params = {}) {
  if (!(step > 0.0))
    throw std::invalid_argument("epsilon_almost_periods: step must be > 0");
  if (!(search_box > 0.0))
    throw std::invalid_argument("epsilon_almost_periods: search_box must be > 0");
  if (!(eps > 0.0))
    throw std::invalid_argument("epsilon_almost_periods: eps must be > 0");

  const int d = sig.dims();
  const std::int64_t mmax =
      static_cast<std::int64_t>(std::floor(0.5 * search_box / step));
  std::vector<std::vector<double>> result;
  if (d == 1) {
    for (std::int64_t m = -mmax; m <= mmax; ++m) {
      std::vector<double> tau{static_cast<double>(m) * step};
      if (stepanoff_distance(sig, tau, params) <= eps) result.push_back(tau);
    }
  } else if (d == 2) {
    for (std::int64_t m0 = -mmax; m0 <= mmax; ++m0)
      for (std::int64_t m1 = -mmax; m1 <= mmax; ++m1) {
        std::vector<double> tau{static_cast<double>(m0) * step,
                                static_cast<double>(m1) * step};
        if (stepanoff_distance(sig, tau, params) <= eps) result.push_back(tau);
      }
  } else {
    throw std::invalid_argument("epsilon_almost_periods: dims > 2 not supported");
  }
  return result;
}

/// sum over spectrum(sig) \ F of |a_l|^2.
inline double spectral_tail_mass(const APSignal& sig, const FrequencySet& F) {
  double acc = 0.0;
  for (const auto& [key, term] : sig.terms())
    if (!F.contains(term.freq)) acc += std::norm(term.amp);
  return acc;
}

}  // namespace apde
