#pragma once

// Monotone finite-volume solver on the periodic super-cell: first-order
// explicit time stepping with Engquist-Osher convective fluxes (exact
// piecewise-polynomial splitting) and centered differencing of the
// diffusion primitives, plus an optional uniform viscosity.  With diagonal
// diffusion and the CFL bounds respected the update is monotone, so the
// discrete maximum principle and L1 contraction hold to roundoff; runs are
// single-threaded and bit-deterministic.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apde/ap_signal.hpp"
#include "apde/grid.hpp"
#include "apde/model.hpp"

namespace apde {

struct SolverConfig {
  Model model;
  GridSpec grid;
  double cfl_convective = 0.4;  // (0, 1]
  double cfl_diffusive = 0.25;  // (0, 0.5]
  double end_time = 0.0;
  double viscosity = 0.0;
  int diagnostic_stride = 1;  // steps between diagnostic samples
  int field_stride = 0;       // steps between stored snapshots; 0 = none

  SolverConfig(Model m, GridSpec g) : model(std::move(m)), grid(std::move(g)) {}

  void validate() const {
    grid.validate();
    if (grid.dims != model.dims())
      throw std::invalid_argument("SolverConfig: grid/model dimension mismatch");
    if (!(cfl_convective > 0.0) || cfl_convective > 1.0)
      throw std::invalid_argument("SolverConfig: cfl_convective must be in (0,1]");
    if (!(cfl_diffusive > 0.0) || cfl_diffusive > 0.5)
      throw std::invalid_argument("SolverConfig: cfl_diffusive must be in (0,0.5]");
    if (end_time < 0.0)
      throw std::invalid_argument("SolverConfig: end_time must be >= 0");
    if (viscosity < 0.0)
      throw std::invalid_argument("SolverConfig: viscosity must be >= 0");
    if (diagnostic_stride < 1)
      throw std::invalid_argument("SolverConfig: diagnostic_stride must be >= 1");
    if (field_stride < 0)
      throw std::invalid_argument("SolverConfig: field_stride must be >= 0");
  }
};

/// Diagnostic series of a run.  Entries are appended at t = 0, every
/// diagnostic_stride accepted steps, and at t = end_time.  second_moments
/// holds the grid mean of u^2; dissipation_steps[n] is half the drop of
/// that moment since the previous entry (0 for the first).
struct Trajectory {
  SolverConfig config;
  double initial_mean = 0.0;
  bool max_principle_guaranteed = true;
  std::size_t step_count = 0;

  explicit Trajectory(SolverConfig cfg) : config(std::move(cfg)) {}

  std::vector<double> times;
  std::vector<double> means;
  std::vector<double> l1_to_mean;
  std::vector<double> second_moments;
  std::vector<double> max_abs;
  std::vector<double> dissipation_steps;

  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
};

/// Realizes a real trigonometric polynomial as exact cell averages.  Every
/// frequency must be commensurate with the grid lengths; project the signal
/// first (commensurate_project) if it is not.
inline Field init_field(const APSignal& sig, const GridSpec& grid) {
  grid.validate();
  if (sig.dims() != grid.dims)
    throw std::invalid_argument("init_field: signal/grid dimension mismatch");
  sig.require_real();

  const int d = grid.dims;
  Field field(grid, 0.0);
  std::vector<std::complex<double>> accum(field.values.size(),
                                          std::complex<double>(0.0, 0.0));
  for (const auto& [key, term] : sig.terms()) {
    // Integer wavenumber per axis; the cell average of one mode factors
    // into per-axis closed-form integrals.
    std::vector<long long> k(d);
    for (int ax = 0; ax < d; ++ax) {
      double kl = term.freq[ax] * grid.lengths[ax];
      k[ax] = std::llround(kl);
      if (std::abs(kl - static_cast<double>(k[ax])) > 1e-9)
        throw std::invalid_argument(
            "init_field: frequency " + std::to_string(term.freq[ax]) +
            " on axis " + std::to_string(ax) +
            " is incommensurate with the super-cell; apply commensurate_project "
            "first");
    }
    std::vector<std::vector<std::complex<double>>> axis_factor(d);
    for (int ax = 0; ax < d; ++ax) {
      int n = grid.cells[ax];
      axis_factor[ax].resize(n);
      if (k[ax] == 0) {
        for (int c = 0; c < n; ++c) axis_factor[ax][c] = 1.0;
      } else {
        // (1/dx) int_cell exp(2*pi*i k x / L) dx
        std::complex<double> i2pik(0.0,
                                   2.0 * std::numbers::pi * static_cast<double>(k[ax]));
        std::complex<double> ratio =
            static_cast<double>(n) * (std::exp(i2pik / static_cast<double>(n)) - 1.0) /
            i2pik;
        for (int c = 0; c < n; ++c) {
          std::complex<double> phase =
              std::exp(i2pik * (static_cast<double>(c) / static_cast<double>(n)));
          axis_factor[ax][c] = phase * ratio;
        }
      }
    }
    if (d == 1) {
      for (int c = 0; c < grid.cells[0]; ++c)
        accum[c] += term.amp * axis_factor[0][c];
    } else {
      for (int c0 = 0; c0 < grid.cells[0]; ++c0)
        for (int c1 = 0; c1 < grid.cells[1]; ++c1)
          accum[c0 * grid.cells[1] + c1] +=
              term.amp * axis_factor[0][c0] * axis_factor[1][c1];
    }
  }
  for (std::size_t i = 0; i < accum.size(); ++i) field.values[i] = accum[i].real();
  return field;
}

/// Engquist-Osher flux along one axis:
///   F(a, b) = f(0) + int_0^a max(f', 0) + int_0^b min(f', 0),
/// evaluated in closed form from the cached critical points of f'.
inline double numerical_flux(const Model& model, double u_left, double u_right,
                             int axis) {
  return model.flux(axis)(0.0) + model.eo_positive_part(axis, u_left) +
         model.eo_negative_part(axis, u_right);
}

/// CFL-stable step size.  Maxima are taken over the sampled state range
/// [-M, M]; if neither convection nor diffusion is active the step is the
/// remaining end time.
inline double stable_dt(const Model& model, const Field& /*field*/,
                        const GridSpec& grid, const SolverConfig& config) {
  const int d = grid.dims;
  double dt = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < d; ++ax) {
    double amax = model.max_flux_derivative(ax);
    if (amax > 0.0) dt = std::min(dt, config.cfl_convective * grid.dx(ax) / amax);
  }
  double diff_coef =
      2.0 * d * model.max_diffusion_radius() + 2.0 * d * config.viscosity;
  if (diff_coef > 0.0)
    for (int ax = 0; ax < d; ++ax)
      dt = std::min(dt, config.cfl_diffusive * grid.dx(ax) * grid.dx(ax) / diff_coef);
  if (!std::isfinite(dt)) dt = config.end_time;
  return dt;
}

namespace detail {

/// Scratch buffers so the time loop does not reallocate per step.
struct StepWorkspace {
  std::vector<double> flux0, flux1, w00, w11, w01;
};

/// One conservative explicit update with periodic wraparound, writing into
/// `next`.  The caller guarantees dt is within the stability bound.
inline void step_into(const SolverConfig& config, const Field& state, double dt,
                      StepWorkspace& ws, Field& next);

}  // namespace detail

/// One conservative explicit update with periodic wraparound.  Throws if dt
/// exceeds the stability bound or a non-finite value is produced.
inline Field step(const SolverConfig& config, const Field& state, double dt) {
  double bound = stable_dt(config.model, state, state.grid, config);
  if (dt > bound * (1.0 + 1e-9))
    throw std::invalid_argument("step: dt " + std::to_string(dt) +
                                " exceeds stability bound " + std::to_string(bound));
  Field next(state.grid, 0.0);
  detail::StepWorkspace ws;
  detail::step_into(config, state, dt, ws, next);
  return next;
}

namespace detail {

inline void step_into(const SolverConfig& config, const Field& state, double dt,
                      StepWorkspace& ws, Field& next) {
  const GridSpec& grid = state.grid;
  const Model& model = config.model;
  const double eps = config.viscosity;
  if (grid.dims == 1) {
    const int n = grid.cells[0];
    const double dx = grid.dx(0);
    const bool convective = !model.flux_is_constant(0);
    if (convective) {
      ws.flux0.resize(n);
      for (int i = 0; i < n; ++i) {
        int ip = (i + 1 == n) ? 0 : i + 1;
        ws.flux0[i] = numerical_flux(model, state.values[i], state.values[ip], 0);
      }
    }
    const Polynomial& A00 = model.diffusion_primitive(0, 0);
    const bool diffusive = !A00.is_zero();
    if (diffusive) {
      ws.w00.resize(n);
      for (int i = 0; i < n; ++i) ws.w00[i] = A00(state.values[i]);
    }
    for (int i = 0; i < n; ++i) {
      int im = (i == 0) ? n - 1 : i - 1;
      int ip = (i + 1 == n) ? 0 : i + 1;
      double rhs = 0.0;
      if (convective) rhs -= (ws.flux0[i] - ws.flux0[im]) / dx;
      if (diffusive)
        rhs += (ws.w00[ip] - 2.0 * ws.w00[i] + ws.w00[im]) / (dx * dx);
      if (eps > 0.0)
        rhs += eps *
               (state.values[ip] - 2.0 * state.values[i] + state.values[im]) /
               (dx * dx);
      next.values[i] = state.values[i] + dt * rhs;
    }
  } else {
    const int n0 = grid.cells[0], n1 = grid.cells[1];
    const double dx0 = grid.dx(0), dx1 = grid.dx(1);
    auto idx = [n1](int i, int j) { return static_cast<std::size_t>(i) * n1 + j; };
    auto wrap = [](int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); };

    const bool conv0 = !model.flux_is_constant(0);
    const bool conv1 = !model.flux_is_constant(1);
    if (conv0) ws.flux0.resize(state.values.size());
    if (conv1) ws.flux1.resize(state.values.size());
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) {
        if (conv0)
          ws.flux0[idx(i, j)] =
              numerical_flux(model, state.values[idx(i, j)],
                             state.values[idx(wrap(i + 1, n0), j)], 0);
        if (conv1)
          ws.flux1[idx(i, j)] =
              numerical_flux(model, state.values[idx(i, j)],
                             state.values[idx(i, wrap(j + 1, n1))], 1);
      }

    const Polynomial& A00 = model.diffusion_primitive(0, 0);
    const Polynomial& A11 = model.diffusion_primitive(1, 1);
    const Polynomial& A01 = model.diffusion_primitive(0, 1);
    const bool diff0 = !A00.is_zero();
    const bool diff1 = !A11.is_zero();
    const bool cross = !A01.is_zero();
    if (diff0) ws.w00.resize(state.values.size());
    if (diff1) ws.w11.resize(state.values.size());
    if (cross) ws.w01.resize(state.values.size());
    for (std::size_t c = 0; c < state.values.size(); ++c) {
      if (diff0) ws.w00[c] = A00(state.values[c]);
      if (diff1) ws.w11[c] = A11(state.values[c]);
      if (cross) ws.w01[c] = A01(state.values[c]);
    }

    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) {
        int im = wrap(i - 1, n0), ip = wrap(i + 1, n0);
        int jm = wrap(j - 1, n1), jp = wrap(j + 1, n1);
        std::size_t c = idx(i, j);
        double rhs = 0.0;
        if (conv0) rhs -= (ws.flux0[c] - ws.flux0[idx(im, j)]) / dx0;
        if (conv1) rhs -= (ws.flux1[c] - ws.flux1[idx(i, jm)]) / dx1;
        if (diff0)
          rhs += (ws.w00[idx(ip, j)] - 2.0 * ws.w00[c] + ws.w00[idx(im, j)]) /
                 (dx0 * dx0);
        if (diff1)
          rhs += (ws.w11[idx(i, jp)] - 2.0 * ws.w11[c] + ws.w11[idx(i, jm)]) /
                 (dx1 * dx1);
        if (cross) {
          // Both mixed terms: 2 * centered cross-difference of A01.
          rhs += 2.0 *
                 (ws.w01[idx(ip, jp)] - ws.w01[idx(ip, jm)] -
                  ws.w01[idx(im, jp)] + ws.w01[idx(im, jm)]) /
                 (4.0 * dx0 * dx1);
        }
        if (eps > 0.0)
          rhs += eps * ((state.values[idx(ip, j)] - 2.0 * state.values[c] +
                         state.values[idx(im, j)]) /
                            (dx0 * dx0) +
                        (state.values[idx(i, jp)] - 2.0 * state.values[c] +
                         state.values[idx(i, jm)]) /
                            (dx1 * dx1));
        next.values[c] = state.values[c] + dt * rhs;
      }
  }

  for (std::size_t c = 0; c < next.values.size(); ++c)
    if (!std::isfinite(next.values[c]))
      throw std::runtime_error("step: non-finite value at cell " + std::to_string(c));
}

}  // namespace detail

namespace detail {

inline void append_diagnostics(Trajectory& traj, double t, const Field& f,
                               double prev_second_moment, bool first) {
  // One pass for the whole diagnostic row.
  double sum = 0.0, dev = 0.0, sq = 0.0, amax = 0.0;
  const double center = traj.initial_mean;
  for (double v : f.values) {
    sum += v;
    dev += std::abs(v - center);
    sq += v * v;
    amax = std::max(amax, std::abs(v));
  }
  const double inv = 1.0 / static_cast<double>(f.values.size());
  double i2 = sq * inv;
  traj.times.push_back(t);
  traj.means.push_back(sum * inv);
  traj.l1_to_mean.push_back(dev * inv);
  traj.second_moments.push_back(i2);
  traj.max_abs.push_back(amax);
  traj.dissipation_steps.push_back(first ? 0.0 : 0.5 * (prev_second_moment - i2));
}

}  // namespace detail

/// Full time loop.  The step size is recomputed every step and the final
/// step is clipped to land on end_time exactly.
inline Trajectory run(const SolverConfig& config, const APSignal& initial) {
  config.validate();
  Field field = init_field(initial, config.grid);
  if (field.max_abs() > config.model.state_bound() * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument(
        "run: initial data exceeds the model state bound M");

  Trajectory traj{config};
  traj.initial_mean = field.mean();
  traj.max_principle_guaranteed = config.model.diffusion_is_diagonal();

  double last_i2 = field.second_moment();
  detail::append_diagnostics(traj, 0.0, field, last_i2, /*first=*/true);
  last_i2 = traj.second_moments.back();
  if (config.field_stride > 0) {
    traj.snapshot_times.push_back(0.0);
    traj.snapshots.push_back(field);
  }

  const double T = config.end_time;
  double t = 0.0;
  std::size_t steps_since_diag = 0, steps_since_snap = 0;
  Field next(config.grid, 0.0);
  detail::StepWorkspace ws;
  while (t < T) {
    double dt = stable_dt(config.model, field, config.grid, config);
    if (!(dt > 0.0))
      throw std::runtime_error("run: non-positive stable time step");
    if (dt < 1e-12 * T)
      throw std::runtime_error("run: time step collapsed; refusing to spin");
    bool last = false;
    if (t + dt >= T) {
      dt = T - t;
      last = true;
    }
    detail::step_into(config, field, dt, ws, next);
    std::swap(field.values, next.values);
    t = last ? T : t + dt;
    ++traj.step_count;
    ++steps_since_diag;
    ++steps_since_snap;

    if (steps_since_diag >= static_cast<std::size_t>(config.diagnostic_stride) ||
        last) {
      detail::append_diagnostics(traj, t, field, last_i2, /*first=*/false);
      last_i2 = traj.second_moments.back();
      steps_since_diag = 0;
    }
    if (config.field_stride > 0 &&
        (steps_since_snap >= static_cast<std::size_t>(config.field_stride) || last)) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(field);
      steps_since_snap = 0;
    }
  }
  return traj;
}

}  // namespace apde
