#pragma once

// The model gallery used throughout the tests and the CLI: the classic
// convective, degenerate-diffusive and mixed cases, plus signal helpers.

#include <cmath>
#include <string>
#include <vector>

#include "apde/ap_signal.hpp"
#include "apde/model.hpp"

namespace apde::gallery {

inline Model burgers_1d(double state_bound = 1.0) {
  ModelSpec s;
  s.dims = 1;
  s.flux = {Polynomial({0.0, 0.0, 0.5})};  // u^2/2
  s.diffusion_primitive = {{Polynomial()}};
  s.sqrt_factors = {{Polynomial()}};
  s.state_bound = state_bound;
  s.name = "burgers1d";
  return Model::validate(s);
}

inline Model linear_advection_1d(double speed = 1.0, double state_bound = 1.0) {
  ModelSpec s;
  s.dims = 1;
  s.flux = {Polynomial({0.0, speed})};
  s.diffusion_primitive = {{Polynomial()}};
  s.sqrt_factors = {{Polynomial()}};
  s.state_bound = state_bound;
  s.name = "advection1d";
  return Model::validate(s);
}

/// f = 0, A = u^3/3, sigma = u (so A' = u^2 = sigma^2).
inline Model degenerate_diffusion_1d(double state_bound = 1.0) {
  ModelSpec s;
  s.dims = 1;
  s.flux = {Polynomial()};
  s.diffusion_primitive = {{Polynomial({0.0, 0.0, 0.0, 1.0 / 3.0})}};
  s.sqrt_factors = {{Polynomial({0.0, 1.0})}};
  s.state_bound = state_bound;
  s.name = "degenerate_diffusion1d";
  return Model::validate(s);
}

inline Model zero_model_1d(double state_bound = 1.0) {
  ModelSpec s;
  s.dims = 1;
  s.flux = {Polynomial()};
  s.diffusion_primitive = {{Polynomial()}};
  s.sqrt_factors = {{Polynomial()}};
  s.state_bound = state_bound;
  s.name = "zero1d";
  return Model::validate(s);
}

/// f = (u^2/2, 0), A = diag(0, u^3/3): convective along axis 0, degenerate
/// diffusive along axis 1.
inline Model anisotropic_2d(double state_bound = 1.0) {
  ModelSpec s;
  s.dims = 2;
  s.flux = {Polynomial({0.0, 0.0, 0.5}), Polynomial()};
  s.diffusion_primitive = {
      {Polynomial(), Polynomial()},
      {Polynomial(), Polynomial({0.0, 0.0, 0.0, 1.0 / 3.0})}};
  s.sqrt_factors = {{Polynomial(), Polynomial()},
                    {Polynomial(), Polynomial({0.0, 1.0})}};
  s.state_bound = state_bound;
  s.name = "anisotropic2d";
  return Model::validate(s);
}

inline std::vector<Model> all_models() {
  return {burgers_1d(), linear_advection_1d(), degenerate_diffusion_1d(),
          zero_model_1d(), anisotropic_2d()};
}

inline APSignal sine_1d(double amplitude, double freq) {
  APSignal s(1);
  s.add_sine({freq}, amplitude);
  return s;
}

/// Mean-zero quasi-periodic test data: amplitude mix of the unit frequency
/// and sqrt(2).
inline APSignal quasi_periodic_1d(double amp1 = 0.5, double amp2 = 0.35) {
  APSignal s(1);
  s.add_sine({1.0}, amp1);
  s.add_sine({std::sqrt(2.0)}, amp2);
  return s;
}

}  // namespace apde::gallery
