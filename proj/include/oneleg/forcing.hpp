#pragma once

#include "oneleg/field.hpp"

#include <string>
#include <vector>

namespace oneleg {

/// Body force built from a fixed set of Fourier modes and a scalar time
/// profile g(t) with sup |g| = 1, so ||f||_inf = ||f(0-phase-peak)|| is the
/// L^2 norm of the spatial part in closed form.
struct ForcingMode {
  int k1 = 0, k2 = 0;
  Complex amp1{0.0, 0.0}, amp2{0.0, 0.0};
};

struct ForcingSpec {
  enum class Profile { Constant, Sinusoidal };

  std::vector<ForcingMode> modes;
  Profile profile = Profile::Constant;
  double omega = 0.0; // sinusoidal: g(t) = sin(omega t + phase)
  double phase = 0.0;

  /// Spatial part: each listed mode is mirrored to -k with the conjugate
  /// amplitude (real field), then Leray-projected and mean-zeroed.
  VelocityField base_field(const TorusGrid& g) const;

  double profile_value(double t) const;
  VelocityField at(const TorusGrid& g, double t) const;

  /// sup_t ||f(t)|| over R_+; equals ||base_field|| for both profiles.
  double sup_h_norm(const TorusGrid& g) const;

  bool is_zero() const { return modes.empty(); }
};

} // namespace oneleg
