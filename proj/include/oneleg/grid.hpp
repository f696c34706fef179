#pragma once

#include <cmath>
#include <stdexcept>

namespace oneleg {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Square periodic domain [0,L)^2 with symmetric spectral truncation
/// |k_i| <= n/2.  Wavenumbers are scaled by 2*pi/L, so the first Stokes
/// eigenvalue is lambda1 = (2*pi/L)^2 (equal to 1 for the default L = 2*pi).
struct TorusGrid {
  int n = 0;              // modes per axis; even, >= 4
  double length = kTwoPi; // domain edge length L

  int kmax() const { return n / 2; }
  int modes_per_axis() const { return n + 1; } // k in [-n/2, n/2]
  int retained_modes() const { return modes_per_axis() * modes_per_axis(); }
  double wave_scale() const { return kTwoPi / length; }
  double lambda1() const { return wave_scale() * wave_scale(); }
  double area() const { return length * length; }

  bool operator==(const TorusGrid&) const = default;
};

TorusGrid make_grid(int n, double length = kTwoPi);

struct GridMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

} // namespace oneleg
