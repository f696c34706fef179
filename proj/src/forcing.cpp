#include "oneleg/forcing.hpp"

#include <cmath>
#include <stdexcept>

namespace oneleg {

VelocityField ForcingSpec::base_field(const TorusGrid& g) const {
  VelocityField f(g);
  const int K = g.kmax();
  for (const auto& m : modes) {
    if (std::abs(m.k1) > K || std::abs(m.k2) > K)
      throw std::invalid_argument("forcing mode outside retained lattice");
    f.set_coeff(0, m.k1, m.k2, f.coeff(0, m.k1, m.k2) + 0.5 * m.amp1);
    f.set_coeff(1, m.k1, m.k2, f.coeff(1, m.k1, m.k2) + 0.5 * m.amp2);
    f.set_coeff(0, -m.k1, -m.k2,
                f.coeff(0, -m.k1, -m.k2) + 0.5 * std::conj(m.amp1));
    f.set_coeff(1, -m.k1, -m.k2,
                f.coeff(1, -m.k1, -m.k2) + 0.5 * std::conj(m.amp2));
  }
  return leray_project(f);
}

double ForcingSpec::profile_value(double t) const {
  switch (profile) {
    case Profile::Constant:
      return 1.0;
    case Profile::Sinusoidal:
      return std::sin(omega * t + phase);
  }
  return 1.0;
}

VelocityField ForcingSpec::at(const TorusGrid& g, double t) const {
  return scale(base_field(g), profile_value(t));
}

double ForcingSpec::sup_h_norm(const TorusGrid& g) const {
  return l2_norm(base_field(g));
}

} // namespace oneleg
