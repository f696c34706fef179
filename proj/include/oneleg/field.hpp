#pragma once

#include "oneleg/grid.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace oneleg {

using Complex = std::complex<double>;

/// Divergence-free, mean-zero velocity field represented by Fourier
/// coefficients on the symmetric lattice |k_i| <= n/2 (two components).
/// Invariants (maintained by every operation below):
///   - coefficient at k = 0 is exactly zero,
///   - k . u_hat(k) = 0 for every retained k,
///   - u_hat(-k) = conj(u_hat(k)).
struct VelocityField {
  TorusGrid grid;
  std::vector<Complex> c1, c2; // row-major over (k1 + K)*(n+1) + (k2 + K)

  VelocityField() = default;
  explicit VelocityField(const TorusGrid& g)
      : grid(g),
        c1(static_cast<size_t>(g.retained_modes())),
        c2(static_cast<size_t>(g.retained_modes())) {}

  size_t idx(int k1, int k2) const {
    const int K = grid.kmax();
    return static_cast<size_t>(k1 + K) * grid.modes_per_axis() + (k2 + K);
  }
  Complex coeff(int comp, int k1, int k2) const {
    return comp == 0 ? c1[idx(k1, k2)] : c2[idx(k1, k2)];
  }
  void set_coeff(int comp, int k1, int k2, Complex v) {
    (comp == 0 ? c1 : c2)[idx(k1, k2)] = v;
  }
};

struct FieldNorms {
  double l2 = 0;      // ||u||, the L^2(Omega) norm by Parseval
  double h1_semi = 0; // ||grad u||
  double l4 = 0;      // ||u||_{L^4}, alias-free physical quadrature
  double lap = 0;     // ||Delta u|| (equivalently ||A u||)
};

VelocityField zero_field(const TorusGrid& g);

/// Taylor-Green vortex c*(cos(s x) sin(s y), -sin(s x) cos(s y)), s = 2*pi/L.
/// Lives on the |k|^2 = 2*lambda1 Stokes eigenspace; its self-advection is a
/// pure gradient, so the projected nonlinearity vanishes identically.
VelocityField taylor_green(const TorusGrid& g, double amplitude);

/// Applies I - k k^T/|k|^2 modewise, zeroes the mean mode, and enforces
/// conjugate symmetry. Total and idempotent.
VelocityField leray_project(const VelocityField& raw);

/// Stokes operator: (A u)^(k) = |k~|^2 u_hat(k) with scaled wavenumbers.
VelocityField stokes_apply(const VelocityField& u);

FieldNorms norms(const VelocityField& u);
double l2_norm(const VelocityField& u);
double h1_seminorm(const VelocityField& u);
double lap_norm(const VelocityField& u);
double l4_norm(const VelocityField& u);

/// H inner product (u, v) = integral of u . v.
double inner_product(const VelocityField& u, const VelocityField& v);

/// b(u,v,w) = (u . grad v, w), exact Galerkin value via an enlarged
/// (alias-free) physical grid.
double trilinear_b(const VelocityField& u, const VelocityField& v,
                   const VelocityField& w);

/// Leray-projected, Galerkin-truncated B(u,v); satisfies
/// (nonlinear_term(u,v), w) = trilinear_b(u,v,w) for truncated w.
VelocityField nonlinear_term(const VelocityField& u, const VelocityField& v);

/// Truncated (u . grad) v without projection. Used by trilinear_b and tests.
VelocityField advect(const VelocityField& u, const VelocityField& v);

/// Deterministic random field: Gaussian coefficients damped by
/// (1 + |k~|^2)^(-decay/2), projected, then rescaled to the requested
/// L^2 amplitude (exactly; amplitude 0 gives the zero field).
VelocityField random_divfree_field(const TorusGrid& g, uint64_t seed,
                                   double decay, double amplitude);

// Linear algebra on fields (same grid required).
VelocityField add(const VelocityField& u, const VelocityField& v);
VelocityField sub(const VelocityField& u, const VelocityField& v);
VelocityField scale(const VelocityField& u, double s);
VelocityField lincomb(double a, const VelocityField& u, double b,
                      const VelocityField& v);

// Invariant diagnostics (max over modes, relative to the field size).
double divergence_defect(const VelocityField& u);
double hermitian_defect(const VelocityField& u);
double mean_mode_abs(const VelocityField& u);

/// ||u||_{L^2} of the pointwise difference; cheap spectral evaluation.
double l2_diff(const VelocityField& u, const VelocityField& v);
double h1_semi_diff(const VelocityField& u, const VelocityField& v);

void require_same_grid(const VelocityField& a, const VelocityField& b);

} // namespace oneleg
