#pragma once

#include "oneleg/field.hpp"
#include "oneleg/forcing.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oneleg {

/// One run of the Cauchy one-leg theta-method
///   (u^{n+1} - u^n)/tau + nu A u^{n+theta} + P B(u^{n+theta}, u^{n+theta})
///     = f^{n+theta},  u^{n+theta} = theta u^{n+1} + (1-theta) u^n,
/// realized as an implicit BE substep of size theta*tau followed by linear
/// extrapolation. theta = 1/2 is accepted (order studies); the long-time
/// certificates gate themselves on theta in (1/2, 1).
struct RunConfig {
  TorusGrid grid;
  double nu = 1.0;
  double theta = 0.75;
  double tau = 0.1;
  long steps = 100;
  ForcingSpec forcing;
  VelocityField u0;
  double picard_tol = 1e-12;
  int picard_max_iter = 200;
  bool newton_enabled = true;
  long snapshot_stride = 0; // 0: no snapshots

  void validate() const;
};

struct NonConvergenceError : std::runtime_error {
  long step;
  int iterations;
  double residual;
  NonConvergenceError(long step_, int iters_, double res_);
};

/// Everything the certificates read per step. Norms are the L^2 / H^1-semi /
/// Laplacian norms of the states named in the two-step scheme.
struct StepRecord {
  long n = 0;
  double t_mid = 0;   // (n + theta) tau
  double l2_un = 0, h1_un = 0;
  double l2_umid = 0, h1_umid = 0, lap_umid = 0;
  double l2_unp1 = 0, h1_unp1 = 0;
  double l2_dmid = 0;  // ||u^{n+theta} - u^n||
  double l2_dnp1 = 0;  // ||u^{n+1} - u^n||
  double h1_dnp1 = 0;  // ||grad (u^{n+1} - u^n)||
  double l2_fmid = 0;  // ||f^{n+theta}||
  double b_mid_mid_mid = 0; // b(u^{n+th}, u^{n+th}, u^{n+th}); skew check
  double b_mid_mid_np1 = 0; // b(u^{n+th}, u^{n+th}, u^{n+1})
  double recon_err = 0; // ||theta u^{n+1} + (1-theta) u^n - u^{n+theta}||
  int solver_iters = 0;
  double solver_residual = 0; // relative to ||f|| + ||u^n||/(theta tau)
  bool newton_used = false;
  double r_star = 0; // one-leg residual of the reconstructed step
};

struct RunMeta {
  int grid_n = 0;
  double length = 0, lambda1 = 0;
  double nu = 0, theta = 0, tau = 0;
  long steps = 0;
  double f_inf = 0;
  double u0_l2 = 0, u0_h1 = 0;
  double picard_tol = 0;
  int picard_max_iter = 0;
  bool newton_enabled = false;
  std::string config_echo; // JSON blob from the CLI config, if any
};

struct TrajectoryLog {
  RunMeta meta;
  std::vector<StepRecord> records;
  std::vector<std::pair<long, VelocityField>> snapshots;
  VelocityField final_state;
};

struct BeResult {
  VelocityField w;         // u^{n+theta}
  VelocityField nonlinear; // P B(w, w) at the returned iterate
  int iters = 0;
  double residual = 0; // relative
  bool newton_used = false;
};

/// Solves (w - u^n)/(theta tau) + nu A w + P B(w,w) = f_mid by Picard
/// iteration with the diagonal Stokes preconditioner, switching to
/// Newton-GMRES when the Picard residual stops decreasing (if enabled).
/// Throws NonConvergenceError (step = -1) past picard_max_iter.
BeResult be_substep(const VelocityField& u_n, const VelocityField& f_mid,
                    const RunConfig& cfg);

/// u^{n+1} = u_mid/theta - (1/theta - 1) u_n.
VelocityField extrapolate(const VelocityField& u_mid, const VelocityField& u_n,
                          double theta);

/// H norm of (u^{n+1}-u^n)/tau + nu A u^{n+th} + P B(u^{n+th},u^{n+th}) - f_mid
/// with u^{n+theta} reconstructed from the stored states. Cross-checks that
/// the BE + extrapolation pair reproduces the one-leg form.
double one_leg_residual(const VelocityField& u_n, const VelocityField& u_np1,
                        const VelocityField& f_mid, const RunConfig& cfg);

TrajectoryLog run(const RunConfig& cfg);

} // namespace oneleg
