#include "oneleg/stepper.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace oneleg {

namespace {

// Diagonal one-leg BE operator L = I/(theta tau) + nu A and its inverse.
class StokesShift {
 public:
  StokesShift(const TorusGrid& g, double shift, double nu)
      : grid_(g), shift_(shift), nu_(nu) {}

  VelocityField apply(const VelocityField& u) const {
    VelocityField v = stokes_apply(u);
    return lincomb(shift_, u, nu_, v);
  }

  VelocityField solve(const VelocityField& rhs) const {
    VelocityField v(grid_);
    const int K = grid_.kmax();
    const double s2 = grid_.wave_scale() * grid_.wave_scale();
    size_t i = 0;
    for (int k1 = -K; k1 <= K; ++k1) {
      for (int k2 = -K; k2 <= K; ++k2, ++i) {
        const double ksq = s2 * (static_cast<double>(k1) * k1 +
                                 static_cast<double>(k2) * k2);
        const double d = shift_ + nu_ * ksq;
        v.c1[i] = rhs.c1[i] / d;
        v.c2[i] = rhs.c2[i] / d;
      }
    }
    return v;
  }

 private:
  TorusGrid grid_;
  double shift_, nu_;
};

// Linearized convection P(v . grad w + w . grad v), truncated.
VelocityField convection_jacobian(const VelocityField& w,
                                  const VelocityField& v) {
  return leray_project(add(advect(v, w), advect(w, v)));
}

// Left-preconditioned GMRES for (I + Linv N'(w)) delta = rhs. Basis kept
// un-restarted; tolerances are loose because each Newton step re-evaluates
// the true residual anyway.
VelocityField gmres_solve(const StokesShift& L, const VelocityField& w,
                          const VelocityField& rhs, double tol, int max_iter) {
  auto apply = [&](const VelocityField& v) {
    return add(v, L.solve(convection_jacobian(w, v)));
  };

  const double rhs_norm = l2_norm(rhs);
  VelocityField x = zero_field(rhs.grid);
  if (rhs_norm == 0.0) return x;

  std::vector<VelocityField> basis;
  std::vector<std::vector<double>> h; // h[j][i], column j
  basis.push_back(scale(rhs, 1.0 / rhs_norm));

  std::vector<double> cs, sn, g;
  g.push_back(rhs_norm);

  int m = 0;
  for (; m < max_iter; ++m) {
    VelocityField v = apply(basis[static_cast<size_t>(m)]);
    std::vector<double> col(static_cast<size_t>(m) + 2, 0.0);
    for (int i = 0; i <= m; ++i) {
      col[static_cast<size_t>(i)] = inner_product(v, basis[static_cast<size_t>(i)]);
      v = lincomb(1.0, v, -col[static_cast<size_t>(i)],
                  basis[static_cast<size_t>(i)]);
    }
    const double hsub = l2_norm(v); // subdiagonal entry before rotations
    col[static_cast<size_t>(m) + 1] = hsub;

    // Givens rotations to keep the least-squares problem triangular.
    for (int i = 0; i < m; ++i) {
      const double t = cs[static_cast<size_t>(i)] * col[static_cast<size_t>(i)] +
                       sn[static_cast<size_t>(i)] * col[static_cast<size_t>(i) + 1];
      col[static_cast<size_t>(i) + 1] =
          -sn[static_cast<size_t>(i)] * col[static_cast<size_t>(i)] +
          cs[static_cast<size_t>(i)] * col[static_cast<size_t>(i) + 1];
      col[static_cast<size_t>(i)] = t;
    }
    const double denom = std::hypot(col[static_cast<size_t>(m)], hsub);
    const double c = denom > 0.0 ? col[static_cast<size_t>(m)] / denom : 1.0;
    const double s = denom > 0.0 ? hsub / denom : 0.0;
    cs.push_back(c);
    sn.push_back(s);
    col[static_cast<size_t>(m)] = denom;
    col[static_cast<size_t>(m) + 1] = 0.0;
    h.push_back(col);

    g.push_back(-s * g[static_cast<size_t>(m)]);
    g[static_cast<size_t>(m)] *= c;

    const double res = std::abs(g[static_cast<size_t>(m) + 1]);
    if (res <= tol * rhs_norm || hsub == 0.0 || m + 1 == max_iter) {
      ++m;
      break;
    }
    basis.push_back(scale(v, 1.0 / hsub));
  }

  // Back-substitute y from the triangular system, then x = V y.
  std::vector<double> y(static_cast<size_t>(m), 0.0);
  for (int i = m - 1; i >= 0; --i) {
    double t = g[static_cast<size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      t -= h[static_cast<size_t>(j)][static_cast<size_t>(i)] *
           y[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = t / h[static_cast<size_t>(i)][static_cast<size_t>(i)];
  }
  for (int i = 0; i < m; ++i)
    x = lincomb(1.0, x, y[static_cast<size_t>(i)], basis[static_cast<size_t>(i)]);
  return x;
}

} // namespace

void RunConfig::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("config: nu must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
  if (!(theta >= 0.5 && theta <= 1.0))
    throw std::invalid_argument("config: theta must lie in [1/2, 1]");
  if (steps < 0) throw std::invalid_argument("config: steps must be >= 0");
  if (!(picard_tol > 0.0))
    throw std::invalid_argument("config: picard_tol must be positive");
  if (picard_max_iter < 1)
    throw std::invalid_argument("config: picard_max_iter must be >= 1");
  if (!(u0.grid == grid))
    throw GridMismatchError("config: u0 grid does not match run grid");
}

NonConvergenceError::NonConvergenceError(long step_, int iters_, double res_)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "nonlinear solve did not converge (step " << step_ << ", "
           << iters_ << " iterations, relative residual " << res_
           << "); the time step is too large for the Picard/Newton solve";
        return os.str();
      }()),
      step(step_),
      iterations(iters_),
      residual(res_) {}

BeResult be_substep(const VelocityField& u_n, const VelocityField& f_mid,
                    const RunConfig& cfg) {
  require_same_grid(u_n, f_mid);
  const double inv_dt = 1.0 / (cfg.theta * cfg.tau);
  const StokesShift L(cfg.grid, inv_dt, cfg.nu);
  const VelocityField rhs = lincomb(1.0, f_mid, inv_dt, u_n);
  const double scale_nrm = l2_norm(f_mid) + inv_dt * l2_norm(u_n);

  VelocityField w = u_n;
  double prev_res = std::numeric_limits<double>::infinity();
  bool newton = false;
  int it = 0;

  while (it < cfg.picard_max_iter) {
    VelocityField nw = nonlinear_term(w, w);
    VelocityField defect = lincomb(1.0, L.apply(w), 1.0, nw);
    defect = sub(defect, rhs);
    const double res = l2_norm(defect);
    const double rel = scale_nrm > 0.0 ? res / scale_nrm : res;
    ++it;

    if (rel <= cfg.picard_tol)
      return BeResult{std::move(w), std::move(nw), it, rel, newton};

    if (!newton && res > prev_res) {
      if (!cfg.newton_enabled) throw NonConvergenceError(-1, it, rel);
      newton = true;
    }
    prev_res = res;

    if (newton) {
      const VelocityField g = scale(L.solve(defect), -1.0);
      const VelocityField delta = gmres_solve(L, w, g, 1e-2, 60);
      // backtracking on the true residual; the BE fixed point always exists
      // but a full Newton step can overshoot for large theta*tau*||grad u||
      double lam = 1.0;
      VelocityField trial = add(w, delta);
      for (int half = 0; half < 30; ++half) {
        const VelocityField tn = nonlinear_term(trial, trial);
        const double trial_res =
            l2_norm(sub(lincomb(1.0, L.apply(trial), 1.0, tn), rhs));
        if (trial_res <= (1.0 - 1e-4 * lam) * res) break;
        lam *= 0.5;
        trial = lincomb(1.0, w, lam, delta);
      }
      w = std::move(trial);
    } else {
      w = L.solve(sub(rhs, nw));
    }
  }

  VelocityField nw = nonlinear_term(w, w);
  VelocityField defect = sub(lincomb(1.0, L.apply(w), 1.0, nw), rhs);
  const double rel =
      scale_nrm > 0.0 ? l2_norm(defect) / scale_nrm : l2_norm(defect);
  throw NonConvergenceError(-1, it, rel);
}

VelocityField extrapolate(const VelocityField& u_mid, const VelocityField& u_n,
                          double theta) {
  return lincomb(1.0 / theta, u_mid, -(1.0 / theta - 1.0), u_n);
}

double one_leg_residual(const VelocityField& u_n, const VelocityField& u_np1,
                        const VelocityField& f_mid, const RunConfig& cfg) {
  const VelocityField u_mid = lincomb(cfg.theta, u_np1, 1.0 - cfg.theta, u_n);
  VelocityField r = scale(sub(u_np1, u_n), 1.0 / cfg.tau);
  r = lincomb(1.0, r, cfg.nu, stokes_apply(u_mid));
  r = add(r, nonlinear_term(u_mid, u_mid));
  r = sub(r, f_mid);
  return l2_norm(r);
}

TrajectoryLog run(const RunConfig& cfg) {
  cfg.validate();

  TrajectoryLog log;
  log.meta.grid_n = cfg.grid.n;
  log.meta.length = cfg.grid.length;
  log.meta.lambda1 = cfg.grid.lambda1();
  log.meta.nu = cfg.nu;
  log.meta.theta = cfg.theta;
  log.meta.tau = cfg.tau;
  log.meta.steps = cfg.steps;
  log.meta.picard_tol = cfg.picard_tol;
  log.meta.picard_max_iter = cfg.picard_max_iter;
  log.meta.newton_enabled = cfg.newton_enabled;
  log.meta.u0_l2 = l2_norm(cfg.u0);
  log.meta.u0_h1 = h1_seminorm(cfg.u0);

  const VelocityField f_base = cfg.forcing.base_field(cfg.grid);
  log.meta.f_inf = l2_norm(f_base);
  log.records.reserve(static_cast<size_t>(cfg.steps));

  VelocityField u = cfg.u0;
  for (long n = 0; n < cfg.steps; ++n) {
    const double t_mid = (static_cast<double>(n) + cfg.theta) * cfg.tau;
    const VelocityField f_mid =
        scale(f_base, cfg.forcing.profile_value(t_mid));

    BeResult be;
    try {
      be = be_substep(u, f_mid, cfg);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(n, e.iterations, e.residual);
    }
    const VelocityField& w = be.w;
    const VelocityField u_next = extrapolate(w, u, cfg.theta);

    StepRecord rec;
    rec.n = n;
    rec.t_mid = t_mid;
    rec.l2_un = l2_norm(u);
    rec.h1_un = h1_seminorm(u);
    rec.l2_umid = l2_norm(w);
    rec.h1_umid = h1_seminorm(w);
    rec.lap_umid = lap_norm(w);
    rec.l2_unp1 = l2_norm(u_next);
    rec.h1_unp1 = h1_seminorm(u_next);
    rec.l2_dmid = l2_diff(w, u);
    rec.l2_dnp1 = l2_diff(u_next, u);
    rec.h1_dnp1 = h1_semi_diff(u_next, u);
    rec.l2_fmid = l2_norm(f_mid);
    rec.b_mid_mid_mid = inner_product(be.nonlinear, w);
    rec.b_mid_mid_np1 = inner_product(be.nonlinear, u_next);
    rec.recon_err =
        l2_diff(lincomb(cfg.theta, u_next, 1.0 - cfg.theta, u), w);
    rec.solver_iters = be.iters;
    rec.solver_residual = be.residual;
    rec.newton_used = be.newton_used;
    rec.r_star = one_leg_residual(u, u_next, f_mid, cfg);
    log.records.push_back(rec);

    if (cfg.snapshot_stride > 0 && n % cfg.snapshot_stride == 0)
      log.snapshots.emplace_back(n, u);

    u = u_next;
  }
  log.final_state = u;
  return log;
}

} // namespace oneleg
