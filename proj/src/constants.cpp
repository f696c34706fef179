#include "oneleg/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oneleg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(std::initializer_list<double> logs) {
  double mx = -kInf;
  for (double l : logs) mx = std::max(mx, l);
  if (!std::isfinite(mx)) return mx; // all -inf, or an inf dominates
  double s = 0.0;
  for (double l : logs) s += std::exp(l - mx);
  return mx + std::log(s);
}

} // namespace

LogVal LogVal::from_log(double lg) {
  return LogVal{std::exp(lg), lg};
}

LogVal LogVal::from_value(double v) {
  return LogVal{v, std::log(v)};
}

std::string to_string(ConstantsVariant v) {
  return v == ConstantsVariant::PaperLiteral ? "paper" : "derived";
}

ThetaConstants theta_constants_lnt(double theta, double lambda_nu_tau) {
  if (!(theta >= 0.5 && theta <= 1.0))
    throw DomainError("theta_constants: theta outside [1/2, 1]");
  if (!(lambda_nu_tau >= 0.0))
    throw DomainError("theta_constants: lambda1*nu*tau must be nonnegative");
  const double lnt = lambda_nu_tau;
  const double r1 = (2.0 * theta - 1.0) *
                    (4.0 * theta - lnt * (2.0 * theta + 1.0) * (1.0 - theta));
  const double r2 = lnt * (1.0 - theta);
  if (r1 < 0.0 || r2 < 0.0)
    throw DomainError("theta_constants: negative radicand (time step too large)");

  ThetaConstants tc;
  tc.theta = theta;
  tc.lambda_nu_tau = lnt;
  tc.epsilon = lnt * (2.0 * theta - 1.0);
  const double s1 = std::sqrt(r1), s2 = std::sqrt(r2);
  tc.a = 0.5 * (s1 - s2);
  tc.b = 0.5 * (s1 + s2);
  tc.alpha = theta - 0.5 * (2.0 * theta - 1.0) * (1.0 - theta) * lnt +
             0.5 * s1 * s2;
  return tc;
}

ThetaConstants theta_constants(double theta, double lambda1, double nu,
                               double tau) {
  return theta_constants_lnt(theta, lambda1 * nu * tau);
}

double IdentityResiduals::max() const {
  return std::max({sum_rule, diff_rule, cross_rule});
}

IdentityResiduals check_identities(const ThetaConstants& tc) {
  const double th = tc.theta, lnt = tc.lambda_nu_tau;
  const double rhs1 = th * th * (2.0 + th * lnt);
  const double rhs2 =
      (th - 1.0) * ((1.0 + th * lnt) * (th - 1.0) + (th + 1.0));
  const double rhs3 = 2.0 * th * (th - (1.0 - th) * (1.0 + th * lnt));
  auto rel = [](double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1.0);
  };
  IdentityResiduals out;
  out.sum_rule = rel(tc.alpha + tc.epsilon + tc.a * tc.a, rhs1);
  out.diff_rule = rel(tc.b * tc.b - tc.alpha, rhs2);
  out.cross_rule = rel(2.0 * tc.a * tc.b, rhs3);
  return out;
}

double half_theta_obstruction(double theta, double lambda_nu_tau) {
  const double tm = 2.0 * theta - 1.0;
  return 4.0 * theta * theta - 1.0 + tm * tm * (1.0 + theta * lambda_nu_tau);
}

namespace {

struct Core {
  double nu, lambda1, theta, tau;
  double poly() const { return 4.0 * theta * theta - 6.0 * theta + 3.0; }
  double two_theta_m1() const { return 2.0 * theta - 1.0; }
  double grad_sum_coef() const {
    // 16 theta / (nu (2 theta - 1)), the inverse weight of the
    // L^2(H^1) integer-time sums
    return 16.0 * theta / (nu * two_theta_m1());
  }
  double vol() const { return 108.0 / (nu * nu * nu); } // 108 / nu^3
};

SeedBlock seed_block(const Core& c, double u0_sq, double gradu0_sq,
                     double f) {
  SeedBlock b;
  b.u0_sq = u0_sq;
  b.gradu0_sq = gradu0_sq;
  const double th = c.theta, nu = c.nu;
  const double tm = c.two_theta_m1();
  b.K1 = u0_sq + 3.0 * f * f / (c.lambda1 * nu * nu * tm);
  const double c1_4 = 2.0 * b.K1 * b.K1 * (2.0 * th * th - 2.0 * th + 1.0);
  b.C1 = std::pow(c1_4, 0.25);
  const double om = 1.0 - th;
  b.D = std::abs(c1_4 * om * om * om * om * th * th * th /
                     (nu * nu * nu * tm * tm * tm) -
                 nu / (2.0 * th));
  b.K4 = 0.5 + b.D / nu;
  b.K2 = b.K4 * u0_sq + c.tau * nu / (8.0 * th) * c.poly() * gradu0_sq;
  b.K3 = (4.0 * th / (nu * tm) + b.D / (nu * nu)) * f * f / c.lambda1;
  b.C2 = th * (1.0 + 2.0 * th) * std::sqrt(b.K1) / std::sqrt(2.0);
  b.C5 = c.vol() * b.K1 * c.grad_sum_coef();
  b.C6 = 3.0 * b.C5 * b.K2 + 2.0 * b.C5 * b.C5 * b.K2 * b.K2;
  b.C7 = 3.0 * b.C5 * b.K3 + 4.0 * b.C5 * b.C5 * b.K2 * b.K3;
  b.C8 = 2.0 * b.C5 * b.C5 * b.K3 * b.K3;
  return b;
}

double c4_of_block(const Core& c, const SeedBlock& b, double eps1,
                   double delta1) {
  const double th = c.theta, nu = c.nu, om = 1.0 - th;
  return b.C2 * b.C2 / eps1 - nu * om * om + nu - 0.5 * nu * th * th +
         nu * th * (2.0 - th) / (2.0 * delta1);
}

LogVal log_k5(const Core& c, const SeedBlock& b, double x_sq_lg, double f,
              double t) {
  double add_lg = -kInf;
  if (f > 0.0 && t > 0.0)
    add_lg = std::log(t) + std::log(18.0 / (5.0 * c.nu)) + 2.0 * std::log(f);
  const double pref_lg = log_sum_exp({x_sq_lg, add_lg});
  double expo = b.C6;
  if (b.C7 > 0.0) expo += b.C7 * t; // guards 0 * inf when T0 = +inf
  if (b.C8 > 0.0) expo += b.C8 * t * t;
  return LogVal::from_log(pref_lg + expo);
}

} // namespace

LogVal BoundLedger::K5(double x, double f, double t, double u0_sq) const {
  const Core c{in.nu, in.lambda1, in.theta, in.tau};
  const SeedBlock b = seed_block(c, u0_sq, x * x, f);
  return log_k5(c, b, 2.0 * std::log(x), f, t);
}

LogVal BoundLedger::kappa3(double x, double f, double t, double u0_sq) const {
  const Core c{in.nu, in.lambda1, in.theta, in.tau};
  const SeedBlock b = seed_block(c, u0_sq, x * x, f);
  const double c4 = c4_of_block(c, b, eps1, delta1);
  const LogVal k5 = log_k5(c, b, 2.0 * std::log(x), f, t);
  const double lead = 15.0 * c.vol() * b.K1 * (1.0 + c4 / C3);
  return LogVal::from_log(-std::log(lead) - k5.lg);
}

LogVal BoundLedger::kappa4(double x, double f, double t, double u0_sq) const {
  const Core c{in.nu, in.lambda1, in.theta, in.tau};
  const SeedBlock b = seed_block(c, u0_sq, x * x, f);
  const LogVal k5 = log_k5(c, b, 2.0 * std::log(x), f, t);
  const double lead =
      15.0 * c.vol() * c.vol() / c.nu * b.K1 * b.K1 / c.lambda1;
  return LogVal::from_log(-std::log(lead) - 2.0 * k5.lg);
}

BoundLedger make_ledger(const LedgerInputs& in, ConstantsVariant variant) {
  if (!(in.nu > 0.0) || !(in.lambda1 > 0.0) || !(in.tau > 0.0))
    throw DomainError("ledger: nu, lambda1, tau must be positive");
  if (!(in.theta > 0.5 && in.theta <= 1.0))
    throw DomainError("ledger: theta must lie in (1/2, 1]");
  if (in.u0_l2 < 0.0 || in.u0_h1 < 0.0 || in.f_inf < 0.0)
    throw DomainError("ledger: norms must be nonnegative");
  if (!(in.r > 0.0)) throw DomainError("ledger: window length r must be positive");

  BoundLedger L;
  L.in = in;
  L.variant = variant;
  const Core c{in.nu, in.lambda1, in.theta, in.tau};
  const double th = in.theta, nu = in.nu, f = in.f_inf;
  const double tm = c.two_theta_m1();

  L.kappa1 = 1.0 / (in.lambda1 * nu);
  L.rho0 = f * f / (in.lambda1 * nu * nu * tm);

  const double u0_sq = in.u0_l2 * in.u0_l2;
  if (L.rho0 == 0.0) {
    L.T0 = u0_sq > 0.0 ? kInf : 0.0;
  } else {
    L.T0 = std::max(0.0, 15.0 / (in.lambda1 * nu * tm) *
                             std::log(u0_sq / L.rho0));
  }

  L.eps1 = in.eps1 > 0.0 ? in.eps1 : nu * th * th / 2.0;
  L.delta1 = in.delta1 > 0.0 ? in.delta1 : th / (2.0 * (2.0 - th));
  L.C3 = nu * th * th + 0.5 * nu * th * th - L.eps1 -
         nu * th * (2.0 - th) * L.delta1 / 2.0;

  L.main = seed_block(c, u0_sq, in.u0_h1 * in.u0_h1, f);
  L.C4 = c4_of_block(c, L.main, L.eps1, L.delta1);
  if (!(L.C3 > 0.0))
    throw DomainError("ledger: C3 <= 0 for the chosen eps1/delta1");
  if (!(L.C4 > 0.0))
    throw DomainError("ledger: C4 <= 0 for the chosen eps1/delta1");

  const double fterm =
      (2.0 / (nu * L.C3 * in.lambda1) + 2.0 / (in.lambda1 * nu * nu)) * f * f;
  L.kappa2 = fterm > 0.0 ? 1.0 / (15.0 * c.vol() * L.main.K1 * fterm) : kInf;

  L.K5_at_T = L.K5(in.u0_h1, f, in.T, u0_sq);
  const double t_main = L.T0 + in.r; // may be +inf when f = 0, u0 != 0
  L.K5_at_T0r = L.K5(in.u0_h1, f, t_main, u0_sq);
  L.kappa3_main = L.kappa3(in.u0_h1, f, t_main, u0_sq);
  L.kappa4_main = L.kappa4(in.u0_h1, f, t_main, u0_sq);

  // Long-time window constants. The source defines
  //   C10 = Q4 * (108/nu^3) * 16 theta / (nu (2theta-1))
  // but never defines Q4; substituting K1 -> 4 rho0 in the windowed
  // L^2(H^1) bound suggests Q4 = 4 K3. Both variants are carried.
  const double gsc = c.grad_sum_coef();
  const double P = c.poly();
  L.C9 = 4.0 * L.main.K4 * c.vol() * gsc;
  L.Q4_paper = 4.0 * L.main.K3;
  L.C10_paper = L.Q4_paper * c.vol() * gsc;
  L.C11 = c.vol() * 2.0 / tm * P;

  const double a2 = in.r * 18.0 / (5.0 * nu) * f * f;

  // Paper-literal window forms, exactly as printed.
  {
    BoundLedger::WindowForms w;
    const double r0 = L.rho0, r = in.r;
    w.a1 = 2.0 * L.C9 * r0 * r0 + 2.0 * L.C10_paper * r0 * r +
           4.0 / (15.0 * tm) * P + 8.0 * L.C9 * L.C9 * r0 * r0 * r0 * r0 +
           8.0 * L.C10_paper * L.C10_paper * r0 * r0 * r * r +
           16.0 / 225.0 * P * P / (tm * tm);
    w.a2 = a2;
    w.a3 = 4.0 * L.main.K4 * gsc * r0 + gsc * L.main.K3 * r +
           (r0 > 0.0 ? 2.0 / tm * P * nu * nu * nu / (15.0 * 108.0 * r0)
                     : kInf);
    w.a4 = L.C9 * r0 * r0 + L.C10_paper * r0 * r + 2.0 / (15.0 * tm) * P;
    const double pref_lg = log_sum_exp(
        {std::log(w.a3) + std::log(5.0 / (2.0 * r)),
         a2 > 0.0 ? std::log(a2) : -kInf});
    w.rho1_sq = LogVal::from_log(pref_lg + w.a1 + w.a4);
    L.paper = w;
  }

  // Derivation-consistent forms: K1 -> 4 rho0 in the recursion sequences and
  // in the absorbed-window L^2(H^1) constants; the leading tau xi_{n'} term
  // of the xi window sum is kept.
  const SeedBlock abs34 = seed_block(c, 4.0 * L.rho0, 0.0, f);
  L.Q4_derived = 4.0 * abs34.K3;
  L.C10_derived = L.Q4_derived * c.vol() * gsc;
  {
    BoundLedger::WindowForms w;
    const double k5cap_lg = L.K5_at_T0r.lg;
    const double a3_lg = log_sum_exp(
        {std::log(in.tau) + k5cap_lg,
         L.rho0 > 0.0 ? std::log(gsc * abs34.K4 * 4.0 * L.rho0) : -kInf,
         abs34.K3 > 0.0 ? std::log(gsc * abs34.K3 * in.r) : -kInf,
         std::log(gsc * in.tau * nu / (8.0 * th) * P) + k5cap_lg});
    w.a3 = std::exp(a3_lg);
    w.a2 = a2;
    w.a4 = L.rho0 > 0.0 ? c.vol() * 4.0 * L.rho0 * w.a3 : 0.0;
    w.a1 = 2.0 * w.a4 + 2.0 * w.a4 * w.a4;
    const double pref_lg =
        log_sum_exp({a3_lg + std::log(5.0 / (2.0 * in.r)),
                     a2 > 0.0 ? std::log(a2) : -kInf});
    w.rho1_sq = LogVal::from_log(pref_lg + w.a1 + w.a4);
    L.derived = w;
  }

  const bool lit = variant == ConstantsVariant::PaperLiteral;
  const LogVal rho1_sq = lit ? L.paper.rho1_sq : L.derived.rho1_sq;
  const double rho1 = std::exp(0.5 * rho1_sq.lg);
  const double restart_seed = lit ? u0_sq : 4.0 * L.rho0;

  L.absorbed = seed_block(c, 4.0 * L.rho0, rho1_sq.value, f);
  L.K6 = L.K5(rho1, f, in.r, restart_seed);
  L.K7 = L.K5_at_T0r.lg >= L.K6.lg ? L.K5_at_T0r : L.K6;
  L.kappa3_restart = L.kappa3(rho1, f, in.r, restart_seed);
  L.kappa4_restart = L.kappa4(rho1, f, in.r, restart_seed);

  L.admissible_tau = admissible_tau(L);

  L.provenance["K1"] = "paper-literal: ||u0||^2 + 3 rho0";
  L.provenance["K2,K3,K4,C1"] = "paper-literal notation block before the "
                                "integer-time L^2(H^1) bound";
  L.provenance["C3,C4"] =
      "positivity-constrained; defaults eps1 = nu theta^2/2, "
      "delta1 = theta/(2(2-theta)) give C3 = (3/4) nu theta^2";
  L.provenance["C10"] =
      "Q4 undefined in source; paper variant uses Q4 = 4 K3, derived variant "
      "rebuilds K3 with K1 -> 4 rho0";
  L.provenance["rho1"] = lit ? "paper-literal window forms"
                             : "derivation-consistent window forms "
                               "(K1 -> 4 rho0, leading window term kept)";
  L.provenance["T0"] = "clamped at 0 when ||u0||^2 <= rho0";
  return L;
}

LogVal admissible_tau(const BoundLedger& L) {
  LogVal best = LogVal::from_value(L.kappa1);
  auto consider = [&best](const LogVal& v) {
    if (v.lg < best.lg) best = v;
  };
  consider(LogVal::from_value(L.kappa2));
  consider(L.kappa3_main);
  consider(L.kappa4_main);
  consider(L.kappa3_restart);
  consider(L.kappa4_restart);
  return best;
}

std::vector<std::string> ledger_self_check(const BoundLedger& L) {
  std::vector<std::string> notes;
  const double x0 = L.in.u0_h1 > 0.0 ? L.in.u0_h1 : 1.0;
  const double f0 = L.in.f_inf > 0.0 ? L.in.f_inf : 1.0;
  const double t0 = L.in.T > 0.0 ? L.in.T : 1.0;
  const double factors[] = {1.0, 1.05, 1.15, 1.3};
  auto k5 = [&](double x, double f, double t) {
    return L.K5(x, f, t, x * x / L.in.lambda1).lg;
  };

  for (size_t i = 0; i + 1 < std::size(factors); ++i) {
    const double lo = factors[i], hi = factors[i + 1];
    if (k5(x0 * hi, f0, t0) + 1e-12 < k5(x0 * lo, f0, t0))
      notes.push_back("K5 not nondecreasing in ||grad u0|| near sample point");
    if (k5(x0, f0 * hi, t0) + 1e-12 < k5(x0, f0 * lo, t0))
      notes.push_back("K5 not nondecreasing in ||f||_inf near sample point");
    if (k5(x0, f0, t0 * hi) + 1e-12 < k5(x0, f0, t0 * lo))
      notes.push_back("K5 not nondecreasing in t near sample point");
    auto kap3 = [&](double x, double f, double t) {
      return L.kappa3(x, f, t, x * x / L.in.lambda1).lg;
    };
    auto kap4 = [&](double x, double f, double t) {
      return L.kappa4(x, f, t, x * x / L.in.lambda1).lg;
    };
    if (kap3(x0 * hi, f0, t0) > kap3(x0 * lo, f0, t0) + 1e-12)
      notes.push_back("kappa3 not decreasing in ||grad u0||");
    if (kap3(x0, f0 * hi, t0) > kap3(x0, f0 * lo, t0) + 1e-12)
      notes.push_back("kappa3 not decreasing in ||f||_inf");
    if (kap4(x0 * hi, f0, t0) > kap4(x0 * lo, f0, t0) + 1e-12)
      notes.push_back("kappa4 not decreasing in ||grad u0||");
  }

  // kappa2 ~ 1/(K1(f) f^2) must decrease in ||f||_inf.
  auto kappa2_of = [&](double f) {
    LedgerInputs in = L.in;
    in.f_inf = f;
    return make_ledger(in, L.variant).kappa2;
  };
  if (kappa2_of(f0 * 1.3) > kappa2_of(f0) + 1e-12)
    notes.push_back("kappa2 not decreasing in ||f||_inf");
  return notes;
}

} // namespace oneleg
