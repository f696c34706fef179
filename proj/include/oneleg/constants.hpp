#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oneleg {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Closed-form method constants for one (theta, lambda1*nu*tau) pair:
///   epsilon = lambda1 nu (2 theta - 1) tau,
///   a, b    = (sqrt(R1) -/+ sqrt(R2))/2 with
///             R1 = (2 theta - 1)(4 theta - lambda1 nu (2 theta + 1)(1 - theta) tau),
///             R2 = lambda1 nu (1 - theta) tau,
///   alpha   = theta - (2 theta - 1)(1 - theta) lambda1 nu tau / 2 + sqrt(R1 R2)/2.
/// They satisfy
///   alpha + epsilon + a^2 = theta^2 (2 + lambda1 nu theta tau),
///   b^2 - alpha           = (theta-1)[(1 + lambda1 nu theta tau)(theta-1) + (theta+1)],
///   2 a b                 = 2 theta [theta - (1-theta)(1 + lambda1 nu theta tau)].
struct ThetaConstants {
  double theta = 0.0;
  double lambda_nu_tau = 0.0; // lambda1 * nu * tau
  double alpha = 0.0;
  double epsilon = 0.0;
  double a = 0.0;
  double b = 0.0;
};

ThetaConstants theta_constants(double theta, double lambda1, double nu,
                               double tau);
ThetaConstants theta_constants_lnt(double theta, double lambda_nu_tau);

/// Residuals of the three identities above, relative to max(|rhs|, 1).
struct IdentityResiduals {
  double sum_rule = 0.0;   // alpha + epsilon + a^2
  double diff_rule = 0.0;  // b^2 - alpha
  double cross_rule = 0.0; // 2ab
  double max() const;
};

IdentityResiduals check_identities(const ThetaConstants& tc);

/// (a+b)^2 + epsilon = 4 theta^2 - 1 + (2 theta - 1)^2 (1 + theta lambda1 nu tau).
/// Zero exactly at theta = 1/2: no positive epsilon exists there.
double half_theta_obstruction(double theta, double lambda_nu_tau);

enum class ConstantsVariant { PaperLiteral, DerivationConsistent };

std::string to_string(ConstantsVariant v);

/// A value that may exceed double range; lg is the natural log (always
/// finite unless the value is exactly 0 or truly infinite).
struct LogVal {
  double value = 0.0;
  double lg = 0.0;
  static LogVal from_log(double lg);
  static LogVal from_value(double v);
};

struct LedgerInputs {
  double nu = 1.0;
  double lambda1 = 1.0;
  double theta = 0.75;
  double tau = 0.1;
  double u0_l2 = 0.0;  // ||u_0||
  double u0_h1 = 0.0;  // ||grad u_0||
  double f_inf = 0.0;  // ||f||_inf
  double T = 1.0;      // finite-time horizon (reporting)
  double r = 4.0;      // uniform-Gronwall window length
  double eps1 = -1.0;  // <0 means default nu theta^2 / 2
  double delta1 = -1.0; // <0 means default theta / (2(2-theta))
};

/// Constants derived from one L^2/H^1 seed (initial data or the absorbed
/// state). Everything here is the notation of the H- and V-stability
/// estimates; D is |C1^4 (1-theta)^4 theta^3 / (nu^3 (2theta-1)^3) - nu/(2theta)|.
struct SeedBlock {
  double u0_sq = 0.0;     // L^2 seed squared
  double gradu0_sq = 0.0; // H^1 seed squared
  double K1 = 0.0, C1 = 0.0, D = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0;
  double C2 = 0.0, C5 = 0.0, C6 = 0.0, C7 = 0.0, C8 = 0.0;
};

struct BoundLedger {
  LedgerInputs in;
  ConstantsVariant variant = ConstantsVariant::DerivationConsistent;

  double kappa1 = 0.0; // 1/(lambda1 nu), the standing time-step restriction
  double rho0 = 0.0;   // ||f||_inf^2 / (lambda1 nu^2 (2theta-1))
  double T0 = 0.0;     // absorbing time, clamped at 0; +inf if f = 0, u0 != 0

  double eps1 = 0.0, delta1 = 0.0;
  double C3 = 0.0, C4 = 0.0;

  SeedBlock main; // seeded by (||u0||^2, ||grad u0||^2)
  SeedBlock absorbed; // seeded by (4 rho0, rho1^2): derivation-consistent restart

  double kappa2 = 0.0;

  // kappa3/kappa4 for the two evaluation points of the admissibility bound.
  LogVal kappa3_main, kappa4_main;       // K5(||grad u0||, f, T0 + r)
  LogVal kappa3_restart, kappa4_restart; // K5(rho1, f, r), active variant

  double C9 = 0.0, C11 = 0.0;
  double C10_paper = 0.0, C10_derived = 0.0; // Q4 is undefined in the source
  double Q4_paper = 0.0, Q4_derived = 0.0;

  struct WindowForms {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    LogVal rho1_sq;
  };
  WindowForms paper, derived;

  LogVal K5_at_T;      // K5(||grad u0||, f, T) for the configured horizon
  LogVal K5_at_T0r;    // K5(||grad u0||, f, T0 + r)
  LogVal K6, K7;       // active variant
  LogVal admissible_tau;

  std::map<std::string, std::string> provenance;
  std::vector<std::string> self_check_notes;

  /// K5(x, f, t) with an explicit L^2 seed for the constants inside
  /// (pass x*x/lambda1 when only the H^1 size is known).
  LogVal K5(double x, double f, double t, double u0_sq) const;
  LogVal kappa3(double x, double f, double t, double u0_sq) const;
  LogVal kappa4(double x, double f, double t, double u0_sq) const;

  const WindowForms& active() const {
    return variant == ConstantsVariant::PaperLiteral ? paper : derived;
  }
};

/// Evaluates every constant in the ledger. Throws DomainError when C3 <= 0 or
/// C4 <= 0 under the chosen (eps1, delta1), or when inputs are inadmissible.
BoundLedger make_ledger(const LedgerInputs& in,
                        ConstantsVariant variant =
                            ConstantsVariant::DerivationConsistent);

/// min{kappa1, kappa2, kappa3(T0+r), kappa4(T0+r), kappa3(rho1, r),
///     kappa4(rho1, r)} for the ledger's active variant.
LogVal admissible_tau(const BoundLedger& ledger);

/// Sampling checks: K5 nondecreasing in each argument, kappa2..kappa4
/// decreasing in ||f||_inf and in the K5 arguments. Returns human-readable
/// failure notes (empty when all sampled comparisons hold).
std::vector<std::string> ledger_self_check(const BoundLedger& ledger);

} // namespace oneleg
