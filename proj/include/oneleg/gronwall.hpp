#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oneleg {

/// Positive sequences for the discrete Gronwall lemmas. All four vectors
/// share one index range 0..n_star; the recursion they certify is
///   xi_n <= xi_{n-1} (1 + tau alpha_{n-1}) (1 + tau eta_{n-1}) + tau zeta_n.
struct SequenceBundle {
  double tau = 0.0;
  std::vector<double> xi, alpha, eta, zeta;

  int n_star() const { return static_cast<int>(xi.size()) - 1; }
  void validate() const;
};

/// Discrete Gronwall bound for 2 <= n <= n_star:
///   xi_0 exp(sum_{i<n} tau eta_i) exp(sum_{i<n} tau alpha_i)
///   + sum_{i=1}^{n-1} tau zeta_i exp(sum_{j=i}^{n-1} tau eta_j)
///                              exp(sum_{j=i}^{n-1} tau alpha_j)
///   + tau zeta_n.
/// Sums use compensated accumulation so the exponents stay stable for long
/// sequences.
double dgl_bound(const SequenceBundle& b, int n);

/// Discrete uniform Gronwall bound (a3/(tau n2) + a2) e^{a1} e^{a4}.
double dugl_bound(double a1, double a2, double a3, double a4, double tau,
                  int n2);

struct WindowConstants {
  double a1 = 0.0; // max window sum of tau * eta
  double a2 = 0.0; // max window sum of tau * zeta
  double a3 = 0.0; // max window sum of tau * xi
  double a4 = 0.0; // max window sum of tau * alpha
};

/// Tightest window-sum constants: for every n' with n1 <= n' <= n_star - n2,
/// sums run over n = n' .. n' + n2.
WindowConstants verify_hypotheses(const SequenceBundle& b, int n1, int n2,
                                  int n_star);

struct WindowError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

} // namespace oneleg
