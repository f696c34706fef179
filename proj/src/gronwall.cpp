#include "oneleg/gronwall.hpp"

#include <cmath>

namespace oneleg {

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

} // namespace

void SequenceBundle::validate() const {
  if (tau <= 0.0) throw std::invalid_argument("bundle: tau must be positive");
  const size_t len = xi.size();
  if (len < 2 || alpha.size() != len || eta.size() != len ||
      zeta.size() != len)
    throw std::invalid_argument("bundle: sequences must share length >= 2");
  for (size_t i = 0; i < len; ++i)
    if (!(xi[i] > 0.0) || !(alpha[i] > 0.0) || !(eta[i] > 0.0) ||
        !(zeta[i] > 0.0))
      throw std::invalid_argument("bundle: sequences must be positive");
}

double dgl_bound(const SequenceBundle& b, int n) {
  if (n < 2 || n > b.n_star())
    throw std::out_of_range("dgl_bound: n outside [2, n_star]");

  // suffix[i] = sum_{j=i}^{n-1} tau (eta_j + alpha_j); built back to front
  // with compensated partial sums.
  std::vector<double> suffix(static_cast<size_t>(n) + 1, 0.0);
  {
    Neumaier acc;
    for (int j = n - 1; j >= 0; --j) {
      acc.add(b.tau * b.eta[static_cast<size_t>(j)]);
      acc.add(b.tau * b.alpha[static_cast<size_t>(j)]);
      suffix[static_cast<size_t>(j)] = acc.value();
    }
  }

  Neumaier total;
  total.add(b.xi[0] * std::exp(suffix[0]));
  for (int i = 1; i <= n - 1; ++i)
    total.add(b.tau * b.zeta[static_cast<size_t>(i)] *
              std::exp(suffix[static_cast<size_t>(i)]));
  total.add(b.tau * b.zeta[static_cast<size_t>(n)]);
  return total.value();
}

double dugl_bound(double a1, double a2, double a3, double a4, double tau,
                  int n2) {
  if (n2 < 1) throw std::invalid_argument("dugl_bound: n2 must be >= 1");
  return (a3 / (tau * n2) + a2) * std::exp(a1) * std::exp(a4);
}

WindowConstants verify_hypotheses(const SequenceBundle& b, int n1, int n2,
                                  int n_star) {
  if (n_star > b.n_star())
    throw WindowError("verify_hypotheses: n_star exceeds bundle length");
  // n1 = n_star - n2 (a single window) is allowed; the stricter
  // n1 + n2 + 1 <= n_star is only needed for a nonempty conclusion range.
  if (!(n1 >= 0 && n2 >= 1 && n1 <= n_star - n2))
    throw WindowError("verify_hypotheses: infeasible window (need "
                      "0 <= n1 <= n_star - n2, n2 >= 1)");

  WindowConstants out;
  for (int start = n1; start <= n_star - n2; ++start) {
    Neumaier se, sz, sx, sa;
    for (int n = start; n <= start + n2; ++n) {
      const auto i = static_cast<size_t>(n);
      se.add(b.tau * b.eta[i]);
      sz.add(b.tau * b.zeta[i]);
      sx.add(b.tau * b.xi[i]);
      sa.add(b.tau * b.alpha[i]);
    }
    out.a1 = std::max(out.a1, se.value());
    out.a2 = std::max(out.a2, sz.value());
    out.a3 = std::max(out.a3, sx.value());
    out.a4 = std::max(out.a4, sa.value());
  }
  return out;
}

} // namespace oneleg
