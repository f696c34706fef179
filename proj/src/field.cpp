#include "oneleg/field.hpp"

#include "oneleg/fft.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oneleg {

namespace {

inline int wrap(int k, int m) { return k >= 0 ? k : k + m; }

// Scatter retained modes into an m x m FFT layout (unit stride in k2).
void embed(const TorusGrid& g, std::span<const Complex> c,
           std::span<Complex> buf, int m) {
  std::fill(buf.begin(), buf.end(), Complex{0.0, 0.0});
  const int K = g.kmax();
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    const int r = wrap(k1, m);
    for (int k2 = -K; k2 <= K; ++k2, ++i)
      buf[static_cast<size_t>(r) * m + wrap(k2, m)] = c[i];
  }
}

void extract(const TorusGrid& g, std::span<const Complex> buf, int m,
             std::span<Complex> c) {
  const int K = g.kmax();
  const double inv = 1.0 / (static_cast<double>(m) * m);
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    const int r = wrap(k1, m);
    for (int k2 = -K; k2 <= K; ++k2, ++i)
      c[i] = buf[static_cast<size_t>(r) * m + wrap(k2, m)] * inv;
  }
}

void hermitian_symmetrize(const TorusGrid& g, std::span<Complex> c) {
  const int K = g.kmax();
  const int stride = g.modes_per_axis();
  auto at = [&](int k1, int k2) -> Complex& {
    return c[static_cast<size_t>(k1 + K) * stride + (k2 + K)];
  };
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const Complex avg = 0.5 * (at(k1, k2) + std::conj(at(-k1, -k2)));
      at(k1, k2) = avg;
      at(-k1, -k2) = std::conj(avg);
    }
  }
  at(0, 0) = Complex{at(0, 0).real(), 0.0};
}

// Physical samples of one spectral component on the m x m grid.
void to_physical(const TorusGrid& g, std::span<const Complex> c, int m,
                 std::vector<double>& out) {
  auto& ws = dft_workspace(m);
  embed(g, c, ws.buf(), m);
  ws.inverse();
  out.resize(static_cast<size_t>(m) * m);
  auto buf = ws.buf();
  for (size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
}

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

double weighted_energy(const VelocityField& u, int power) {
  const TorusGrid& g = u.grid;
  const int K = g.kmax();
  const double s2 = g.wave_scale() * g.wave_scale();
  Neumaier acc;
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2, ++i) {
      const double ksq = s2 * (static_cast<double>(k1) * k1 +
                               static_cast<double>(k2) * k2);
      double w = 1.0;
      for (int p = 0; p < power; ++p) w *= ksq;
      acc.add(w * (std::norm(u.c1[i]) + std::norm(u.c2[i])));
    }
  }
  return g.area() * acc.value();
}

} // namespace

void require_same_grid(const VelocityField& a, const VelocityField& b) {
  if (!(a.grid == b.grid))
    throw GridMismatchError("velocity fields live on different grids");
}

VelocityField zero_field(const TorusGrid& g) { return VelocityField(g); }

VelocityField taylor_green(const TorusGrid& g, double amplitude) {
  VelocityField u(g);
  const Complex q{0.0, -0.25 * amplitude}; // c/(4i)
  u.set_coeff(0, 1, 1, q);
  u.set_coeff(0, 1, -1, -q);
  u.set_coeff(0, -1, 1, q);
  u.set_coeff(0, -1, -1, -q);
  u.set_coeff(1, 1, 1, -q);
  u.set_coeff(1, 1, -1, -q);
  u.set_coeff(1, -1, 1, q);
  u.set_coeff(1, -1, -1, q);
  return u;
}

VelocityField leray_project(const VelocityField& raw) {
  VelocityField u = raw;
  const int K = u.grid.kmax();
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2, ++i) {
      const double ksq = static_cast<double>(k1) * k1 +
                         static_cast<double>(k2) * k2;
      if (ksq == 0.0) {
        u.c1[i] = u.c2[i] = Complex{0.0, 0.0};
        continue;
      }
      const Complex kd = (static_cast<double>(k1) * u.c1[i] +
                          static_cast<double>(k2) * u.c2[i]) / ksq;
      u.c1[i] -= static_cast<double>(k1) * kd;
      u.c2[i] -= static_cast<double>(k2) * kd;
    }
  }
  hermitian_symmetrize(u.grid, u.c1);
  hermitian_symmetrize(u.grid, u.c2);
  return u;
}

VelocityField stokes_apply(const VelocityField& u) {
  VelocityField v(u.grid);
  const int K = u.grid.kmax();
  const double s2 = u.grid.wave_scale() * u.grid.wave_scale();
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2, ++i) {
      const double ksq = s2 * (static_cast<double>(k1) * k1 +
                               static_cast<double>(k2) * k2);
      v.c1[i] = ksq * u.c1[i];
      v.c2[i] = ksq * u.c2[i];
    }
  }
  return v;
}

double l2_norm(const VelocityField& u) { return std::sqrt(weighted_energy(u, 0)); }
double h1_seminorm(const VelocityField& u) { return std::sqrt(weighted_energy(u, 1)); }
double lap_norm(const VelocityField& u) { return std::sqrt(weighted_energy(u, 2)); }

double l4_norm(const VelocityField& u) {
  // |u|^4 has per-axis degree 2n; the 4n-point rectangle rule is exact.
  const int m = 4 * u.grid.n;
  std::vector<double> p1, p2;
  to_physical(u.grid, u.c1, m, p1);
  to_physical(u.grid, u.c2, m, p2);
  Neumaier acc;
  for (size_t i = 0; i < p1.size(); ++i) {
    const double s = p1[i] * p1[i] + p2[i] * p2[i];
    acc.add(s * s);
  }
  const double h = u.grid.length / m;
  return std::pow(acc.value() * h * h, 0.25);
}

FieldNorms norms(const VelocityField& u) {
  FieldNorms out;
  out.l2 = l2_norm(u);
  out.h1_semi = h1_seminorm(u);
  out.lap = lap_norm(u);
  out.l4 = l4_norm(u);
  return out;
}

double inner_product(const VelocityField& u, const VelocityField& v) {
  require_same_grid(u, v);
  Neumaier acc;
  for (size_t i = 0; i < u.c1.size(); ++i) {
    acc.add(u.c1[i].real() * v.c1[i].real() + u.c1[i].imag() * v.c1[i].imag());
    acc.add(u.c2[i].real() * v.c2[i].real() + u.c2[i].imag() * v.c2[i].imag());
  }
  return u.grid.area() * acc.value();
}

VelocityField advect(const VelocityField& u, const VelocityField& v) {
  require_same_grid(u, v);
  const TorusGrid& g = u.grid;
  const int m = 2 * g.n; // 3/2-rule safe: quadratic products are alias-free
  const int K = g.kmax();
  auto& ws = dft_workspace(m);

  std::vector<double> pu1, pu2, d1, d2;
  to_physical(g, u.c1, m, pu1);
  to_physical(g, u.c2, m, pu2);

  const double s = g.wave_scale();
  std::vector<Complex> grad(static_cast<size_t>(g.retained_modes()));
  VelocityField out(g);

  for (int comp = 0; comp < 2; ++comp) {
    const auto& vc = comp == 0 ? v.c1 : v.c2;
    for (int axis = 0; axis < 2; ++axis) {
      size_t i = 0;
      for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2, ++i)
          grad[i] = Complex{0.0, s * (axis == 0 ? k1 : k2)} * vc[i];
      to_physical(g, grad, m, axis == 0 ? d1 : d2);
    }
    auto buf = ws.buf();
    for (size_t i = 0; i < buf.size(); ++i)
      buf[i] = Complex{pu1[i] * d1[i] + pu2[i] * d2[i], 0.0};
    ws.forward();
    extract(g, buf, m, comp == 0 ? out.c1 : out.c2);
    hermitian_symmetrize(g, comp == 0 ? out.c1 : out.c2);
  }
  return out;
}

double trilinear_b(const VelocityField& u, const VelocityField& v,
                   const VelocityField& w) {
  require_same_grid(u, w);
  return inner_product(advect(u, v), w);
}

VelocityField nonlinear_term(const VelocityField& u, const VelocityField& v) {
  return leray_project(advect(u, v));
}

VelocityField random_divfree_field(const TorusGrid& g, uint64_t seed,
                                   double decay, double amplitude) {
  VelocityField u(g);
  if (amplitude == 0.0) return u;

  std::mt19937_64 gen(seed);
  auto uniform = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  auto gauss_pair = [&](double& z1, double& z2) {
    const double r = std::sqrt(-2.0 * std::log1p(-uniform()));
    const double t = kTwoPi * uniform();
    z1 = r * std::cos(t);
    z2 = r * std::sin(t);
  };

  const int K = g.kmax();
  const double s2 = g.wave_scale() * g.wave_scale();
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double ksq = s2 * (static_cast<double>(k1) * k1 +
                               static_cast<double>(k2) * k2);
      const double sigma = std::pow(1.0 + ksq, -0.5 * decay);
      double a, b, c, d;
      gauss_pair(a, b);
      gauss_pair(c, d);
      u.set_coeff(0, k1, k2, sigma * Complex{a, b});
      u.set_coeff(1, k1, k2, sigma * Complex{c, d});
      u.set_coeff(0, -k1, -k2, std::conj(u.coeff(0, k1, k2)));
      u.set_coeff(1, -k1, -k2, std::conj(u.coeff(1, k1, k2)));
    }
  }
  u = leray_project(u);
  const double nrm = l2_norm(u);
  return nrm > 0.0 ? scale(u, amplitude / nrm) : u;
}

VelocityField add(const VelocityField& u, const VelocityField& v) {
  return lincomb(1.0, u, 1.0, v);
}

VelocityField sub(const VelocityField& u, const VelocityField& v) {
  return lincomb(1.0, u, -1.0, v);
}

VelocityField scale(const VelocityField& u, double s) {
  VelocityField v = u;
  for (auto& c : v.c1) c *= s;
  for (auto& c : v.c2) c *= s;
  return v;
}

VelocityField lincomb(double a, const VelocityField& u, double b,
                      const VelocityField& v) {
  require_same_grid(u, v);
  VelocityField w(u.grid);
  for (size_t i = 0; i < w.c1.size(); ++i) {
    w.c1[i] = a * u.c1[i] + b * v.c1[i];
    w.c2[i] = a * u.c2[i] + b * v.c2[i];
  }
  return w;
}

double divergence_defect(const VelocityField& u) {
  const int K = u.grid.kmax();
  double worst = 0.0, amp = 0.0;
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2, ++i) {
      const double kn = std::hypot(k1, k2);
      const double cn = std::sqrt(std::norm(u.c1[i]) + std::norm(u.c2[i]));
      amp = std::max(amp, cn);
      if (kn == 0.0) continue;
      worst = std::max(worst, std::abs(static_cast<double>(k1) * u.c1[i] +
                                       static_cast<double>(k2) * u.c2[i]) / kn);
    }
  }
  return amp > 0.0 ? worst / amp : worst;
}

double hermitian_defect(const VelocityField& u) {
  const int K = u.grid.kmax();
  double worst = 0.0, amp = 0.0;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      for (int comp = 0; comp < 2; ++comp) {
        const Complex c = u.coeff(comp, k1, k2);
        amp = std::max(amp, std::abs(c));
        worst = std::max(worst,
                         std::abs(c - std::conj(u.coeff(comp, -k1, -k2))));
      }
    }
  }
  return amp > 0.0 ? worst / amp : worst;
}

double mean_mode_abs(const VelocityField& u) {
  return std::abs(u.coeff(0, 0, 0)) + std::abs(u.coeff(1, 0, 0));
}

double l2_diff(const VelocityField& u, const VelocityField& v) {
  return l2_norm(sub(u, v));
}

double h1_semi_diff(const VelocityField& u, const VelocityField& v) {
  return h1_seminorm(sub(u, v));
}

} // namespace oneleg
