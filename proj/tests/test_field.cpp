#include <doctest.h>

#include "oneleg/field.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace oneleg;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Slow direct evaluation, independent of the FFT path.
double eval_direct(const VelocityField& u, int comp, double x, double y,
                   int dx = 0, int dy = 0) {
  const int K = u.grid.kmax();
  const double s = u.grid.wave_scale();
  std::complex<double> acc{0.0, 0.0};
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      std::complex<double> c = u.coeff(comp, k1, k2);
      for (int d = 0; d < dx; ++d) c *= std::complex<double>{0.0, s * k1};
      for (int d = 0; d < dy; ++d) c *= std::complex<double>{0.0, s * k2};
      acc += c * std::exp(std::complex<double>{0.0, s * (k1 * x + k2 * y)});
    }
  }
  return acc.real();
}

double quadrature_b(const VelocityField& u, const VelocityField& v,
                    const VelocityField& w, int m) {
  const double h = u.grid.length / m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double x = i * h, y = j * h;
      const double u1 = eval_direct(u, 0, x, y), u2 = eval_direct(u, 1, x, y);
      for (int comp = 0; comp < 2; ++comp) {
        const double adv = u1 * eval_direct(v, comp, x, y, 1, 0) +
                           u2 * eval_direct(v, comp, x, y, 0, 1);
        acc += adv * eval_direct(w, comp, x, y) * h * h;
      }
    }
  }
  return acc;
}

} // namespace

TEST_CASE("grid validation and lambda1") {
  CHECK_THROWS_AS(make_grid(3), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, -1.0), std::invalid_argument);
  const TorusGrid g = make_grid(32);
  CHECK(g.lambda1() == doctest::Approx(1.0).epsilon(1e-15));
  const TorusGrid g2 = make_grid(8, kTwoPi / 2.0);
  CHECK(g2.lambda1() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("Taylor-Green analytic norms") {
  const TorusGrid g = make_grid(32);
  const VelocityField u = taylor_green(g, 1.0);
  const FieldNorms nm = norms(u);
  // closed forms: ||u||^2 = 2 pi^2, ||grad u||^2 = 4 pi^2,
  // ||u||_L4^4 = 5 pi^2 / 4, ||Delta u||^2 = 2 ||grad u||^2
  CHECK(nm.l2 * nm.l2 == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-12));
  CHECK(nm.h1_semi * nm.h1_semi ==
        doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
  CHECK(std::pow(nm.l4, 4) ==
        doctest::Approx(5.0 * kPi * kPi / 4.0).epsilon(1e-12));
  CHECK(nm.lap * nm.lap ==
        doctest::Approx(8.0 * kPi * kPi).epsilon(1e-12));

  const VelocityField u3 = taylor_green(g, 3.0);
  CHECK(l2_norm(u3) == doctest::Approx(3.0 * nm.l2).epsilon(1e-13));

  CHECK(divergence_defect(u) < 1e-15);
  CHECK(hermitian_defect(u) < 1e-15);
  CHECK(mean_mode_abs(u) == 0.0);
}

TEST_CASE("zero field maps to zero through all operations") {
  const TorusGrid g = make_grid(16);
  const VelocityField z = zero_field(g);
  CHECK(l2_norm(leray_project(z)) == 0.0);
  CHECK(l2_norm(stokes_apply(z)) == 0.0);
  const FieldNorms nm = norms(z);
  CHECK(nm.l2 == 0.0);
  CHECK(nm.h1_semi == 0.0);
  CHECK(nm.l4 == 0.0);
  CHECK(nm.lap == 0.0);
  const VelocityField u = random_divfree_field(g, 11, 3.0, 1.0);
  CHECK(trilinear_b(z, u, u) == 0.0);
  CHECK(trilinear_b(u, z, u) == 0.0);
  CHECK(l2_norm(nonlinear_term(u, z)) == 0.0);
  CHECK(l2_norm(nonlinear_term(z, u)) == 0.0);
}

TEST_CASE("Leray projection kills gradient fields") {
  const TorusGrid g = make_grid(16);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VelocityField raw(g);
  const int K = g.kmax();
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const Complex ghat{dist(gen), dist(gen)}; // scalar potential mode
      raw.set_coeff(0, k1, k2, static_cast<double>(k1) * ghat);
      raw.set_coeff(1, k1, k2, static_cast<double>(k2) * ghat);
      raw.set_coeff(0, -k1, -k2, -static_cast<double>(k1) * std::conj(ghat));
      raw.set_coeff(1, -k1, -k2, -static_cast<double>(k2) * std::conj(ghat));
    }
  }
  const double raw_norm = l2_norm(raw);
  REQUIRE(raw_norm > 0.1);
  CHECK(l2_norm(leray_project(raw)) < 1e-14 * raw_norm);
}

TEST_CASE("Leray projection is idempotent and total") {
  const TorusGrid g = make_grid(16);
  const VelocityField u = random_divfree_field(g, 3, 2.5, 2.0);
  const VelocityField pu = leray_project(u);
  CHECK(l2_diff(pu, u) <= 1e-15 * l2_norm(u));
  CHECK(divergence_defect(u) < 1e-14);
}

TEST_CASE("Stokes operator eigenmodes and quadratic form") {
  const TorusGrid g = make_grid(16);
  VelocityField u(g);
  u.set_coeff(1, 1, 0, Complex{0.5, 0.0}); // k = (1,0), div-free component
  u.set_coeff(1, -1, 0, Complex{0.5, 0.0});
  const VelocityField au = stokes_apply(u);
  CHECK(std::abs(au.coeff(1, 1, 0) - u.coeff(1, 1, 0)) < 1e-15); // |k|^2 = 1

  const VelocityField w = random_divfree_field(g, 17, 3.0, 1.5);
  const double q = inner_product(stokes_apply(w), w);
  const double h1 = h1_seminorm(w);
  CHECK(q == doctest::Approx(h1 * h1).epsilon(1e-12));

  const VelocityField v = random_divfree_field(g, 18, 3.0, 0.7);
  CHECK(inner_product(stokes_apply(w), v) ==
        doctest::Approx(inner_product(w, stokes_apply(v))).epsilon(1e-12));
}

TEST_CASE("Parseval against direct physical quadrature") {
  const TorusGrid g = make_grid(16);
  const VelocityField u = random_divfree_field(g, 23, 2.0, 1.3);
  const int m = 2 * g.n;
  const double h = g.length / m;
  double quad = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double a = eval_direct(u, 0, i * h, j * h);
      const double b = eval_direct(u, 1, i * h, j * h);
      quad += (a * a + b * b) * h * h;
    }
  const double l2 = l2_norm(u);
  CHECK(quad == doctest::Approx(l2 * l2).epsilon(1e-12));
}

TEST_CASE("Poincare-Friedrichs holds exactly") {
  const TorusGrid g = make_grid(16);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const VelocityField u = random_divfree_field(g, seed, 1.5, 1.0);
    CHECK(l2_norm(u) <=
          h1_seminorm(u) / std::sqrt(g.lambda1()) * (1.0 + 1e-13));
  }
}

TEST_CASE("trilinear form: exactness, skew symmetry, zero diagonal") {
  const TorusGrid g = make_grid(8);
  const VelocityField u = random_divfree_field(g, 101, 2.0, 1.1);
  const VelocityField v = random_divfree_field(g, 102, 2.0, 0.9);
  const VelocityField w = random_divfree_field(g, 103, 2.0, 1.4);

  // pseudospectral value against direct quadrature (cubic integrand:
  // 2n points per axis are alias-free for n = 8 -> degree 12 < 16)
  const double b_lib = trilinear_b(u, v, w);
  const double b_direct = quadrature_b(u, v, w, 2 * g.n);
  CHECK(b_lib == doctest::Approx(b_direct).epsilon(1e-11));

  const TorusGrid g32 = make_grid(32);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const VelocityField a = random_divfree_field(g32, 3 * seed + 1, 2.0, 1.0);
    const VelocityField b = random_divfree_field(g32, 3 * seed + 2, 2.0, 1.0);
    const VelocityField c = random_divfree_field(g32, 3 * seed + 3, 2.0, 1.0);
    const double scale = l2_norm(a) * h1_seminorm(b) * h1_seminorm(c) /
                         std::sqrt(g32.lambda1());
    CHECK(std::abs(trilinear_b(a, b, c) + trilinear_b(a, c, b)) <=
          1e-12 * scale);
    CHECK(std::abs(trilinear_b(a, b, b)) <=
          1e-12 * l2_norm(a) * h1_seminorm(b) * l2_norm(b));
  }
}

TEST_CASE("nonlinear term: Taylor-Green degeneracy and duality") {
  const TorusGrid g = make_grid(32);
  const VelocityField tg = taylor_green(g, 2.0);
  const VelocityField n = nonlinear_term(tg, tg);
  CHECK(l2_norm(n) <= 1e-12 * l2_norm(tg) * h1_seminorm(tg));

  const VelocityField u = random_divfree_field(g, 7, 2.5, 1.0);
  const VelocityField v = random_divfree_field(g, 8, 2.5, 1.2);
  const VelocityField w = random_divfree_field(g, 9, 2.5, 0.8);
  const VelocityField buv = nonlinear_term(u, v);
  const double dual = inner_product(buv, w);
  const double direct = trilinear_b(u, v, w);
  CHECK(dual == doctest::Approx(direct).epsilon(1e-12));

  CHECK(divergence_defect(buv) < 1e-13);
  CHECK(hermitian_defect(buv) < 1e-13);
  CHECK(mean_mode_abs(buv) == 0.0);
}

TEST_CASE("random field determinism and invariants") {
  const TorusGrid g = make_grid(32);
  const VelocityField a = random_divfree_field(g, 42, 3.0, 0.7);
  const VelocityField b = random_divfree_field(g, 42, 3.0, 0.7);
  CHECK(a.c1 == b.c1);
  CHECK(a.c2 == b.c2);

  CHECK(l2_norm(a) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(l2_norm(random_divfree_field(g, 42, 3.0, 0.0)) == 0.0);
  CHECK(divergence_defect(a) < 1e-14);
  CHECK(hermitian_defect(a) < 1e-14);
  CHECK(mean_mode_abs(a) == 0.0);

  const VelocityField c = random_divfree_field(g, 43, 3.0, 0.7);
  CHECK(l2_diff(a, c) > 1e-3);
}

TEST_CASE("Ladyzhenskaya ratio stays under the configured cap") {
  const TorusGrid g = make_grid(16);
  const double cap = std::pow(2.0, -0.25) * 1.25;
  double worst = 0.0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const VelocityField u = random_divfree_field(g, seed + 100, 1.5, 1.0);
    const FieldNorms nm = norms(u);
    const double r = nm.l4 / std::sqrt(nm.l2 * nm.h1_semi);
    worst = std::max(worst, r);
  }
  const VelocityField tg = taylor_green(g, 1.0);
  const FieldNorms nm = norms(tg);
  worst = std::max(worst, nm.l4 / std::sqrt(nm.l2 * nm.h1_semi));
  MESSAGE("empirical Ladyzhenskaya ratio max: ", worst);
  CHECK(worst <= cap);
}

TEST_CASE("grid mismatch raises") {
  const VelocityField a = random_divfree_field(make_grid(16), 1, 2.0, 1.0);
  const VelocityField b = random_divfree_field(make_grid(32), 1, 2.0, 1.0);
  CHECK_THROWS_AS(trilinear_b(a, b, b), GridMismatchError);
  CHECK_THROWS_AS(inner_product(a, b), GridMismatchError);
}
