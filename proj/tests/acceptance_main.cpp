// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Desk scale: 32^2 modes, runs up to 1e5 steps.

#include "oneleg/certify.hpp"
#include "oneleg/config.hpp"
#include "oneleg/gronwall.hpp"
#include "oneleg/io.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace oneleg;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const char* what, bool pass,
            const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL",
              criterion, what, detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RunConfig benchmark_run(double theta, uint64_t seed) {
  RunConfig cfg;
  cfg.grid = make_grid(32);
  cfg.nu = 0.5;
  cfg.theta = theta;
  cfg.tau = 0.05;
  cfg.steps = 1000;
  ForcingSpec f;
  f.modes.push_back({1, 2, Complex{0.05, 0.01}, Complex{-0.02, 0.02}});
  f.modes.push_back({3, -1, Complex{0.0, 0.03}, Complex{0.03, 0.0}});
  f.modes.push_back({0, 1, Complex{0.04, 0.0}, Complex{0.0, 0.0}});
  cfg.forcing = f;
  cfg.u0 = random_divfree_field(cfg.grid, seed, 2.5, 0.3);
  return cfg;
}

RunConfig small_data_run(long steps) {
  RunConfig cfg;
  cfg.grid = make_grid(32);
  cfg.nu = 1.0;
  cfg.theta = 0.75;
  cfg.tau = 0.1;
  cfg.steps = steps;
  ForcingSpec f;
  f.modes.push_back({1, 0, Complex{0.0, 0.0}, Complex{1e-3, 0.0}});
  f.modes.push_back({1, 1, Complex{4e-4, 1e-4}, Complex{-4e-4, -1e-4}});
  cfg.forcing = f;
  cfg.u0 = zero_field(cfg.grid);
  return cfg;
}

BoundLedger ledger_of(const TrajectoryLog& log,
                      ConstantsVariant v =
                          ConstantsVariant::DerivationConsistent) {
  const double kappa1 = 1.0 / (log.meta.lambda1 * log.meta.nu);
  return make_ledger(ledger_inputs_from_meta(log.meta, -1, 4.0 * kappa1), v);
}

const CheckResult& get(const CertificateReport& rep, const char* id) {
  const CheckResult* c = rep.find(id);
  if (!c) throw std::logic_error(std::string("missing check ") + id);
  return *c;
}

void criterion_1_constants_identities() {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> uth(0.5, 1.0), ulnt(0.0, 1.0);
  double worst = 0.0;
  bool range_ok = true;
  for (int i = 0; i < 10000; ++i) {
    const double th = std::nextafter(uth(gen), 1.0);
    const double lnt = std::nextafter(ulnt(gen), 1.0);
    const ThetaConstants tc = theta_constants_lnt(th, lnt);
    worst = std::max(worst, check_identities(tc).max());
    range_ok = range_ok && tc.alpha > 0.5 && tc.alpha <= 1.5 + 1e-14 &&
               tc.epsilon > 0.0;
  }
  bool obstruction_ok = true;
  for (double lnt : {0.0, 0.2, 0.5, 1.0})
    obstruction_ok = obstruction_ok && half_theta_obstruction(0.5, lnt) == 0.0;
  report(1, "constants identities over 1e4 random (theta, lnt)",
         worst <= 1e-12 && range_ok && obstruction_ok,
         "max residual " + num(worst));
}

void run_criteria_2_3(const std::vector<TrajectoryLog>& runs) {
  double worst_identity = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  bool pass2 = true, pass3 = true;
  for (const auto& log : runs) {
    const BoundLedger L = ledger_of(log);
    const CertificateReport rep = full_report(log, L);

    const auto& id1 = get(rep, "energy1_identity");
    pass2 = pass2 && id1.hypothesis_met && id1.worst <= 1e-10;
    worst_identity = std::max(worst_identity, id1.worst);

    for (const char* id :
         {"energy0", "energy5_step", "energy7_step", "energyineq1_step"}) {
      const auto& c = get(rep, id);
      pass3 = pass3 && c.hypothesis_met && c.worst >= -1e-10;
      worst_margin = std::min(worst_margin, c.worst);
    }
  }
  report(2, "energy identity on three forced runs (theta 0.6/0.75/0.9)",
         pass2, "max residual " + num(worst_identity));
  report(3, "per-step energy inequalities on the same runs", pass3,
         "min margin " + num(worst_margin));
}

void criterion_5_sums(const std::vector<TrajectoryLog>& runs,
                      const TrajectoryLog& long_run) {
  bool pass5 = true;
  auto check_one = [&](const TrajectoryLog& log) {
    const BoundLedger L = ledger_of(log);
    const CertificateReport rep = full_report(log, L);
    for (const char* id : {"energy3_cumulative", "energy4_windowed",
                           "gradsum_cumulative", "gradsum_windowed"}) {
      const auto& c = get(rep, id);
      pass5 = pass5 && c.hypothesis_met && c.pass;
    }
  };
  for (const auto& log : runs) check_one(log);
  check_one(long_run);
  report(5, "cumulative and windowed L2(H1) sums on all benchmark runs",
         pass5);
}

void criterion_4_h_stability(const TrajectoryLog& log) {
  const BoundLedger L = ledger_of(log);
  const CertificateReport rep = full_report(log, L);
  const auto& env = get(rep, "h_decay_envelope");
  const auto& abso = get(rep, "h_absorbing");
  const bool pass = env.hypothesis_met && env.pass && abso.hypothesis_met &&
                    abso.pass && abso.steps_checked > 0 && L.T0 > 0.0;
  report(4, "H decay envelope and absorbing bound on a 1e4-step run", pass,
         "T0 = " + num(L.T0) + ", absorbed steps checked " +
             std::to_string(abso.steps_checked));
}

void criterion_6_conditional_recursion(const TrajectoryLog& log) {
  const BoundLedger L = ledger_of(log);
  std::vector<CheckResult> out;
  check_v_recursion(log, L, out);
  const auto& hypo = out[1];
  const auto& disc = out[2];
  const auto& rec = out[3];
  const bool nonvacuous = disc.steps_checked > 0;
  report(6, "conditional V recursion and discriminant where the bound holds",
         nonvacuous && disc.pass && disc.worst > 0.0 && rec.pass,
         std::to_string(disc.steps_checked) + "/" +
             std::to_string(hypo.steps_checked) + " steps in hypothesis");
}

void criterion_7_gronwall_oracles() {
  std::mt19937_64 gen(777);
  std::uniform_real_distribution<double> pos(0.05, 2.0);
  long counterexamples = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_star = 50;
    SequenceBundle b;
    b.tau = 0.01 + 0.04 * (trial % 5);
    b.xi.resize(n_star + 1);
    b.alpha.resize(n_star + 1);
    b.eta.resize(n_star + 1);
    b.zeta.resize(n_star + 1);
    for (int i = 0; i <= n_star; ++i) {
      b.alpha[i] = pos(gen);
      b.eta[i] = pos(gen);
      b.zeta[i] = pos(gen);
    }
    b.xi[0] = pos(gen);
    for (int n = 1; n <= n_star; ++n)
      b.xi[n] = b.xi[n - 1] * (1.0 + b.tau * b.alpha[n - 1]) *
                    (1.0 + b.tau * b.eta[n - 1]) +
                b.tau * b.zeta[n];
    for (int n = 2; n <= n_star; ++n)
      if (dgl_bound(b, n) < b.xi[n] * (1.0 - 1e-12)) ++counterexamples;

    const int n2 = 2 + static_cast<int>(gen() % 5);
    const int n1 = 1 + static_cast<int>(gen() % 5);
    if (n1 + n2 + 1 > n_star) continue;
    const WindowConstants a = verify_hypotheses(b, n1, n2, n_star);
    const double bound = dugl_bound(a.a1, a.a2, a.a3, a.a4, b.tau, n2);
    for (int n = n1 + n2 + 1; n <= n_star; ++n)
      if (bound < b.xi[n] * (1.0 - 1e-12)) ++counterexamples;
  }
  report(7, "discrete (uniform) Gronwall domination over 1e3 random bundles",
         counterexamples == 0,
         std::to_string(counterexamples) + " counterexamples");
}

void criterion_8_taylor_green() {
  RunConfig cfg;
  cfg.grid = make_grid(32);
  cfg.nu = 0.02;
  cfg.theta = 0.75;
  cfg.tau = 0.05;
  cfg.steps = 1000;
  cfg.u0 = taylor_green(cfg.grid, 1.0);
  const TrajectoryLog log = run(cfg);
  const double ratio = (1.0 - 2.0 * cfg.nu * cfg.tau * (1.0 - cfg.theta)) /
                       (1.0 + 2.0 * cfg.nu * cfg.tau * cfg.theta);
  double worst = 0.0;
  for (const auto& rec : log.records)
    worst = std::max(worst, std::abs(rec.l2_unp1 / rec.l2_un - ratio) / ratio);
  report(8, "Taylor-Green per-step amplification factor over 1e3 steps",
         worst <= 1e-12, "max per-step deviation " + num(worst));
}

void criterion_9_convergence_order() {
  RunConfig base;
  base.grid = make_grid(32);
  base.nu = 0.1;
  base.tau = 1.0 / 16.0;
  ForcingSpec f;
  f.modes.push_back({1, 2, Complex{0.2, 0.05}, Complex{-0.1, 0.1}});
  f.modes.push_back({2, -1, Complex{0.0, 0.15}, Complex{0.15, 0.0}});
  base.forcing = f;
  base.u0 = random_divfree_field(base.grid, 555, 2.5, 1.0);

  const double T = 1.0;
  bool all_ok = true;
  std::string detail;
  for (const double theta : {0.75, 0.5}) {
    RunConfig rc = base;
    rc.theta = theta;
    RunConfig ref = rc;
    ref.tau = base.tau / 64.0;
    ref.steps = static_cast<long>(std::llround(T / ref.tau));
    const VelocityField u_ref = run(ref).final_state;

    std::vector<double> lx, ly;
    for (int h = 0; h < 3; ++h) {
      RunConfig rr = rc;
      rr.tau = base.tau / static_cast<double>(1 << h);
      rr.steps = static_cast<long>(std::llround(T / rr.tau));
      const double err = l2_diff(run(rr).final_state, u_ref);
      lx.push_back(std::log(rr.tau));
      ly.push_back(std::log(err));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double n = static_cast<double>(lx.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double target = theta == 0.5 ? 2.0 : 1.0;
    all_ok = all_ok && std::abs(slope - target) <= 0.1;
    detail += "theta " + num(theta) + ": slope " + num(slope) + "  ";
  }
  report(9, "temporal order (1 for theta=0.75, 2 for theta=0.5)", all_ok,
         detail);
}

void criterion_10_longtime(const TrajectoryLog& gated_log) {
  // (a) admissible small-data run: hypotheses met, sup bounded by K7
  const TrajectoryLog log = run(small_data_run(100000));
  const BoundLedger L = ledger_of(log);
  const bool admissible = std::log(log.meta.tau) <= L.admissible_tau.lg;
  const CertificateReport rep = full_report(log, L);
  double sup = 0.0;
  for (const auto& rec : log.records)
    sup = std::max(sup, rec.h1_unp1 * rec.h1_unp1);
  const auto& glob = get(rep, "v_global");
  const auto& k6 = get(rep, "v_absorbed");
  const bool pass_a = admissible && std::isfinite(sup) &&
                      glob.hypothesis_met && glob.pass && k6.hypothesis_met &&
                      k6.pass && rep.v_longtime_certified;

  // (b) practical-tau run: hypothesis correctly gated, still bounded
  const BoundLedger Lg = ledger_of(gated_log);
  const bool gated = std::log(gated_log.meta.tau) > Lg.admissible_tau.lg;
  const CertificateReport repg = full_report(gated_log, Lg);
  double supg = 0.0;
  for (const auto& rec : gated_log.records)
    supg = std::max(supg, rec.h1_unp1 * rec.h1_unp1);
  const bool pass_b = gated && !get(repg, "v_global").hypothesis_met &&
                      !repg.any_hypothesis_met_violation &&
                      std::isfinite(supg) && supg < 1e6;

  report(10, "long-time V bound certified when admissible, gated otherwise",
         pass_a && pass_b,
         "sup ||grad u||^2 = " + num(sup) + " <= K7 = " + num(L.K7.value) +
             "; gated run sup " + num(supg));
}

void criterion_11_determinism() {
  const fs::path dir = fs::temp_directory_path() / "oneleg_acceptance";
  fs::create_directories(dir);
  const std::string cfg_text = R"({
    "grid": {"n": 32},
    "nu": 0.5, "theta": 0.75, "tau": 0.05, "steps": 200, "seed": 9,
    "u0": {"type": "random", "seed": 9, "amplitude": 0.3, "decay": 2.5},
    "forcing": {"modes": [
      {"k": [1, 2], "amp1": [0.05, 0.01], "amp2": [-0.02, 0.02]}]}
  })";
  {
    std::ofstream os(dir / "cfg.json");
    os << cfg_text;
  }
  const std::string cli = ONELEG_CLI_PATH;
  auto shell = [](const std::string& c) {
    return std::system((c + " > /dev/null 2>&1").c_str());
  };
  bool ok = true;
  ok &= shell(cli + " run --config " + (dir / "cfg.json").string() +
              " --out " + (dir / "a").string()) == 0;
  ok &= shell(cli + " run --config " + (dir / "cfg.json").string() +
              " --out " + (dir / "b").string()) == 0;
  ok &= read_file(dir / "a/trajectory.csv") == read_file(dir / "b/trajectory.csv");
  ok &= read_file(dir / "a/final_state.json") ==
        read_file(dir / "b/final_state.json");
  ok &= shell(cli + " certify --trajectory " + (dir / "a/trajectory.csv").string() +
              " --out " + (dir / "ra.json").string()) == 0;
  ok &= shell(cli + " certify --trajectory " + (dir / "b/trajectory.csv").string() +
              " --out " + (dir / "rb.json").string()) == 0;
  ok &= read_file(dir / "ra.json") == read_file(dir / "rb.json");
  report(11, "byte-identical trajectories and reports on rerun", ok);
  fs::remove_all(dir);
}

} // namespace

int main() {
  std::printf("acceptance suite: 2D one-leg theta-method certificates\n");

  criterion_1_constants_identities();

  std::vector<TrajectoryLog> runs;
  uint64_t seed = 201;
  for (const double theta : {0.6, 0.75, 0.9}) {
    runs.push_back(run(benchmark_run(theta, seed++)));
  }
  run_criteria_2_3(runs);

  // 1e4-step H-stability run with a genuine absorbing transient
  RunConfig hcfg = benchmark_run(0.75, 301);
  hcfg.nu = 0.6;
  hcfg.steps = 10000;
  hcfg.u0 = random_divfree_field(hcfg.grid, 301, 3.0, 1.5);
  {
    const double rho0_target = 0.2 * 1.5 * 1.5;
    const double f_target =
        std::sqrt(rho0_target * hcfg.grid.lambda1() * hcfg.nu * hcfg.nu *
                  (2.0 * hcfg.theta - 1.0));
    const double unit = hcfg.forcing.sup_h_norm(hcfg.grid);
    for (auto& m : hcfg.forcing.modes) {
      m.amp1 *= f_target / unit;
      m.amp2 *= f_target / unit;
    }
  }
  const TrajectoryLog hlog = run(hcfg);
  criterion_4_h_stability(hlog);
  criterion_5_sums(runs, hlog);

  const TrajectoryLog small = run(small_data_run(500));
  criterion_6_conditional_recursion(small);

  criterion_7_gronwall_oracles();
  criterion_8_taylor_green();
  criterion_9_convergence_order();
  criterion_10_longtime(hlog);
  criterion_11_determinism();

  std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILED",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
