// Command-line surface: run, certify, constants, sweep, convergence.
// Exit codes: 0 success, 1 certificate violation / internal error,
// 2 config or schema error, 3 nonlinear-solver nonconvergence.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oneleg/certify.hpp"
#include "oneleg/config.hpp"
#include "oneleg/constants.hpp"
#include "oneleg/io.hpp"
#include "oneleg/stepper.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace oneleg;

namespace {

int env_threads(int cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* s = std::getenv("ONELEG_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  return static_cast<int>(std::thread::hardware_concurrency());
}

ConstantsVariant env_variant(std::string cli_value) {
  if (cli_value.empty()) {
    if (const char* s = std::getenv("ONELEG_VARIANT")) cli_value = s;
  }
  if (cli_value == "paper") return ConstantsVariant::PaperLiteral;
  if (cli_value.empty() || cli_value == "derived")
    return ConstantsVariant::DerivationConsistent;
  throw SchemaError("variant must be 'paper' or 'derived'");
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

BoundLedger ledger_for(const RunMeta& meta, ConstantsVariant variant,
                       double r, double T) {
  const double kappa1 = 1.0 / (meta.lambda1 * meta.nu);
  LedgerInputs in = ledger_inputs_from_meta(
      meta, T, r > 0.0 ? r : 4.0 * kappa1);
  return make_ledger(in, variant);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            long seed_override) {
  std::string text = read_file(config_path);
  if (seed_override >= 0) {
    // Fold the override into the config before u0 construction so the
    // echoed provenance matches what actually ran.
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw SchemaError("config: not a JSON object");
    j["seed"] = seed_override;
    text = j.dump();
  }
  ExperimentConfig cfg = parse_experiment_config(text);

  RunConfig rc = cfg.run;
  TrajectoryLog result = run(rc);
  result.meta.config_echo = cfg.config_echo;

  fs::create_directories(out_dir);
  atomic_write(fs::path(out_dir) / "trajectory.csv", trajectory_csv(result));
  atomic_write(fs::path(out_dir) / "final_state.json",
               field_snapshot_json(result.final_state));
  for (const auto& [n, field] : result.snapshots) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%08ld.json", n);
    atomic_write(fs::path(out_dir) / name, field_snapshot_json(field));
  }
  std::cout << "wrote " << (fs::path(out_dir) / "trajectory.csv").string()
            << " (" << result.records.size() << " steps)\n";
  return 0;
}

int cmd_certify(const std::string& traj_path, const std::string& out_path,
                const std::string& variant_str, double r, double T) {
  const TrajectoryLog log = parse_trajectory_csv(read_file(traj_path));
  const ConstantsVariant variant = env_variant(variant_str);
  const BoundLedger ledger = ledger_for(log.meta, variant, r, T);
  const CertificateReport rep = full_report(log, ledger);

  if (!out_path.empty()) atomic_write(out_path, report_json(rep, ledger));
  std::cout << report_text(rep);
  return rep.any_hypothesis_met_violation ? 1 : 0;
}

int cmd_constants(const std::string& config_path, const std::string& out_path,
                  const std::string& variant_str, double r, double T,
                  bool text) {
  ExperimentConfig cfg = parse_experiment_config(read_file(config_path));
  RunMeta meta;
  meta.grid_n = cfg.run.grid.n;
  meta.length = cfg.run.grid.length;
  meta.lambda1 = cfg.run.grid.lambda1();
  meta.nu = cfg.run.nu;
  meta.theta = cfg.run.theta;
  meta.tau = cfg.run.tau;
  meta.steps = cfg.run.steps;
  meta.f_inf = cfg.run.forcing.sup_h_norm(cfg.run.grid);
  meta.u0_l2 = l2_norm(cfg.run.u0);
  meta.u0_h1 = h1_seminorm(cfg.run.u0);

  BoundLedger ledger =
      ledger_for(meta, env_variant(variant_str),
                 r > 0.0 ? r : cfg.certify_r, T > 0.0 ? T : cfg.certify_T);
  ledger.self_check_notes = ledger_self_check(ledger);

  if (!out_path.empty()) atomic_write(out_path, ledger_json(ledger) + "\n");
  if (text || out_path.empty()) std::cout << ledger_text(ledger);
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              int threads) {
  ExperimentConfig cfg = parse_experiment_config(read_file(config_path));
  if (cfg.sweep_theta.empty())
    throw SchemaError("config: sweep section required for the sweep command");

  struct Point {
    double theta, tau, nu, f_inf;
  };
  std::vector<Point> points;
  for (double th : cfg.sweep_theta)
    for (double tau : cfg.sweep_tau)
      for (double nu : cfg.sweep_nu)
        for (double fa : cfg.sweep_famp)
          points.push_back({th, tau, nu, fa});

  const double lambda1 = cfg.run.grid.lambda1();
  const double u0_l2 = l2_norm(cfg.run.u0);
  const double u0_h1 = h1_seminorm(cfg.run.u0);
  std::vector<std::string> rows(points.size());

  auto work = [&](size_t i) {
    const Point& p = points[i];
    std::ostringstream os;
    const double lnt = lambda1 * p.nu * p.tau;
    os << fmtg(p.theta) << ',' << fmtg(p.tau) << ',' << fmtg(p.nu) << ','
       << fmtg(p.f_inf) << ',' << fmtg(lnt) << ',';
    try {
      const ThetaConstants tc = theta_constants_lnt(std::max(p.theta, 0.5), lnt);
      os << fmtg(tc.alpha) << ',' << fmtg(tc.epsilon) << ',' << fmtg(tc.a)
         << ',' << fmtg(tc.b) << ','
         << fmtg(half_theta_obstruction(p.theta, lnt)) << ',';
    } catch (const DomainError&) {
      os << ",,,," << fmtg(half_theta_obstruction(p.theta, lnt)) << ',';
    }
    if (p.theta > 0.5 && p.theta <= 1.0) {
      try {
        LedgerInputs in;
        in.nu = p.nu;
        in.lambda1 = lambda1;
        in.theta = p.theta;
        in.tau = p.tau;
        in.u0_l2 = u0_l2;
        in.u0_h1 = u0_h1;
        in.f_inf = p.f_inf;
        in.T = cfg.certify_T > 0 ? cfg.certify_T
                                 : p.tau * static_cast<double>(cfg.run.steps);
        in.r = cfg.certify_r > 0 ? cfg.certify_r : 4.0 / (lambda1 * p.nu);
        const BoundLedger L = make_ledger(in, cfg.variant);
        const double l10 = 2.302585092994046;
        os << fmtg(L.kappa1) << ',' << fmtg(L.kappa2) << ','
           << fmtg(L.kappa3_main.lg / l10) << ','
           << fmtg(L.kappa4_main.lg / l10) << ','
           << fmtg(L.admissible_tau.lg / l10) << ','
           << (std::log(p.tau) <= L.admissible_tau.lg ? 1 : 0) << ",ok";
      } catch (const DomainError&) {
        os << ",,,,,0,domain_error";
      }
    } else {
      os << ",,,,,0,theta_outside_half_one";
    }
    rows[i] = os.str();
  };

  const int nthreads = std::max(1, env_threads(threads));
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < points.size();
           i = next.fetch_add(1))
        work(i);
    });
  for (auto& t : pool) t.join();

  std::ostringstream os;
  os << "theta,tau,nu,f_inf,lambda_nu_tau,alpha,epsilon,a,b,obstruction,"
        "kappa1,kappa2,log10_kappa3,log10_kappa4,log10_admissible_tau,"
        "tau_admissible,status\n";
  for (const auto& r : rows) os << r << "\n";
  atomic_write(out_path, os.str());
  std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_convergence(const std::string& config_path,
                    const std::string& out_path, double T_final,
                    int halvings) {
  ExperimentConfig cfg = parse_experiment_config(read_file(config_path));
  const double T = T_final > 0 ? T_final : 1.0;

  std::ostringstream os;
  os << "theta,tau,l2_error\n";
  std::vector<std::string> lines;
  for (const double theta : {cfg.run.theta, 0.5}) {
    RunConfig rc = cfg.run;
    rc.theta = theta;

    RunConfig ref = rc;
    const double tau0 = cfg.run.tau;
    ref.tau = tau0 / 64.0;
    ref.steps = static_cast<long>(std::llround(T / ref.tau));
    const VelocityField u_ref = run(ref).final_state;

    std::vector<double> taus, errs;
    for (int h = 0; h < halvings; ++h) {
      RunConfig rr = rc;
      rr.tau = tau0 / static_cast<double>(1 << h);
      rr.steps = static_cast<long>(std::llround(T / rr.tau));
      const VelocityField u_T = run(rr).final_state;
      const double err = l2_diff(u_T, u_ref);
      taus.push_back(rr.tau);
      errs.push_back(err);
      os << fmtg(theta) << ',' << fmtg(rr.tau) << ',' << fmtg(err) << "\n";
    }
    // least-squares slope of log err vs log tau
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(taus.size());
    for (size_t i = 0; i < taus.size(); ++i) {
      const double x = std::log(taus[i]), y = std::log(errs[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::cout << "theta=" << theta << " observed order " << slope << "\n";
  }
  atomic_write(out_path, os.str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-leg theta-method Navier-Stokes runner and certifier"};
  app.require_subcommand(1);

  std::string config_path, out_path, traj_path, variant;
  long seed_override = -1;
  double r = -1.0, T = -1.0;
  int threads = 0;
  bool text = false;
  int halvings = 3;

  auto* c_run = app.add_subcommand("run", "integrate and write a trajectory");
  c_run->add_option("--config", config_path)->required();
  c_run->add_option("--out", out_path)->required();
  c_run->add_option("--seed", seed_override);

  auto* c_cert = app.add_subcommand("certify", "check a stored trajectory");
  c_cert->add_option("--trajectory", traj_path)->required();
  c_cert->add_option("--out", out_path);
  c_cert->add_option("--variant", variant)->check(CLI::IsMember({"paper", "derived"}));
  c_cert->add_option("--r", r);
  c_cert->add_option("--T", T);

  auto* c_const = app.add_subcommand("constants", "print the bound ledger");
  c_const->add_option("--config", config_path)->required();
  c_const->add_option("--out", out_path);
  c_const->add_option("--variant", variant)->check(CLI::IsMember({"paper", "derived"}));
  c_const->add_option("--r", r);
  c_const->add_option("--T", T);
  c_const->add_flag("--text", text);

  auto* c_sweep = app.add_subcommand("sweep", "ledger grid over (theta, tau, nu, f)");
  c_sweep->add_option("--config", config_path)->required();
  c_sweep->add_option("--out", out_path)->required();
  c_sweep->add_option("--threads", threads);

  auto* c_conv = app.add_subcommand("convergence", "temporal order study");
  c_conv->add_option("--config", config_path)->required();
  c_conv->add_option("--out", out_path)->required();
  c_conv->add_option("--T", T);
  c_conv->add_option("--halvings", halvings);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(config_path, out_path, seed_override);
    if (c_cert->parsed()) return cmd_certify(traj_path, out_path, variant, r, T);
    if (c_const->parsed())
      return cmd_constants(config_path, out_path, variant, r, T, text);
    if (c_sweep->parsed()) return cmd_sweep(config_path, out_path, threads);
    if (c_conv->parsed())
      return cmd_convergence(config_path, out_path, T, halvings);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
