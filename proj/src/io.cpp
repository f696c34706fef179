#include "oneleg/io.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace oneleg {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON numbers cannot carry inf/nan; encode those as strings.
json jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json jlogval(const LogVal& v) {
  return json{{"value", jnum(v.value)},
              {"log10", jnum(v.lg / 2.302585092994046)}};
}

constexpr const char* kTrajectoryTag = "# oneleg-trajectory v1";

const char* kColumns =
    "n,t_mid,l2_un,h1_un,l2_umid,h1_umid,lap_umid,l2_unp1,h1_unp1,l2_dmid,"
    "l2_dnp1,h1_dnp1,l2_fmid,b_mid_mid_mid,b_mid_mid_np1,recon_err,"
    "solver_iters,solver_residual,newton_used,r_star";

} // namespace

std::string run_meta_json(const RunMeta& m) {
  json j{{"grid_n", m.grid_n},
         {"length", m.length},
         {"lambda1", m.lambda1},
         {"nu", m.nu},
         {"theta", m.theta},
         {"tau", m.tau},
         {"steps", m.steps},
         {"f_inf", m.f_inf},
         {"u0_l2", m.u0_l2},
         {"u0_h1", m.u0_h1},
         {"picard_tol", m.picard_tol},
         {"picard_max_iter", m.picard_max_iter},
         {"newton_enabled", m.newton_enabled}};
  if (!m.config_echo.empty()) {
    json echo = json::parse(m.config_echo, nullptr, false);
    j["config"] = echo.is_discarded() ? json(m.config_echo) : echo;
  }
  return j.dump();
}

RunMeta parse_run_meta_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw SchemaError("run metadata is not valid JSON");
  RunMeta m;
  try {
    m.grid_n = j.at("grid_n").get<int>();
    m.length = j.at("length").get<double>();
    m.lambda1 = j.at("lambda1").get<double>();
    m.nu = j.at("nu").get<double>();
    m.theta = j.at("theta").get<double>();
    m.tau = j.at("tau").get<double>();
    m.steps = j.at("steps").get<long>();
    m.f_inf = j.at("f_inf").get<double>();
    m.u0_l2 = j.at("u0_l2").get<double>();
    m.u0_h1 = j.at("u0_h1").get<double>();
    m.picard_tol = j.at("picard_tol").get<double>();
    m.picard_max_iter = j.at("picard_max_iter").get<int>();
    m.newton_enabled = j.at("newton_enabled").get<bool>();
    if (j.contains("config")) m.config_echo = j["config"].dump();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("run metadata: ") + e.what());
  }
  return m;
}

std::string trajectory_csv(const TrajectoryLog& log) {
  std::ostringstream os;
  os << kTrajectoryTag << "\n";
  os << "# meta: " << run_meta_json(log.meta) << "\n";
  os << kColumns << "\n";
  for (const auto& r : log.records) {
    os << r.n << ',' << fmt(r.t_mid) << ',' << fmt(r.l2_un) << ','
       << fmt(r.h1_un) << ',' << fmt(r.l2_umid) << ',' << fmt(r.h1_umid)
       << ',' << fmt(r.lap_umid) << ',' << fmt(r.l2_unp1) << ','
       << fmt(r.h1_unp1) << ',' << fmt(r.l2_dmid) << ',' << fmt(r.l2_dnp1)
       << ',' << fmt(r.h1_dnp1) << ',' << fmt(r.l2_fmid) << ','
       << fmt(r.b_mid_mid_mid) << ',' << fmt(r.b_mid_mid_np1) << ','
       << fmt(r.recon_err) << ',' << r.solver_iters << ','
       << fmt(r.solver_residual) << ',' << (r.newton_used ? 1 : 0) << ','
       << fmt(r.r_star) << "\n";
  }
  return os.str();
}

TrajectoryLog parse_trajectory_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;

  if (!std::getline(is, line) || line != kTrajectoryTag)
    throw SchemaError("trajectory: missing format tag line");
  if (!std::getline(is, line) || line.rfind("# meta: ", 0) != 0)
    throw SchemaError("trajectory: missing metadata line");

  TrajectoryLog log;
  log.meta = parse_run_meta_json(line.substr(8));

  if (!std::getline(is, line) || line != kColumns)
    throw SchemaError("trajectory: column header mismatch");

  long expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    StepRecord r;
    int iters = 0, newton = 0;
    const int got = std::sscanf(
        line.c_str(),
        "%ld,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,"
        "%d,%lf,%d,%lf",
        &r.n, &r.t_mid, &r.l2_un, &r.h1_un, &r.l2_umid, &r.h1_umid,
        &r.lap_umid, &r.l2_unp1, &r.h1_unp1, &r.l2_dmid, &r.l2_dnp1,
        &r.h1_dnp1, &r.l2_fmid, &r.b_mid_mid_mid, &r.b_mid_mid_np1,
        &r.recon_err, &iters, &r.solver_residual, &newton, &r.r_star);
    if (got != 20)
      throw SchemaError("trajectory: malformed row at step " +
                        std::to_string(expected));
    if (r.n != expected)
      throw SchemaError("trajectory: rows are not contiguous from 0");
    r.solver_iters = iters;
    r.newton_used = newton != 0;
    log.records.push_back(r);
    ++expected;
  }
  if (expected != log.meta.steps)
    throw SchemaError("trajectory: row count does not match metadata steps");
  return log;
}

std::string field_snapshot_json(const VelocityField& u) {
  std::ostringstream os;
  os << "{\"format\":\"oneleg-field v1\",\"grid\":{\"n\":" << u.grid.n
     << ",\"length\":" << fmt(u.grid.length) << "},\"coeffs\":[";
  const int K = u.grid.kmax();
  bool first = true;
  size_t i = 0;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2, ++i) {
      if (!first) os << ',';
      first = false;
      os << '[' << k1 << ',' << k2 << ',' << fmt(u.c1[i].real()) << ','
         << fmt(u.c1[i].imag()) << ',' << fmt(u.c2[i].real()) << ','
         << fmt(u.c2[i].imag()) << ']';
    }
  }
  os << "]}";
  return os.str();
}

VelocityField parse_field_snapshot(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "oneleg-field v1")
    throw SchemaError("field snapshot: bad format");
  TorusGrid g;
  try {
    g = make_grid(j.at("grid").at("n").get<int>(),
                  j.at("grid").at("length").get<double>());
    VelocityField u(g);
    for (const auto& row : j.at("coeffs")) {
      if (!row.is_array() || row.size() != 6)
        throw SchemaError("field snapshot: bad coefficient record");
      const int k1 = row[0].get<int>(), k2 = row[1].get<int>();
      if (std::abs(k1) > g.kmax() || std::abs(k2) > g.kmax())
        throw SchemaError("field snapshot: mode outside grid");
      u.set_coeff(0, k1, k2, {row[2].get<double>(), row[3].get<double>()});
      u.set_coeff(1, k1, k2, {row[4].get<double>(), row[5].get<double>()});
    }
    return u;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field snapshot: ") + e.what());
  }
}

namespace {

json check_to_json(const CheckResult& c) {
  return json{{"id", c.id},
              {"anchor", c.anchor},
              {"kind", c.is_identity ? "identity" : "inequality"},
              {"hypothesis_met", c.hypothesis_met},
              {"hypothesis", c.hypothesis},
              {"worst", jnum(c.worst)},
              {"worst_abs", jnum(c.worst_abs)},
              {"scale_at_worst", jnum(c.scale_at_worst)},
              {"first_violation", c.first_violation},
              {"steps_checked", c.steps_checked},
              {"steps_violating", c.steps_violating},
              {"tol", jnum(c.tol)},
              {"pass", c.pass},
              {"hard_failure", c.hard_failure()},
              {"note", c.note}};
}

} // namespace

std::string report_json(const CertificateReport& rep, const BoundLedger& L) {
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back(check_to_json(c));
  json j{{"schema_version", rep.schema_version},
         {"variant", to_string(rep.variant)},
         {"tol_cert", rep.tol_cert},
         {"run_meta", json::parse(run_meta_json(rep.meta_echo))},
         {"h_stable", rep.h_stable},
         {"v_longtime_certified", rep.v_longtime_certified},
         {"any_hypothesis_met_violation", rep.any_hypothesis_met_violation},
         {"checks", checks},
         {"ledger", json::parse(ledger_json(L))}};
  return j.dump(2) + "\n";
}

std::string report_text(const CertificateReport& rep) {
  std::ostringstream os;
  os << "certificate report (variant " << to_string(rep.variant) << ")\n";
  for (const auto& c : rep.checks) {
    os << (c.hard_failure() ? "FAIL " : c.pass ? "pass " : "info ")
       << (c.hypothesis_met ? "[hyp met]  " : "[hyp unmet]") << ' ' << c.id
       << "  worst=" << fmt(c.worst) << "  steps=" << c.steps_checked;
    if (c.first_violation >= 0) os << "  first_violation=" << c.first_violation;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  os << "H-stable: " << (rep.h_stable ? "yes" : "no")
     << "; V long-time certified: "
     << (rep.v_longtime_certified ? "yes" : "no") << "\n";
  return os.str();
}

std::string ledger_json(const BoundLedger& L) {
  json forms_p{{"a1", jnum(L.paper.a1)},   {"a2", jnum(L.paper.a2)},
               {"a3", jnum(L.paper.a3)},   {"a4", jnum(L.paper.a4)},
               {"rho1_sq", jlogval(L.paper.rho1_sq)}};
  json forms_d{{"a1", jnum(L.derived.a1)}, {"a2", jnum(L.derived.a2)},
               {"a3", jnum(L.derived.a3)}, {"a4", jnum(L.derived.a4)},
               {"rho1_sq", jlogval(L.derived.rho1_sq)}};
  json j{{"inputs",
          {{"nu", L.in.nu},
           {"lambda1", L.in.lambda1},
           {"theta", L.in.theta},
           {"tau", L.in.tau},
           {"u0_l2", L.in.u0_l2},
           {"u0_h1", L.in.u0_h1},
           {"f_inf", L.in.f_inf},
           {"T", L.in.T},
           {"r", L.in.r},
           {"eps1", L.eps1},
           {"delta1", L.delta1}}},
         {"variant", to_string(L.variant)},
         {"kappa1", jnum(L.kappa1)},
         {"rho0", jnum(L.rho0)},
         {"T0", jnum(L.T0)},
         {"K1", jnum(L.main.K1)},
         {"C1", jnum(L.main.C1)},
         {"K2", jnum(L.main.K2)},
         {"K3", jnum(L.main.K3)},
         {"K4", jnum(L.main.K4)},
         {"C2", jnum(L.main.C2)},
         {"C3", jnum(L.C3)},
         {"C4", jnum(L.C4)},
         {"C5", jnum(L.main.C5)},
         {"C6", jnum(L.main.C6)},
         {"C7", jnum(L.main.C7)},
         {"C8", jnum(L.main.C8)},
         {"C9", jnum(L.C9)},
         {"C10_paper", jnum(L.C10_paper)},
         {"C10_derived", jnum(L.C10_derived)},
         {"C11", jnum(L.C11)},
         {"kappa2", jnum(L.kappa2)},
         {"kappa3_main", jlogval(L.kappa3_main)},
         {"kappa4_main", jlogval(L.kappa4_main)},
         {"kappa3_restart", jlogval(L.kappa3_restart)},
         {"kappa4_restart", jlogval(L.kappa4_restart)},
         {"K5_at_T", jlogval(L.K5_at_T)},
         {"K5_at_T0_plus_r", jlogval(L.K5_at_T0r)},
         {"K6", jlogval(L.K6)},
         {"K7", jlogval(L.K7)},
         {"window_forms_paper", forms_p},
         {"window_forms_derived", forms_d},
         {"admissible_tau", jlogval(L.admissible_tau)},
         {"provenance", L.provenance},
         {"self_check_notes", L.self_check_notes}};
  return j.dump();
}

std::string ledger_text(const BoundLedger& L) {
  json j = json::parse(ledger_json(L));
  std::ostringstream os;
  os << "bound ledger (variant " << to_string(L.variant) << ")\n";
  auto line = [&os](const std::string& k, const json& v) {
    os << "  " << k;
    for (size_t i = k.size(); i < 22; ++i) os << ' ';
    os << v.dump() << "\n";
  };
  for (const char* k :
       {"kappa1", "rho0", "T0", "K1", "C1", "K2", "K3", "K4", "C2", "C3",
        "C4", "C5", "C6", "C7", "C8", "C9", "C10_paper", "C10_derived",
        "C11", "kappa2", "kappa3_main", "kappa4_main", "kappa3_restart",
        "kappa4_restart", "K5_at_T", "K5_at_T0_plus_r", "K6", "K7",
        "admissible_tau"})
    line(k, j.at(k));
  return os.str();
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << content;
    if (!os.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace oneleg
