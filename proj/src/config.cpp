#include "oneleg/config.hpp"

#include <nlohmann/json.hpp>

namespace oneleg {

using nlohmann::json;

namespace {

Complex jcomplex(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError("config: complex amplitudes are [re, im] pairs");
  return Complex{v[0].get<double>(), v[1].get<double>()};
}

ForcingSpec parse_forcing(const json& j) {
  ForcingSpec f;
  if (j.is_null()) return f;
  if (!j.is_object()) throw SchemaError("config: forcing must be an object");
  for (const auto& m : j.value("modes", json::array())) {
    ForcingMode mode;
    const auto& k = m.at("k");
    if (!k.is_array() || k.size() != 2)
      throw SchemaError("config: forcing mode k must be [k1, k2]");
    mode.k1 = k[0].get<int>();
    mode.k2 = k[1].get<int>();
    mode.amp1 = jcomplex(m.at("amp1"));
    mode.amp2 = jcomplex(m.at("amp2"));
    f.modes.push_back(mode);
  }
  const json prof = j.value("profile", json("constant"));
  if (prof.is_string() && prof.get<std::string>() == "constant") {
    f.profile = ForcingSpec::Profile::Constant;
  } else if (prof.is_object() &&
             prof.value("type", "") == std::string("sinusoidal")) {
    f.profile = ForcingSpec::Profile::Sinusoidal;
    f.omega = prof.at("omega").get<double>();
    f.phase = prof.value("phase", 0.0);
  } else {
    throw SchemaError("config: profile must be \"constant\" or "
                      "{\"type\":\"sinusoidal\",...}");
  }
  return f;
}

VelocityField parse_u0(const json& j, const TorusGrid& g, uint64_t seed) {
  const std::string type = j.is_null() ? "zero" : j.value("type", "zero");
  if (type == "zero") return zero_field(g);
  if (type == "taylor_green")
    return taylor_green(g, j.value("amplitude", 1.0));
  if (type == "random") {
    const auto s = j.contains("seed") ? j.at("seed").get<uint64_t>() : seed;
    return random_divfree_field(g, s, j.value("decay", 3.0),
                                j.value("amplitude", 1.0));
  }
  throw SchemaError("config: u0 type must be zero, taylor_green, or random");
}

std::vector<double> jlist(const json& j, const char* what) {
  std::vector<double> out;
  if (!j.is_array() || j.empty())
    throw SchemaError(std::string("config: sweep axis ") + what +
                      " must be a nonempty array");
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw SchemaError("config: not a JSON object");

  ExperimentConfig cfg;
  try {
    const json jgrid = j.value("grid", json::object());
    cfg.run.grid = make_grid(jgrid.value("n", 32),
                             jgrid.value("length", kTwoPi));
    cfg.run.nu = j.value("nu", 1.0);
    cfg.run.theta = j.value("theta", 0.75);
    cfg.run.tau = j.value("tau", 0.1);
    cfg.run.steps = j.value("steps", 100L);
    cfg.run.picard_tol = j.value("picard_tol", 1e-12);
    cfg.run.picard_max_iter = j.value("picard_max_iter", 200);
    cfg.run.newton_enabled = j.value("newton", true);
    cfg.run.snapshot_stride = j.value("snapshot_stride", 0L);
    cfg.seed = j.value("seed", 0UL);

    cfg.run.forcing = parse_forcing(j.value("forcing", json()));
    cfg.run.u0 = parse_u0(j.value("u0", json()), cfg.run.grid, cfg.seed);

    const json cert = j.value("certify", json::object());
    const std::string var = cert.value("variant", "derived");
    if (var == "paper")
      cfg.variant = ConstantsVariant::PaperLiteral;
    else if (var == "derived")
      cfg.variant = ConstantsVariant::DerivationConsistent;
    else
      throw SchemaError("config: certify.variant must be paper or derived");
    cfg.certify_r = cert.value("r", -1.0);
    cfg.certify_T = cert.value("T", -1.0);

    if (j.contains("sweep")) {
      const json& sw = j.at("sweep");
      cfg.sweep_theta = jlist(sw.value("theta", json::array({0.75})), "theta");
      cfg.sweep_tau = jlist(sw.value("tau", json::array({0.1})), "tau");
      cfg.sweep_nu = jlist(sw.value("nu", json::array({1.0})), "nu");
      cfg.sweep_famp = jlist(sw.value("f_amp", json::array({1.0})), "f_amp");
    }

    cfg.run.validate();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }

  cfg.config_echo = j.dump();
  return cfg;
}

} // namespace oneleg
