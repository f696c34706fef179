#pragma once

#include "oneleg/constants.hpp"
#include "oneleg/io.hpp"
#include "oneleg/stepper.hpp"

#include <string>
#include <vector>

namespace oneleg {

/// One experiment: a run plus certification and sweep settings. Parsed from
/// a JSON config file (schema documented in the README); the canonical echo
/// is embedded into every output for provenance.
struct ExperimentConfig {
  RunConfig run;
  uint64_t seed = 0;
  std::string config_echo; // canonical JSON of the parsed config

  ConstantsVariant variant = ConstantsVariant::DerivationConsistent;
  double certify_r = -1.0; // <0: default 4*kappa1
  double certify_T = -1.0; // <0: default steps*tau

  std::vector<double> sweep_theta, sweep_tau, sweep_nu, sweep_famp;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

} // namespace oneleg
