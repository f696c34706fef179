#pragma once

#include "oneleg/constants.hpp"
#include "oneleg/gronwall.hpp"
#include "oneleg/stepper.hpp"

#include <string>
#include <vector>

namespace oneleg {

/// Outcome of one checked inequality or identity over a trajectory.
/// Margins are relative to the per-step natural scale (the largest
/// constituent term), so pass means min_rel_margin >= -tol for inequalities
/// and max_rel_residual <= tol for identities.
struct CheckResult {
  std::string id;
  std::string anchor; // where the estimate lives in the source material
  bool is_identity = false;

  bool hypothesis_met = false;
  std::string hypothesis;

  double worst = 0.0;           // min rel margin, or max rel residual
  double worst_abs = 0.0;       // the same step's absolute margin/residual
  double scale_at_worst = 0.0;
  long first_violation = -1;    // step index; -1 when none
  long steps_checked = 0;
  long steps_violating = 0;
  double tol = 0.0;

  bool pass = false;      // margin test irrespective of the hypothesis
  std::string note;

  bool hard_failure() const { return hypothesis_met && !pass; }
};

struct CertificateReport {
  std::string schema_version = "1";
  ConstantsVariant variant = ConstantsVariant::DerivationConsistent;
  double tol_cert = 1e-10;
  RunMeta meta_echo; // environment echo: the trajectory's run metadata
  std::vector<CheckResult> checks;
  bool h_stable = false;
  bool v_longtime_certified = false; // all long-time hypotheses met and passed
  bool any_hypothesis_met_violation = false;

  const CheckResult* find(const std::string& id) const;
};

// Individual check groups (each appends to out). Exposed for tests.
void check_energy0(const TrajectoryLog& log, const BoundLedger& L,
                   std::vector<CheckResult>& out);
void check_energy1_identity(const TrajectoryLog& log, const BoundLedger& L,
                            std::vector<CheckResult>& out);
void check_solver(const TrajectoryLog& log, const BoundLedger& L,
                  std::vector<CheckResult>& out);
void check_h_decay(const TrajectoryLog& log, const BoundLedger& L,
                   std::vector<CheckResult>& out);
void check_l2h1_sums(const TrajectoryLog& log, const BoundLedger& L,
                     std::vector<CheckResult>& out);
void check_v_recursion(const TrajectoryLog& log, const BoundLedger& L,
                       std::vector<CheckResult>& out);
void check_v_longtime(const TrajectoryLog& log, const BoundLedger& L,
                      std::vector<CheckResult>& out);

CertificateReport full_report(const TrajectoryLog& log, const BoundLedger& L);

/// Builds the ledger whose inputs mirror a trajectory's metadata.
LedgerInputs ledger_inputs_from_meta(const RunMeta& meta, double T, double r);

} // namespace oneleg
