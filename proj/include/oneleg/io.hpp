#pragma once

#include "oneleg/certify.hpp"
#include "oneleg/stepper.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace oneleg {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Trajectory CSV: two '#' header lines (format tag, run metadata as JSON),
/// one column-name row, then one row per step in the documented order.
/// Doubles print as %.17g so rereads and reruns are byte-stable.
std::string trajectory_csv(const TrajectoryLog& log);
TrajectoryLog parse_trajectory_csv(const std::string& text);

std::string run_meta_json(const RunMeta& m);
RunMeta parse_run_meta_json(const std::string& text);

/// Field snapshot: JSON with a grid header and one [k1,k2,re1,im1,re2,im2]
/// record per retained mode, row-major in (k1,k2).
std::string field_snapshot_json(const VelocityField& u);
VelocityField parse_field_snapshot(const std::string& text);

std::string report_json(const CertificateReport& rep, const BoundLedger& L);
std::string report_text(const CertificateReport& rep);

std::string ledger_json(const BoundLedger& L);
std::string ledger_text(const BoundLedger& L);

/// Write-then-rename so failures never leave partial files.
void atomic_write(const std::filesystem::path& path,
                  const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace oneleg
