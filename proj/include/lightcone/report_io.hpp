#pragma once

#include <string>
#include <vector>

#include "lightcone/admissibility.hpp"
#include "lightcone/config.hpp"
#include "lightcone/harness.hpp"
#include "lightcone/propagator.hpp"

namespace lightcone {

inline constexpr const char* artifact_version = "1.0.0";

// FNV-1a over the raw bytes, as a hex string.
std::string content_hash(const std::string& text);

// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a partial file under the final name. Creates parent directories.
void atomic_write(const std::string& path, const std::string& content);

// JSON report bodies. Every serializer includes a schema_version field.
std::string bound_report_json(const BoundReport& report);
std::string conjugated_report_json(const ConjugatedReport& report);
std::string symbol_audit_json(const SymbolAuditReport& report);
std::string sharpness_report_json(const SharpnessReport& report);
std::string cone_profile_json(const ConeProfile& profile);
std::string admissibility_json(const AdmissibilityReport& report);
std::string tiling_constant_json(const TilingQuery& query, double value);

// CSV time series, column order fixed.
// bound: t,measured,bound,bound_raw,margin,vacuous,pass
std::string bound_report_csv(const BoundReport& report);
// conjugated: t,ratio,bound,pass,mask_factor_x,mask_factor_y,factored_bound,direct_bound
std::string conjugated_report_csv(const ConjugatedReport& report);
// sharpness: t,dist,measured, then one curve column per comparison speed
std::string sharpness_report_csv(const SharpnessReport& report,
                                 const std::vector<double>& comparison_speeds);
// cone: t,shell_lo,shell_hi,mass,bound_at_shell
std::string cone_profile_csv(const ConeProfile& profile);
// trajectory: t,norm_drift
std::string trajectory_csv(const Trajectory& trajectory);

// Binary snapshot: interleaved little-endian float64 (re, im) pairs in the
// grid's row-major order, plus a JSON sidecar describing grid, time, norm.
void write_snapshot(const std::string& stem, const Snapshot& snap);

struct ManifestEntry {
  std::string name;     // experiment id
  std::string status;   // pass | fail | inconclusive | error
  std::vector<std::string> reports;  // files written for this experiment
  std::vector<std::string> warnings;
};

struct RunManifest {
  std::string config_hash;
  std::string config_path;
  std::string kind;
  std::string started_at, finished_at;  // ISO 8601 UTC, excluded from determinism
  std::vector<ManifestEntry> entries;
  int exit_code = 0;
};

std::string manifest_json(const RunManifest& manifest);
std::string timestamp_utc_now();

}  // namespace lightcone
