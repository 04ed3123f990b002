#pragma once

#include <string>

#include "lightcone/config.hpp"
#include "lightcone/report_io.hpp"

namespace lightcone {

struct RunResult {
  RunManifest manifest;
  std::string summary;  // human-readable lines for the terminal
  int exit_code = 0;    // 0 pass, 1 bound violation / fail, 2 config error, 3 numerical abort
};

// Dispatches one experiment, writes its reports and the run manifest under
// out_dir (atomically, one file at a time).
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace lightcone
