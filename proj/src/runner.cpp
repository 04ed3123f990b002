#include "lightcone/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "lightcone/errors.hpp"

namespace lightcone {

namespace {

bool log_enabled() {
  const char* v = std::getenv("LIGHTCONE_LOG");
  return v && *v && std::string(v) != "0";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::fprintf(stderr, "[lightcone] %s\n", msg.c_str());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

BoundExperiment to_experiment(const ExperimentConfig& cfg) {
  BoundExperiment exp;
  exp.grid = cfg.grid;
  exp.mass = cfg.mass;
  exp.speed = cfg.speed;
  exp.potential = cfg.potential;
  exp.region_x = cfg.region_x;
  exp.region_y = cfg.region_y;
  exp.state = cfg.state;
  exp.times = cfg.times;
  exp.dt = cfg.dt;
  exp.seed = cfg.seed;
  exp.tolerance = cfg.tolerance;
  return exp;
}

struct Dispatch {
  ManifestEntry entry;
  std::string summary;
  bool pass = true;
};

Dispatch run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "simulate";
  WaveFunction psi0 = cfg.has_region_x
                          ? masked_bump_state(cfg.grid, cfg.region_x, cfg.state, nullptr)
                          : WaveFunction::zero(cfg.grid);
  if (!cfg.has_region_x) {
    // free bump with no support restriction
    geom::Vec center = cfg.state.center;
    if (center.dim == 0) center.dim = cfg.grid->dim();
    const double inv2w2 = 1.0 / (2.0 * cfg.state.width * cfg.state.width);
    std::array<int, max_dim> idx{};
    for (std::size_t i = 0; i < cfg.grid->total(); ++i) {
      cfg.grid->unflatten(i, idx);
      double q = 0.0;
      for (int a = 0; a < cfg.grid->dim(); ++a) {
        double x = cfg.grid->coord(a, idx[a]) - center[a];
        q += x * x;
      }
      psi0.values[i] = std::exp(-q * inv2w2);
    }
    normalize(psi0);
  }
  EvolutionConfig ecfg;
  ecfg.dt = cfg.dt;
  ecfg.t_final = cfg.t_final;
  ecfg.mass = cfg.mass;
  ecfg.speed = cfg.speed;
  ecfg.snapshot_every = cfg.snapshot_every;
  Trajectory traj = evolve(psi0, ecfg, cfg.potential);
  d.entry.warnings = traj.warnings;

  atomic_write(join_path(out_dir, "trajectory.csv"), trajectory_csv(traj));
  d.entry.reports.push_back("trajectory.csv");
  if (cfg.output.snapshots) {
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu", k);
      write_snapshot(join_path(out_dir, name), traj.snapshots[k]);
      d.entry.reports.push_back(std::string(name) + ".bin");
      d.entry.reports.push_back(std::string(name) + ".json");
    }
  }
  double drift = traj.norm_drift.empty() ? 0.0 : traj.norm_drift.back();
  std::ostringstream os;
  os << "simulate: evolved to t = " << cfg.t_final << ", " << traj.snapshots.size()
     << " snapshots, final norm drift " << drift;
  if (!traj.margin_ok) os << " [margin warning]";
  d.summary = os.str();
  return d;
}

Dispatch run_verify_bound(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "verify-bound";
  if (cfg.mode == BoundCheckMode::Conjugated) {
    ConjugatedReport report = conjugated_norm_check(to_experiment(cfg));
    atomic_write(join_path(out_dir, "conjugated_report.json"), conjugated_report_json(report));
    atomic_write(join_path(out_dir, "conjugated_report.csv"), conjugated_report_csv(report));
    d.entry.reports = {"conjugated_report.json", "conjugated_report.csv"};
    d.entry.warnings = report.warnings;
    d.pass = report.all_pass;
    std::ostringstream os;
    os << "verify-bound (conjugated): " << (d.pass ? "PASS" : "FAIL") << ", dist " << report.dist
       << ", " << report.samples.size() << " times";
    d.summary = os.str();
    return d;
  }
  BoundReport report;
  switch (cfg.mode) {
    case BoundCheckMode::StateNorm:
      report = state_norm_bound_check(to_experiment(cfg));
      break;
    case BoundCheckMode::OperatorNorm:
      report = operator_norm_bound_check(to_experiment(cfg));
      break;
    case BoundCheckMode::Union:
      report = nonconvex_bound_check(to_experiment(cfg), cfg.union_edge);
      break;
    case BoundCheckMode::Conjugated:
      break;  // handled above
  }
  atomic_write(join_path(out_dir, "bound_report.json"), bound_report_json(report));
  atomic_write(join_path(out_dir, "bound_report.csv"), bound_report_csv(report));
  d.entry.reports = {"bound_report.json", "bound_report.csv"};
  d.entry.warnings = report.warnings;
  d.pass = report.all_pass;
  std::ostringstream os;
  os << "verify-bound (" << report.mode << "): " << (d.pass ? "PASS" : "FAIL") << ", dist "
     << report.dist << ", " << report.samples.size() << " times";
  if (!report.margin_ok) os << " [margin warning]";
  d.summary = os.str();
  return d;
}

Dispatch run_sharpness(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "sharpness";
  SharpnessReport report = sharpness_run(cfg.grid, cfg.sharpness);
  atomic_write(join_path(out_dir, "sharpness_report.json"), sharpness_report_json(report));
  atomic_write(join_path(out_dir, "sharpness_report.csv"),
               sharpness_report_csv(report, cfg.sharpness.comparison_speeds));
  d.entry.reports = {"sharpness_report.json", "sharpness_report.csv"};
  d.entry.warnings = report.warnings;

  // the leakage lower bound must still obey the full-speed upper bound
  const double s = cfg.mass * cfg.speed * cfg.speed;
  bool consistent = true;
  for (std::size_t j = 0; j < report.times.size(); ++j) {
    double upper = std::exp(s * (cfg.speed * report.times[j] - report.dist[j]));
    if (report.measured[j] > std::min(1.0, upper) * (1.0 + 1e-6)) consistent = false;
  }
  bool crossings_found = true;
  for (const SharpnessCrossing& cr : report.crossings) crossings_found = crossings_found && cr.found;
  d.pass = consistent && crossings_found && report.fitted_c_finite;
  std::ostringstream os;
  os << "sharpness: " << (d.pass ? "PASS" : "FAIL") << ", R = " << report.R << ", fitted C = "
     << report.fitted_c << ", floor(last half) = " << report.floor_largest_half;
  for (const SharpnessCrossing& cr : report.crossings) {
    if (cr.found)
      os << ", crosses c' = " << cr.speed << " at t = " << cr.t;
    else
      os << ", no crossing found for c' = " << cr.speed;
  }
  d.summary = os.str();
  return d;
}

Dispatch run_check_potential(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "check-potential";
  AdmissibilityReport report = admissibility_report(cfg.potential, cfg.grid, cfg.t_final,
                                                    cfg.admissibility_samples, cfg.admissibility_hint);
  atomic_write(join_path(out_dir, "admissibility.json"), admissibility_json(report));
  d.entry.reports = {"admissibility.json"};
  d.pass = report.status == AdmissibilityStatus::Pass;
  if (report.status == AdmissibilityStatus::Inconclusive) {
    d.entry.status = "inconclusive";
    d.entry.warnings.push_back("admissibility inconclusive: form norm within 1e-3 of 1");
  }
  std::ostringstream os;
  os << "check-potential: "
     << (report.status == AdmissibilityStatus::Pass          ? "PASS"
         : report.status == AdmissibilityStatus::Inconclusive ? "INCONCLUSIVE"
                                                              : "FAIL")
     << ", form norm " << report.sup_klmn << ", sup |V| " << report.sup_bounded << ", derivative "
     << report.sup_derivative;
  d.summary = os.str();
  return d;
}

Dispatch run_symbol_audit(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "symbol-audit";
  SymbolAuditReport report = g0_and_symbol_audit(cfg.grid, cfg.audit_directions, cfg.seed);
  atomic_write(join_path(out_dir, "symbol_audit.json"), symbol_audit_json(report));
  d.entry.reports = {"symbol_audit.json"};
  d.pass = report.pass;
  std::ostringstream os;
  os << "symbol-audit: " << (d.pass ? "PASS" : "FAIL") << ", max |Im f| = " << report.max_im_abs
     << ", max closed-form discrepancy = " << report.max_form_discrepancy << " over "
     << report.comparisons << " comparisons";
  d.summary = os.str();
  return d;
}

Dispatch run_tiling_constant(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "tiling-constant";
  double value = geom::tiling_constant(cfg.tiling.dist, cfg.tiling.edge, cfg.tiling.dim);
  atomic_write(join_path(out_dir, "tiling_constant.json"), tiling_constant_json(cfg.tiling, value));
  d.entry.reports = {"tiling_constant.json"};
  std::ostringstream os;
  os.precision(12);
  os << "tiling constant (dim " << cfg.tiling.dim << ", edge " << cfg.tiling.edge << ", dist "
     << cfg.tiling.dist << ") = " << value;
  d.summary = os.str();
  return d;
}

Dispatch run_cone_profile(const ExperimentConfig& cfg, const std::string& out_dir) {
  Dispatch d;
  d.entry.name = "cone-profile";
  ConeProfile profile = light_cone_profile(to_experiment(cfg), cfg.shell_width);
  atomic_write(join_path(out_dir, "cone_profile.json"), cone_profile_json(profile));
  atomic_write(join_path(out_dir, "cone_profile.csv"), cone_profile_csv(profile));
  d.entry.reports = {"cone_profile.json", "cone_profile.csv"};
  d.entry.warnings = profile.warnings;
  bool bounds_ok = true;
  std::size_t asserted = 0;
  for (const ConeProfileRow& r : profile.rows) {
    if (!r.asserted) continue;
    ++asserted;
    if (r.mass_beyond > r.bound * (1.0 + 1e-6)) bounds_ok = false;
  }
  d.pass = profile.mass_conserved && bounds_ok;
  std::ostringstream os;
  os << "cone-profile: " << (d.pass ? "PASS" : "FAIL") << ", " << asserted << "/"
     << profile.rows.size() << " rows asserted, shell width " << profile.shell_width
     << (profile.mass_conserved ? "" : " [mass not conserved]");
  d.summary = os.str();
  return d;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  RunResult result;
  result.manifest.config_hash = content_hash(cfg.raw_text);
  result.manifest.config_path = cfg.source_path;
  result.manifest.kind = kind_name(cfg.kind);
  result.manifest.started_at = timestamp_utc_now();

  Dispatch d;
  log_line(std::string("running ") + kind_name(cfg.kind));
  try {
    switch (cfg.kind) {
      case ExperimentKind::Simulate: d = run_simulate(cfg, out_dir); break;
      case ExperimentKind::VerifyBound: d = run_verify_bound(cfg, out_dir); break;
      case ExperimentKind::Sharpness: d = run_sharpness(cfg, out_dir); break;
      case ExperimentKind::CheckPotential: d = run_check_potential(cfg, out_dir); break;
      case ExperimentKind::SymbolAudit: d = run_symbol_audit(cfg, out_dir); break;
      case ExperimentKind::TilingConstant: d = run_tiling_constant(cfg, out_dir); break;
      case ExperimentKind::ConeProfile: d = run_cone_profile(cfg, out_dir); break;
    }
    if (d.entry.status.empty()) d.entry.status = d.pass ? "pass" : "fail";
    result.exit_code = d.pass ? 0 : 1;
  } catch (const NumericalError& e) {
    d.entry.name = kind_name(cfg.kind);
    d.entry.status = "error";
    d.entry.warnings.push_back(e.what());
    d.summary = std::string(kind_name(cfg.kind)) + ": numerical abort: " + e.what();
    result.exit_code = 3;
  } catch (const GeometryError& e) {
    d.entry.name = kind_name(cfg.kind);
    d.entry.status = "error";
    d.entry.warnings.push_back(e.what());
    d.summary = std::string(kind_name(cfg.kind)) + ": geometry error: " + e.what();
    result.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    d.entry.name = kind_name(cfg.kind);
    d.entry.status = "error";
    d.entry.warnings.push_back(e.what());
    d.summary = std::string(kind_name(cfg.kind)) + ": configuration error: " + e.what();
    result.exit_code = 2;
  } catch (const std::exception& e) {
    d.entry.name = kind_name(cfg.kind);
    d.entry.status = "error";
    d.entry.warnings.push_back(e.what());
    d.summary = std::string(kind_name(cfg.kind)) + ": error: " + e.what();
    result.exit_code = 3;
  }

  result.manifest.entries.push_back(d.entry);
  result.manifest.finished_at = timestamp_utc_now();
  result.manifest.exit_code = result.exit_code;
  result.summary = d.summary;
  atomic_write(join_path(out_dir, "manifest.json"), manifest_json(result.manifest));
  log_line("wrote manifest.json, exit " + std::to_string(result.exit_code));
  return result;
}

}  // namespace lightcone
