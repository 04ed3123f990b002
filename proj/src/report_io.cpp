#include "lightcone/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lightcone/errors.hpp"

namespace lightcone {

using json = nlohmann::ordered_json;

namespace {

json samples_json(const BoundReport& report) {
  json arr = json::array();
  for (const BoundSample& sm : report.samples) {
    arr.push_back({{"t", sm.t},
                   {"measured", sm.measured},
                   {"bound", sm.bound},
                   {"bound_raw", sm.bound_raw},
                   {"margin", sm.margin},
                   {"vacuous", sm.vacuous},
                   {"pass", sm.pass}});
  }
  return arr;
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string bound_report_json(const BoundReport& report) {
  json j{{"schema_version", 1},
         {"report", "bound"},
         {"mode", report.mode},
         {"dist", report.dist},
         {"mass", report.mass},
         {"speed", report.speed},
         {"all_pass", report.all_pass},
         {"margin_ok", report.margin_ok},
         {"state_tail_fraction", report.state_tail_fraction},
         {"samples", samples_json(report)},
         {"warnings", report.warnings}};
  if (report.functional) {
    std::vector<double> normal(report.functional->normal.v.begin(),
                               report.functional->normal.v.begin() + report.functional->normal.dim);
    std::vector<double> base(report.functional->base.v.begin(),
                             report.functional->base.v.begin() + report.functional->base.dim);
    j["separating_functional"] = {{"normal", normal}, {"base", base}, {"dist", report.functional->dist}};
  }
  if (report.mode == "union") {
    j["tiling"] = {{"edge", report.tiling_edge},
                   {"constant", report.tiling_constant_value},
                   {"tiles_x", report.tiles_x},
                   {"tiles_y", report.tiles_y}};
  }
  return j.dump(2) + "\n";
}

std::string conjugated_report_json(const ConjugatedReport& report) {
  json arr = json::array();
  for (const ConjugatedSample& sm : report.samples) {
    arr.push_back({{"t", sm.t_final},
                   {"ratio", sm.ratio},
                   {"bound", sm.bound},
                   {"pass", sm.pass},
                   {"mask_factor_x", sm.mask_factor_x},
                   {"mask_factor_y", sm.mask_factor_y},
                   {"factored_bound", sm.factored_bound},
                   {"direct_bound", sm.direct_bound}});
  }
  json j{{"schema_version", 1},
         {"report", "conjugated"},
         {"dist", report.dist},
         {"weight_scale", report.weight_scale},
         {"all_pass", report.all_pass},
         {"samples", arr},
         {"warnings", report.warnings}};
  return j.dump(2) + "\n";
}

std::string symbol_audit_json(const SymbolAuditReport& report) {
  json j{{"schema_version", 1},
         {"report", "symbol-audit"},
         {"directions", report.directions},
         {"comparisons", report.comparisons},
         {"max_im_abs", report.max_im_abs},
         {"max_form_discrepancy", report.max_form_discrepancy},
         {"g0_norm", report.g0_norm},
         {"g0_mode_ratio", report.g0_mode_ratio},
         {"pass", report.pass}};
  return j.dump(2) + "\n";
}

std::string sharpness_report_json(const SharpnessReport& report) {
  json crossings = json::array();
  for (const SharpnessCrossing& cr : report.crossings) {
    crossings.push_back({{"speed", cr.speed},
                         {"found", cr.found},
                         {"t", cr.t},
                         {"measured", cr.measured},
                         {"curve", cr.curve}});
  }
  json j{{"schema_version", 1},
         {"report", "sharpness"},
         {"delta", report.delta},
         {"eps", report.eps},
         {"R", report.R},
         {"shell_mass", report.shell_mass},
         {"times", report.times},
         {"measured", report.measured},
         {"dist", report.dist},
         {"fitted_c", report.fitted_c},
         {"fitted_c_finite", report.fitted_c_finite},
         {"floor_largest_half", report.floor_largest_half},
         {"crossings", crossings},
         {"warnings", report.warnings}};
  return j.dump(2) + "\n";
}

std::string cone_profile_json(const ConeProfile& profile) {
  json rows = json::array();
  for (const ConeProfileRow& r : profile.rows) {
    rows.push_back({{"t", r.t},
                    {"shell_lo", r.shell_lo},
                    {"shell_hi", r.shell_hi},
                    {"mass", r.mass},
                    {"mass_beyond", r.mass_beyond},
                    {"bound_at_shell", r.bound},
                    {"asserted", r.asserted}});
  }
  json j{{"schema_version", 1},
         {"report", "cone-profile"},
         {"shell_width", profile.shell_width},
         {"mass_conserved", profile.mass_conserved},
         {"spectral_floor", profile.spectral_floor},
         {"rows", rows},
         {"warnings", profile.warnings}};
  return j.dump(2) + "\n";
}

std::string admissibility_json(const AdmissibilityReport& report) {
  const char* status = report.status == AdmissibilityStatus::Pass ? "pass"
                       : report.status == AdmissibilityStatus::Fail ? "fail"
                                                                    : "inconclusive";
  json j{{"schema_version", 1},
         {"report", "admissibility"},
         {"decomposition",
          report.decomposition == Decomposition::FormBounded ? "form-bounded" : "bounded"},
         {"status", status},
         {"cond_klmn", report.cond_klmn},
         {"cond_bounded", report.cond_bounded},
         {"cond_derivative", report.cond_derivative},
         {"sup_klmn", report.sup_klmn},
         {"sup_bounded", report.sup_bounded},
         {"sup_derivative", report.sup_derivative},
         {"sample_times", report.sample_times},
         {"klmn_by_sample", report.klmn_by_sample},
         {"all_converged", report.all_converged},
         {"refinement_delta", report.refinement_delta},
         {"note", report.note}};
  return j.dump(2) + "\n";
}

std::string tiling_constant_json(const TilingQuery& query, double value) {
  json j{{"schema_version", 1},
         {"report", "tiling-constant"},
         {"dist", query.dist},
         {"edge", query.edge},
         {"dim", query.dim},
         {"value", value}};
  return j.dump(2) + "\n";
}

std::string bound_report_csv(const BoundReport& report) {
  std::ostringstream os;
  os << "t,measured,bound,bound_raw,margin,vacuous,pass\n";
  for (const BoundSample& sm : report.samples) {
    os << num(sm.t) << ',' << num(sm.measured) << ',' << num(sm.bound) << ',' << num(sm.bound_raw)
       << ',' << num(sm.margin) << ',' << csv_bool(sm.vacuous) << ',' << csv_bool(sm.pass) << '\n';
  }
  return os.str();
}

std::string conjugated_report_csv(const ConjugatedReport& report) {
  std::ostringstream os;
  os << "t,ratio,bound,pass,mask_factor_x,mask_factor_y,factored_bound,direct_bound\n";
  for (const ConjugatedSample& sm : report.samples) {
    os << num(sm.t_final) << ',' << num(sm.ratio) << ',' << num(sm.bound) << ',' << csv_bool(sm.pass)
       << ',' << num(sm.mask_factor_x) << ',' << num(sm.mask_factor_y) << ','
       << num(sm.factored_bound) << ',' << num(sm.direct_bound) << '\n';
  }
  return os.str();
}

std::string sharpness_report_csv(const SharpnessReport& report,
                                 const std::vector<double>& comparison_speeds) {
  std::ostringstream os;
  os << "t,dist,measured";
  for (double c : comparison_speeds) os << ",curve_c" << c;
  os << '\n';
  for (std::size_t j = 0; j < report.times.size(); ++j) {
    os << num(report.times[j]) << ',' << num(report.dist[j]) << ',' << num(report.measured[j]);
    for (double c : comparison_speeds)
      os << ',' << num(std::exp(c * report.times[j] - report.dist[j]));
    os << '\n';
  }
  return os.str();
}

std::string cone_profile_csv(const ConeProfile& profile) {
  std::ostringstream os;
  os << "t,shell_lo,shell_hi,mass,bound_at_shell\n";
  for (const ConeProfileRow& r : profile.rows) {
    os << num(r.t) << ',' << num(r.shell_lo) << ',' << num(r.shell_hi) << ',' << num(r.mass) << ','
       << num(r.bound) << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  os << "t,norm_drift\n";
  for (std::size_t i = 0; i < trajectory.snapshots.size(); ++i) {
    os << num(trajectory.snapshots[i].t) << ','
       << num(i < trajectory.norm_drift.size() ? trajectory.norm_drift[i] : 0.0) << '\n';
  }
  return os.str();
}

void write_snapshot(const std::string& stem, const Snapshot& snap) {
  const Grid& g = *snap.psi.grid;
  std::string data;
  data.resize(snap.psi.values.size() * 2 * sizeof(double));
  // complex<double> is layout-compatible with double[2]
  std::memcpy(data.data(), snap.psi.values.data(), data.size());
  atomic_write(stem + ".bin", data);

  std::vector<int> points;
  std::vector<double> lengths;
  for (int a = 0; a < g.dim(); ++a) {
    points.push_back(g.points(a));
    lengths.push_back(g.length(a));
  }
  json side{{"schema_version", 1},
            {"format", "complex128 interleaved re,im, row-major, last axis fastest"},
            {"byte_order", "little-endian"},
            {"grid", {{"dim", g.dim()}, {"points", points}, {"lengths", lengths}}},
            {"t", snap.t},
            {"norm", l2_norm(snap.psi)},
            {"data_file", std::filesystem::path(stem + ".bin").filename().string()}};
  atomic_write(stem + ".json", side.dump(2) + "\n");
}

std::string manifest_json(const RunManifest& manifest) {
  json entries = json::array();
  for (const ManifestEntry& e : manifest.entries) {
    entries.push_back({{"name", e.name},
                       {"status", e.status},
                       {"reports", e.reports},
                       {"warnings", e.warnings}});
  }
  json j{{"schema_version", 1},
         {"artifact_version", artifact_version},
         {"config_hash", manifest.config_hash},
         {"config_path", manifest.config_path},
         {"kind", manifest.kind},
         {"started_at", manifest.started_at},
         {"finished_at", manifest.finished_at},
         {"experiments", entries},
         {"exit_code", manifest.exit_code}};
  return j.dump(2) + "\n";
}

std::string timestamp_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace lightcone
