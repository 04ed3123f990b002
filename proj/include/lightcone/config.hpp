#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/admissibility.hpp"
#include "lightcone/geometry.hpp"
#include "lightcone/grid.hpp"
#include "lightcone/harness.hpp"
#include "lightcone/potential.hpp"

namespace lightcone {

enum class ExperimentKind {
  Simulate,
  VerifyBound,
  Sharpness,
  CheckPotential,
  SymbolAudit,
  TilingConstant,
  ConeProfile,
};

const char* kind_name(ExperimentKind k);
std::optional<ExperimentKind> kind_from_name(const std::string& name);

// Which bound the verify-bound kind checks.
enum class BoundCheckMode { StateNorm, OperatorNorm, Union, Conjugated };

struct TilingQuery {
  double dist = 0.0;
  double edge = 0.5;
  int dim = 1;
};

struct OutputSpec {
  std::string directory = "out";
  bool snapshots = false;
};

struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::Simulate;
  GridPtr grid;  // null only for tiling-constant
  double mass = 1.0, speed = 1.0;
  PotentialSpec potential{};  // defaults to zero
  bool has_region_x = false, has_region_y = false;
  geom::Region region_x, region_y;
  StateSpec state{};
  double dt = 1e-3;
  double t_final = 0.0;      // simulate
  int snapshot_every = 0;    // simulate
  std::vector<double> times; // verify-bound, cone-profile
  BoundCheckMode mode = BoundCheckMode::StateNorm;
  double union_edge = 0.5;   // cube edge for the union mode
  double tolerance = 1e-6;
  std::uint64_t seed = 1234;
  SharpnessParams sharpness{};
  TilingQuery tiling{};
  double shell_width = 0.5;          // cone-profile
  int audit_directions = 100;        // symbol-audit
  int admissibility_samples = 33;    // check-potential
  Decomposition admissibility_hint = Decomposition::FormBounded;
  std::size_t max_points = std::size_t{1} << 22;  // memory budget on grid size
  OutputSpec output{};
  std::string source_path;
  std::string raw_text;  // exact file content, hashed into the manifest
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // "<json-pointer>: message", all collected
};

// Region blocks are tagged objects:
//   {"ball": {"center": [...], "radius": r}}
//   {"halfspace": {"normal": [...], "offset": b}}
//   {"box": {"lo": [...], "hi": [...]}}
//   {"intersection": [primitive, ...]}
//   {"union": [convex, ...]}
// Potential blocks follow the same convention: {"zero": {}},
// {"static_bump": {...}}, {"moving_bump": {...}}, {"oscillating_bump": {...}},
// {"sum": [...]}.
ParseOutcome parse_config(const std::string& path);
ParseOutcome parse_config_text(const std::string& text, const std::string& source_name);
// Joins the error list into a ConfigError.
ExperimentConfig parse_config_or_throw(const std::string& path);

}  // namespace lightcone
