#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/admissibility.hpp"
#include "lightcone/geometry.hpp"
#include "lightcone/potential.hpp"
#include "lightcone/propagator.hpp"
#include "lightcone/wavefunction.hpp"

namespace lightcone {

// Gaussian bump exp(-|x - center|^2 / (2 width^2)); a center of dimension 0
// means "use the bounding-box center of the X region".
struct StateSpec {
  geom::Vec center;
  double width = 0.25;
};

enum class BoundMode { StateNorm, OperatorNorm };

struct BoundExperiment {
  GridPtr grid;
  double mass = 1.0;
  double speed = 1.0;
  PotentialSpec potential;
  geom::Region region_x, region_y;
  StateSpec state;
  std::vector<double> times;  // nondecreasing, multiples of dt
  double dt = 1e-3;
  BoundMode mode = BoundMode::StateNorm;
  std::uint64_t seed = 1234;
  double tolerance = 1e-6;
  bool check_admissibility = true;
};

struct BoundSample {
  double t = 0.0;
  double measured = 0.0;
  double bound_raw = 0.0;  // e^{m c^2 (c t - dist)}
  double bound = 0.0;      // clipped at 1
  double margin = 0.0;     // bound - measured
  bool vacuous = false;    // bound_raw >= 1
  bool pass = true;        // measured <= bound * (1 + tolerance)
};

struct BoundReport {
  std::string mode;
  double dist = 0.0;
  double mass = 1.0, speed = 1.0;
  std::vector<BoundSample> samples;
  bool all_pass = true;
  bool margin_ok = true;
  double state_tail_fraction = 0.0;  // Fourier mass above 2/3 Nyquist
  std::optional<geom::SeparatingFunctional> functional;
  // union-bound extras (mode == "union")
  double tiling_edge = 0.0;
  double tiling_constant_value = 0.0;
  std::size_t tiles_x = 0, tiles_y = 0;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;
};

// Bump restricted to the region and renormalized; support is exact on the
// lattice. tail_fraction reports the Fourier mass above 2/3 Nyquist.
WaveFunction masked_bump_state(GridPtr g, const geom::Region& region, const StateSpec& spec,
                               double* tail_fraction = nullptr);

// Evolves the X-supported state and compares |1_Y psi_t| against
// e^{m c^2 (c t - dist(X,Y))} clipped at 1.
BoundReport state_norm_bound_check(const BoundExperiment& exp);

struct OperatorNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Power iteration on A*A with A = 1_Y U_t 1_X; the adjoint runs the Strang
// steps inverted in reverse order. The estimate is a lower bound on the
// discrete operator norm.
OperatorNormResult operator_norm_estimate(const BoundExperiment& exp, double t);
// Same bound comparison as state_norm_bound_check with operator-norm estimates.
BoundReport operator_norm_bound_check(const BoundExperiment& exp);

struct ConjugatedSample {
  double t_final = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // e^{m c^2 c t}
  bool pass = true;
  double mask_factor_x = 0.0;  // max over X cells of e^{-s l}
  double mask_factor_y = 0.0;  // max over Y cells of e^{+s l}
  double factored_bound = 0.0; // mask_factor_y * ratio * mask_factor_x
  double direct_bound = 0.0;   // e^{m c^2 (c t - dist)}
};

struct ConjugatedReport {
  double dist = 0.0;
  geom::SeparatingFunctional functional;
  double weight_scale = 1.0;
  std::vector<ConjugatedSample> samples;
  bool all_pass = true;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;
};

// Conjugated-norm growth for each requested final time; X and Y must be
// single convex components with positive distance.
ConjugatedReport conjugated_norm_check(const BoundExperiment& exp);

struct SymbolAuditReport {
  int directions = 0;
  std::size_t comparisons = 0;
  double max_im_abs = 0.0;            // sup over directions and lattice of |Im f_pm|
  double max_form_discrepancy = 0.0;  // principal-root vs quotient closed form
  double g0_norm = 0.0;               // multiplier norm of Im f_+ for the last direction
  double g0_mode_ratio = 0.0;         // |G0 psi| / |psi| on the peak lattice mode
  bool pass = false;
  double runtime_seconds = 0.0;
};

SymbolAuditReport g0_and_symbol_audit(GridPtr g, int directions, std::uint64_t seed);

// Modulated Gaussian seed projected onto the shell {xi : xi_1/<xi> > (1+delta)/2},
// normalized; R is the smallest grid coordinate with |1_{|x_1| >= R} phi| <= eps/2.
struct SharpnessState {
  WaveFunction phi;
  double R = 0.0;
  double shell_mass = 0.0;  // seed mass fraction surviving the projection
  double modulation = 0.0;  // carrier frequency chosen inside the shell
};
SharpnessState sharpness_state(GridPtr g, double delta, double eps, double seed_width);

struct SharpnessParams {
  double delta = 0.9;
  double eps = 0.1;
  double seed_width = 4.0;
  std::vector<double> times;  // strictly positive
  std::vector<double> comparison_speeds{0.5};
  double mass = 1.0;
  double speed = 1.0;
};

struct SharpnessCrossing {
  double speed = 0.0;
  bool found = false;
  double t = 0.0;
  double measured = 0.0;
  double curve = 0.0;
};

struct SharpnessReport {
  double delta = 0.0, eps = 0.0;
  double R = 0.0;
  double shell_mass = 0.0;
  std::vector<double> times, measured, dist;  // dist(X, Y_t) = delta * c * t
  double fitted_c = 0.0;  // smallest C with measured(t) >= 1 - eps - C/t over the sweep
  bool fitted_c_finite = false;
  double floor_largest_half = 0.0;  // min measured over the largest time half
  std::vector<SharpnessCrossing> crossings;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;
};

// Free evolution of 1_X phi_delta with X = {x_1 <= R}, measured against the
// moving half-space Y_t = {x_1 >= R + delta c t}. The free propagator is a
// single multiplier per time, no stepping error.
SharpnessReport sharpness_run(GridPtr g, const SharpnessParams& params);

// Union-region leakage vs e^{m c^2 c t} * K(m c^2 dist, m c^2 edge, d), the
// tiled assembly of the cube-decomposition argument.
BoundReport nonconvex_bound_check(const BoundExperiment& exp, double edge = 0.5);

struct ConeProfileRow {
  double t = 0.0;
  double shell_lo = 0.0, shell_hi = 0.0;
  double mass = 0.0;         // probability (squared norm) in the shell
  double mass_beyond = 0.0;  // cumulative mass at distance >= shell_lo, what the bound controls
  double bound = 0.0;        // e^{2 m c^2 (c t - shell_lo)} clipped at 1
  bool asserted = true;      // false once the bound drops below the spectral resolution floor
};

struct ConeProfile {
  double shell_width = 0.0;
  std::vector<ConeProfileRow> rows;
  bool mass_conserved = true;   // per-time shell masses sum to 1
  double spectral_floor = 0.0;  // dealiasing-band mass of psi_0; finite bandwidth leaks
                                // a slowly decaying floor the continuum bound cannot see
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;
};

// Distance-to-X histogram of |psi_t|^2 in shells of the given width.
ConeProfile light_cone_profile(const BoundExperiment& exp, double shell_width);

}  // namespace lightcone
