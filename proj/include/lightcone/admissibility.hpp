#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lightcone/potential.hpp"
#include "lightcone/wavefunction.hpp"

namespace lightcone {

struct KlmnOptions {
  double tol = 1e-9;  // successive-estimate convergence
  int max_iter = 20000;
  std::uint64_t seed = 20240901;
};

struct KlmnResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<cplx> vector;  // final iterate, reusable as warm start
};

// Operator norm of S V S with S = <grad>^{-1/2}, estimated by power
// iteration on the square (S V S)^2, which is positive semidefinite, so the
// Rayleigh estimates rise monotonically regardless of the sign of V.
KlmnResult klmn_norm_full(std::span<const double> v_field, GridPtr g, const KlmnOptions& opt = {},
                          const std::vector<cplx>* warm_start = nullptr);
double klmn_norm(std::span<const double> v_field, GridPtr g, double tol = 1e-9);

enum class Decomposition { FormBounded, Bounded };
enum class AdmissibilityStatus { Pass, Fail, Inconclusive };

// The three propagator-existence conditions for V = V_B + V_infty:
//   1. sup_t klmn(V_B,t) < 1 (strict; values within 1e-3 of 1 are inconclusive)
//   2. sup_t max|V_infty,t| finite
//   3. sup_t (split norm of dV/dt) finite, estimated by central differences
// The decomposition hint routes the whole potential to V_B (FormBounded)
// or to V_infty (Bounded, making condition 1 vacuous).
struct AdmissibilityReport {
  Decomposition decomposition = Decomposition::FormBounded;
  AdmissibilityStatus status = AdmissibilityStatus::Pass;
  bool cond_klmn = true;
  bool cond_bounded = true;
  bool cond_derivative = true;
  double sup_klmn = 0.0;
  double sup_bounded = 0.0;
  double sup_derivative = 0.0;
  std::vector<double> sample_times;
  std::vector<double> klmn_by_sample;
  bool all_converged = true;
  // klmn on the half-resolution grid at the worst sample; the finite section
  // approximates the continuum norm from below, so this is a refinement probe
  double refinement_delta = 0.0;
  std::string note;
};

AdmissibilityReport admissibility_report(const PotentialSpec& potential, GridPtr g, double t_final,
                                         int samples, Decomposition hint,
                                         const KlmnOptions& opt = {});

}  // namespace lightcone
