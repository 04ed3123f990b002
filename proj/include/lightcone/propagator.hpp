#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/geometry.hpp"
#include "lightcone/potential.hpp"
#include "lightcone/wavefunction.hpp"

namespace lightcone {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  double mass = 1.0;
  double speed = 1.0;
  int snapshot_every = 0;  // steps between stored snapshots, 0 = final only
  long max_steps = 50'000'000;
  double norm_drift_abort = 1e-8;  // relative, throws NumericalError
  // box-margin policy: support_radius + speed*t_final + margin_extra +
  // margin_slack must stay within L/2 on every axis; violations flag, not abort
  double margin_extra = 0.0;
  double margin_slack = 5.0;
};

struct Snapshot {
  double t;
  WaveFunction psi;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  // first at t = 0, last at t_final
  std::vector<double> norm_drift;   // per-snapshot |norm/norm0 - 1|
  bool margin_ok = true;
  std::vector<std::string> warnings;
};

// One Strang step is exp(-i dt/2 V(t+dt/2)) free(dt) exp(-i dt/2 V(t+dt/2)),
// with the same midpoint potential sample on both sides. The workspace owns
// scratch buffers and caches the kinetic phase for its fixed (grid, dt, m, c);
// static potentials additionally cache their phase field.
class StrangWorkspace {
 public:
  StrangWorkspace(GridPtr g, double dt, double mass, double speed, const PotentialSpec& potential);

  void step(std::vector<cplx>& values, double t);
  // exact inverse of step(values, t)
  void step_inverse(std::vector<cplx>& values, double t);

  GridPtr grid() const { return grid_; }
  double dt() const { return dt_; }

 private:
  void potential_phase(double t, double factor);

  GridPtr grid_;
  double dt_, mass_, speed_;
  PotentialSpec potential_;
  bool potential_static_, potential_zero_;
  std::vector<cplx> kin_phase_, kin_phase_inv_;
  std::vector<cplx> pot_phase_;    // exp(-i dt/2 V)
  std::vector<double> pot_field_;
  double cached_phase_factor_ = 0.0;
  bool phase_cached_ = false;
};

WaveFunction free_step(const WaveFunction& psi, double dt, double mass, double speed);
WaveFunction strang_step(const WaveFunction& psi, double t, double dt, const PotentialSpec& potential,
                         double mass, double speed);
Trajectory evolve(const WaveFunction& psi0, const EvolutionConfig& cfg, const PotentialSpec& potential);

// Largest |x_axis| over cells carrying amplitude above cutoff * max|psi|.
double support_radius(const WaveFunction& psi, int axis, double cutoff = 1e-12);
bool margin_satisfied(const WaveFunction& psi0, const EvolutionConfig& cfg, std::string* detail = nullptr);

struct ConjugatedResult {
  WaveFunction final_state;   // e^{-s l} U_T e^{s l} psi0, shift removed
  double ratio = 1.0;         // |final_state| / |psi0|
  double weight_scale = 1.0;  // s = mass * speed^2
  bool margin_ok = true;
  std::vector<std::string> warnings;
};

// Conjugated evolution e^{-s l(x)} U_T e^{s l(x)} applied to psi0, with
// s = mass*speed^2. Both weights are shifted by max l over the support of
// psi0; the shift cancels in the ratio and keeps the pre-weight bounded by 1
// on the support. Throws NumericalError when the post-weight would overflow
// anyway (box too large for the weight range).
ConjugatedResult conjugated_evolve(const WaveFunction& psi0, const geom::SeparatingFunctional& ell,
                                   const EvolutionConfig& cfg, const PotentialSpec& potential);

}  // namespace lightcone
