#include "lightcone/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "lightcone/errors.hpp"
#include "lightcone/kernels.hpp"
#include "lightcone/symbols.hpp"

namespace lightcone {

StrangWorkspace::StrangWorkspace(GridPtr g, double dt, double mass, double speed,
                                 const PotentialSpec& potential)
    : grid_(std::move(g)), dt_(dt), mass_(mass), speed_(speed), potential_(potential) {
  if (!(dt_ != 0.0) || !std::isfinite(dt_)) throw std::invalid_argument("strang: dt must be finite and nonzero");
  validate(potential_, grid_->dim());
  potential_static_ = is_static(potential_);
  potential_zero_ = is_zero(potential_);
  const MultiplierSymbol omega = kinetic_symbol(grid_, mass_, speed_);
  std::vector<double> w(grid_->total());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = omega.values[i].real();
  kin_phase_.resize(grid_->total());
  kin_phase_inv_.resize(grid_->total());
  kernels::phase_from_real(kin_phase_, w, -dt_);
  kernels::phase_from_real(kin_phase_inv_, w, dt_);
  if (!potential_zero_) {
    pot_field_.resize(grid_->total());
    pot_phase_.resize(grid_->total());
  }
}

void StrangWorkspace::potential_phase(double t, double factor) {
  if (phase_cached_ && potential_static_ && cached_phase_factor_ == factor) return;
  if (!phase_cached_ || !potential_static_) evaluate_potential(potential_, *grid_, t, pot_field_);
  kernels::phase_from_real(pot_phase_, pot_field_, factor);
  cached_phase_factor_ = factor;
  phase_cached_ = true;
}

void StrangWorkspace::step(std::vector<cplx>& values, double t) {
  const Grid& g = *grid_;
  if (!potential_zero_) {
    potential_phase(t + 0.5 * dt_, -0.5 * dt_);
    kernels::hadamard(values, values, pot_phase_);
  }
  g.fft().forward(values, values);
  kernels::hadamard(values, values, kin_phase_);
  g.fft().inverse(values, values);
  if (!potential_zero_) kernels::hadamard(values, values, pot_phase_);
}

void StrangWorkspace::step_inverse(std::vector<cplx>& values, double t) {
  const Grid& g = *grid_;
  std::vector<cplx> conj_phase;
  if (!potential_zero_) {
    potential_phase(t + 0.5 * dt_, -0.5 * dt_);
    conj_phase.resize(values.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for if (n >= 4096)
    for (std::ptrdiff_t i = 0; i < n; ++i) conj_phase[i] = std::conj(pot_phase_[i]);
    kernels::hadamard(values, values, conj_phase);
  }
  g.fft().forward(values, values);
  kernels::hadamard(values, values, kin_phase_inv_);
  g.fft().inverse(values, values);
  if (!potential_zero_) kernels::hadamard(values, values, conj_phase);
}

WaveFunction free_step(const WaveFunction& psi, double dt, double mass, double speed) {
  if (!std::isfinite(dt)) throw std::invalid_argument("free_step: dt must be finite");
  const Grid& g = *psi.grid;
  const MultiplierSymbol omega = kinetic_symbol(psi.grid, mass, speed);
  std::vector<double> w(g.total());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = omega.values[i].real();
  std::vector<cplx> phase(g.total());
  kernels::phase_from_real(phase, w, -dt);
  WaveFunction out{psi.grid, std::vector<cplx>(g.total())};
  g.fft().forward(psi.values, out.values);
  kernels::hadamard(out.values, out.values, phase);
  g.fft().inverse(out.values, out.values);
  return out;
}

WaveFunction strang_step(const WaveFunction& psi, double t, double dt, const PotentialSpec& potential,
                         double mass, double speed) {
  StrangWorkspace ws(psi.grid, dt, mass, speed, potential);
  WaveFunction out = psi;
  ws.step(out.values, t);
  return out;
}

static long step_count(const EvolutionConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_final >= 0.0))
    throw std::invalid_argument("evolve: need dt > 0 and t_final >= 0");
  const double raw = cfg.t_final / cfg.dt;
  const long steps = std::lround(raw);
  if (std::abs(raw - static_cast<double>(steps)) > 1e-9 * std::max(1.0, raw))
    throw std::invalid_argument("evolve: t_final must be an integer multiple of dt");
  if (steps > cfg.max_steps) throw std::invalid_argument("evolve: step budget exceeded");
  return steps;
}

double support_radius(const WaveFunction& psi, int axis, double cutoff) {
  const Grid& g = *psi.grid;
  const double peak = kernels::max_abs(psi.values);
  if (peak == 0.0) return 0.0;
  const double floor = cutoff * peak;
  double radius = 0.0;
  std::array<int, max_dim> idx;
  for (std::size_t i = 0; i < g.total(); ++i) {
    if (std::abs(psi.values[i]) <= floor) continue;
    g.unflatten(i, idx);
    radius = std::max(radius, std::abs(g.coord(axis, idx[axis])));
  }
  return radius;
}

bool margin_satisfied(const WaveFunction& psi0, const EvolutionConfig& cfg, std::string* detail) {
  const Grid& g = *psi0.grid;
  for (int a = 0; a < g.dim(); ++a) {
    const double reach = support_radius(psi0, a) + cfg.speed * cfg.t_final + cfg.margin_extra + cfg.margin_slack;
    if (reach > 0.5 * g.length(a)) {
      if (detail)
        *detail = "box margin violated on axis " + std::to_string(a) + ": reach " + std::to_string(reach) +
                  " > L/2 = " + std::to_string(0.5 * g.length(a));
      return false;
    }
  }
  return true;
}

Trajectory evolve(const WaveFunction& psi0, const EvolutionConfig& cfg, const PotentialSpec& potential) {
  const long steps = step_count(cfg);
  Trajectory traj;
  std::string detail;
  if (!margin_satisfied(psi0, cfg, &detail)) {
    traj.margin_ok = false;
    traj.warnings.push_back(detail);
  }
  const double norm0 = l2_norm(psi0);
  if (!(norm0 > 0.0)) throw std::invalid_argument("evolve: zero initial state");

  WaveFunction psi = psi0;
  traj.snapshots.push_back({0.0, psi});
  traj.norm_drift.push_back(0.0);
  if (steps == 0) return traj;

  StrangWorkspace ws(psi.grid, cfg.dt, cfg.mass, cfg.speed, potential);
  for (long k = 0; k < steps; ++k) {
    const double t = cfg.dt * static_cast<double>(k);
    ws.step(psi.values, t);
    const double drift = std::abs(l2_norm(psi) / norm0 - 1.0);
    if (drift > cfg.norm_drift_abort)
      throw NumericalError("evolve: norm drift " + std::to_string(drift) + " at step " + std::to_string(k + 1));
    const bool last = (k + 1 == steps);
    if (last || (cfg.snapshot_every > 0 && (k + 1) % cfg.snapshot_every == 0)) {
      traj.snapshots.push_back({cfg.dt * static_cast<double>(k + 1), psi});
      traj.norm_drift.push_back(drift);
    }
  }
  return traj;
}

ConjugatedResult conjugated_evolve(const WaveFunction& psi0, const geom::SeparatingFunctional& ell,
                                   const EvolutionConfig& cfg, const PotentialSpec& potential) {
  const Grid& g = *psi0.grid;
  if (ell.normal.dim != g.dim()) throw std::invalid_argument("conjugated_evolve: functional dimension mismatch");
  const double s = cfg.mass * cfg.speed * cfg.speed;
  const double norm0 = l2_norm(psi0);
  if (!(norm0 > 0.0)) throw std::invalid_argument("conjugated_evolve: zero initial state");

  // l at every cell, and its max over the support of psi0
  std::vector<double> lfield(g.total());
  const double peak = kernels::max_abs(psi0.values);
  double shift = -1e300;
  double lmin = 1e300;
  std::array<double, max_dim> xbuf;
  for (std::size_t i = 0; i < g.total(); ++i) {
    g.point(i, xbuf);
    geom::Vec x{g.dim(), xbuf};
    lfield[i] = ell(x);
    lmin = std::min(lmin, lfield[i]);
    if (std::abs(psi0.values[i]) > 1e-12 * peak) shift = std::max(shift, lfield[i]);
  }
  if (s * (shift - lmin) > 700.0)
    throw NumericalError("conjugated_evolve: weight range overflows despite support shift");

  std::vector<double> fwd(g.total()), bwd(g.total());
  for (std::size_t i = 0; i < g.total(); ++i) {
    fwd[i] = std::exp(s * (lfield[i] - shift));
    bwd[i] = std::exp(-s * (lfield[i] - shift));
  }

  WaveFunction weighted{psi0.grid, std::vector<cplx>(g.total())};
  kernels::multiply_real(weighted.values, psi0.values, fwd);

  Trajectory traj = evolve(weighted, cfg, potential);
  ConjugatedResult out;
  out.weight_scale = s;
  out.margin_ok = traj.margin_ok;
  out.warnings = traj.warnings;
  out.final_state = std::move(traj.snapshots.back().psi);
  kernels::multiply_real(out.final_state.values, out.final_state.values, bwd);
  out.ratio = l2_norm(out.final_state) / norm0;
  return out;
}

}  // namespace lightcone
