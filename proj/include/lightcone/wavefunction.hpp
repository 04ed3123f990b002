#pragma once

#include <complex>
#include <vector>

#include "lightcone/grid.hpp"

namespace lightcone {

using cplx = std::complex<double>;

// Position-space samples on a shared grid. The L2 pairing carries the
// cell volume, so norms approximate continuum integrals.
struct WaveFunction {
  GridPtr grid;
  std::vector<cplx> values;

  static WaveFunction zero(GridPtr g) { return {g, std::vector<cplx>(g->total())}; }
};

double l2_norm(const WaveFunction& psi);
// Sobolev 1/2 norm: sqrt(sum <xi> |psi_hat|^2) with the discrete Plancherel weight.
double h_half_norm(const WaveFunction& psi);
cplx inner_product(const WaveFunction& a, const WaveFunction& b);
void normalize(WaveFunction& psi);

}  // namespace lightcone
