#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "lightcone/grid.hpp"
#include "lightcone/wavefunction.hpp"

namespace lightcone {

// Fourier multiplier sampled on the grid's frequency lattice, stored in
// FFT order alongside the grid it was built for.
struct MultiplierSymbol {
  GridPtr grid;
  std::vector<cplx> values;
};

// Evaluate f(xi) at every lattice frequency. f receives a pointer to dim
// frequency components.
template <class F, class T>
void fill_symbol(const Grid& g, std::span<T> out, F f) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.total());
#pragma omp parallel for if (n >= 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::array<int, max_dim> idx{};
    g.unflatten(static_cast<std::size_t>(i), idx);
    std::array<double, max_dim> xi{};
    for (int a = 0; a < g.dim(); ++a) xi[a] = g.freq(a)[idx[a]];
    out[i] = f(xi.data(), g.dim());
  }
}

template <class F>
MultiplierSymbol make_symbol(GridPtr g, F f) {
  MultiplierSymbol s{g, std::vector<cplx>(g->total())};
  fill_symbol<F, cplx>(*g, s.values, f);
  return s;
}

// Relativistic dispersion sqrt(c^2 |xi|^2 + m^2 c^4) - m c^2, shifted so
// the zero mode has zero energy.
double kinetic_omega(const double* xi, int dim, double mass, double speed);
MultiplierSymbol kinetic_symbol(GridPtr g, double mass, double speed);
// Sobolev weight <xi>^s with <xi> = sqrt(1 + |xi|^2).
MultiplierSymbol sobolev_symbol(GridPtr g, double s);
// First component of the unit velocity field, xi_1 / <xi>.
MultiplierSymbol theta1_symbol(GridPtr g);
// f(xi) = sqrt(|xi|^2 + sign * 2i n.xi), principal branch; n must be a
// unit vector.
MultiplierSymbol f_pm_symbol(GridPtr g, std::span<const double> n, int sign);

// Imaginary part of the principal square root of lambda + i mu, computed
// without cancellation on either side of the branch cut.
double im_sqrt(double lambda, double mu);
// Real part, same care.
double re_sqrt(double lambda, double mu);

WaveFunction apply_multiplier(const WaveFunction& psi, const MultiplierSymbol& sym);

}  // namespace lightcone
