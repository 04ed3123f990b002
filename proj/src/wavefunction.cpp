#include "lightcone/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "lightcone/kernels.hpp"
#include "lightcone/symbols.hpp"

namespace lightcone {

double l2_norm(const WaveFunction& psi) {
  return std::sqrt(psi.grid->cell_volume() * kernels::sum_abs2(psi.values));
}

double h_half_norm(const WaveFunction& psi) {
  const Grid& g = *psi.grid;
  std::vector<cplx> hat(g.total());
  g.fft().forward(psi.values, hat);
  std::vector<double> w(g.total());
  fill_symbol(g, std::span<double>(w), [](const double* xi, int dim) {
    double q = 1.0;
    for (int a = 0; a < dim; ++a) q += xi[a] * xi[a];
    return std::sqrt(q);
  });
  // forward transform is unnormalized: |hat|^2 carries a factor total^2,
  // Plancherel weight is cell_volume / total.
  const double weight = g.cell_volume() / static_cast<double>(g.total());
  return std::sqrt(weight * kernels::sum_abs2_weighted(hat, w));
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (a.grid != b.grid) throw std::invalid_argument("inner_product: grids differ");
  return a.grid->cell_volume() * kernels::dot(a.values, b.values);
}

void normalize(WaveFunction& psi) {
  const double n = l2_norm(psi);
  if (!(n > 0.0)) throw std::domain_error("normalize: zero state");
  kernels::scale(psi.values, 1.0 / n);
}

}  // namespace lightcone
