#include "lightcone/symbols.hpp"

#include <cmath>
#include <stdexcept>

#include "lightcone/kernels.hpp"

namespace lightcone {

double kinetic_omega(const double* xi, int dim, double mass, double speed) {
  const double c2 = speed * speed;
  const double rest = mass * c2;
  double q = 0.0;
  for (int a = 0; a < dim; ++a) q += xi[a] * xi[a];
  // sqrt(c^2 q + rest^2) - rest without cancellation at small q
  const double e = std::sqrt(c2 * q + rest * rest);
  return c2 * q / (e + rest);
}

MultiplierSymbol kinetic_symbol(GridPtr g, double mass, double speed) {
  if (!(mass > 0.0) || !(speed > 0.0)) throw std::invalid_argument("kinetic_symbol: need mass > 0, speed > 0");
  return make_symbol(g, [mass, speed](const double* xi, int dim) {
    return cplx(kinetic_omega(xi, dim, mass, speed), 0.0);
  });
}

MultiplierSymbol sobolev_symbol(GridPtr g, double s) {
  return make_symbol(g, [s](const double* xi, int dim) {
    double q = 1.0;
    for (int a = 0; a < dim; ++a) q += xi[a] * xi[a];
    return cplx(std::pow(q, 0.5 * s), 0.0);
  });
}

MultiplierSymbol theta1_symbol(GridPtr g) {
  return make_symbol(g, [](const double* xi, int dim) {
    double q = 1.0;
    for (int a = 0; a < dim; ++a) q += xi[a] * xi[a];
    return cplx(xi[0] / std::sqrt(q), 0.0);
  });
}

double im_sqrt(double lambda, double mu) {
  if (mu == 0.0) {
    if (lambda < 0.0) throw std::domain_error("im_sqrt: branch cut (lambda < 0, mu = 0)");
    return 0.0;
  }
  const double r = std::hypot(lambda, mu);
  if (lambda >= 0.0) return mu / std::sqrt(2.0 * (r + lambda));
  return std::copysign(std::sqrt(0.5 * (r - lambda)), mu);
}

double re_sqrt(double lambda, double mu) {
  const double b = im_sqrt(lambda, mu);
  if (b == 0.0) return std::sqrt(std::max(lambda, 0.0));
  return mu / (2.0 * b);
}

MultiplierSymbol f_pm_symbol(GridPtr g, std::span<const double> n, int sign) {
  if (n.size() != static_cast<std::size_t>(g->dim()))
    throw std::invalid_argument("f_pm_symbol: direction dimension mismatch");
  if (sign != 1 && sign != -1) throw std::invalid_argument("f_pm_symbol: sign must be +1 or -1");
  double len2 = 0.0;
  for (double v : n) len2 += v * v;
  if (std::abs(std::sqrt(len2) - 1.0) > 1e-12) throw std::invalid_argument("f_pm_symbol: n must be a unit vector");
  std::array<double, max_dim> nv{};
  for (std::size_t a = 0; a < n.size(); ++a) nv[a] = n[a];
  const double sgn = sign;
  return make_symbol(g, [nv, sgn](const double* xi, int dim) {
    double q = 0.0, ndot = 0.0;
    for (int a = 0; a < dim; ++a) {
      q += xi[a] * xi[a];
      ndot += nv[a] * xi[a];
    }
    const double mu = sgn * 2.0 * ndot;
    return cplx(re_sqrt(q, mu), im_sqrt(q, mu));
  });
}

WaveFunction apply_multiplier(const WaveFunction& psi, const MultiplierSymbol& sym) {
  if (psi.grid != sym.grid) throw std::invalid_argument("apply_multiplier: symbol built for a different grid");
  const Grid& g = *psi.grid;
  WaveFunction out{psi.grid, std::vector<cplx>(g.total())};
  g.fft().forward(psi.values, out.values);
  kernels::hadamard(out.values, out.values, sym.values);
  g.fft().inverse(out.values, out.values);
  return out;
}

}  // namespace lightcone
