#include "lightcone/kernels.hpp"

#include <cassert>
#include <cmath>

namespace lightcone::kernels {

// Below this size the fork/join overhead swamps the loop body.
static constexpr std::ptrdiff_t par_threshold = 1 << 12;

void hadamard(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b) {
  assert(out.size() == a.size() && a.size() == b.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void hadamard_scaled(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b, double s) {
  assert(out.size() == a.size() && a.size() == b.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i] * s;
}

void multiply_real(std::span<cplx> out, std::span<const cplx> a, std::span<const double> w) {
  assert(out.size() == a.size() && a.size() == w.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * w[i];
}

void phase_from_real(std::span<cplx> out, std::span<const double> v, double factor) {
  assert(out.size() == v.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double ph = factor * v[i];
    out[i] = cplx(std::cos(ph), std::sin(ph));
  }
}

void scale(std::span<cplx> x, double s) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= s;
}

void apply_mask(std::span<cplx> out, std::span<const cplx> a, std::span<const std::uint8_t> m) {
  assert(out.size() == a.size() && a.size() == m.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = m[i] ? a[i] : cplx(0.0, 0.0);
}

double sum_abs2(std::span<const cplx> a) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) acc += std::norm(a[i]);
  return acc;
}

double sum_abs2_weighted(std::span<const cplx> a, std::span<const double> w) {
  assert(a.size() == w.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) acc += w[i] * std::norm(a[i]);
  return acc;
}

double sum_abs2_masked(std::span<const cplx> a, std::span<const std::uint8_t> m) {
  assert(a.size() == m.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    if (m[i]) acc += std::norm(a[i]);
  return acc;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double re = 0.0, im = 0.0;
#pragma omp parallel for reduction(+ : re, im) if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const cplx v = std::conj(a[i]) * b[i];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

double max_abs(std::span<const cplx> a) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double acc = 0.0;
#pragma omp parallel for reduction(max : acc) if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) acc = std::max(acc, std::abs(a[i]));
  return acc;
}

double max_abs(std::span<const double> a) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double acc = 0.0;
#pragma omp parallel for reduction(max : acc) if (n >= par_threshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) acc = std::max(acc, std::abs(a[i]));
  return acc;
}

}  // namespace lightcone::kernels
