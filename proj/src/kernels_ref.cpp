#include "lightcone/kernels.hpp"

#include <cassert>
#include <cmath>

namespace lightcone::kernels::ref {

void hadamard(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b) {
  assert(out.size() == a.size() && a.size() == b.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void hadamard_scaled(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b, double s) {
  assert(out.size() == a.size() && a.size() == b.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i] * s;
}

void multiply_real(std::span<cplx> out, std::span<const cplx> a, std::span<const double> w) {
  assert(out.size() == a.size() && a.size() == w.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * w[i];
}

void phase_from_real(std::span<cplx> out, std::span<const double> v, double factor) {
  assert(out.size() == v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ph = factor * v[i];
    out[i] = cplx(std::cos(ph), std::sin(ph));
  }
}

void scale(std::span<cplx> x, double s) {
  for (auto& v : x) v *= s;
}

void apply_mask(std::span<cplx> out, std::span<const cplx> a, std::span<const std::uint8_t> m) {
  assert(out.size() == a.size() && a.size() == m.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = m[i] ? a[i] : cplx(0.0, 0.0);
}

double sum_abs2(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return acc;
}

double sum_abs2_weighted(std::span<const cplx> a, std::span<const double> w) {
  assert(a.size() == w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * std::norm(a[i]);
  return acc;
}

double sum_abs2_masked(std::span<const cplx> a, std::span<const std::uint8_t> m) {
  assert(a.size() == m.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (m[i]) acc += std::norm(a[i]);
  return acc;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double max_abs(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& v : a) acc = std::max(acc, std::abs(v));
  return acc;
}

double max_abs(std::span<const double> a) {
  double acc = 0.0;
  for (const auto& v : a) acc = std::max(acc, std::abs(v));
  return acc;
}

}  // namespace lightcone::kernels::ref
