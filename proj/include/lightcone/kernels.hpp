#pragma once

#include <complex>
#include <cstdint>
#include <span>

// Pointwise field kernels. Every routine here has a serial twin in
// kernels::ref with identical semantics; the tests diff the two and the
// bench target times them against each other.
namespace lightcone::kernels {

using cplx = std::complex<double>;

// out[i] = a[i]*b[i]
void hadamard(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b);
// out[i] = a[i]*b[i]*s
void hadamard_scaled(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b, double s);
// out[i] = a[i]*w[i]
void multiply_real(std::span<cplx> out, std::span<const cplx> a, std::span<const double> w);
// out[i] = exp(i*factor*v[i])
void phase_from_real(std::span<cplx> out, std::span<const double> v, double factor);
// x[i] *= s
void scale(std::span<cplx> x, double s);
// out[i] = a[i] where m[i] != 0, else 0
void apply_mask(std::span<cplx> out, std::span<const cplx> a, std::span<const std::uint8_t> m);

double sum_abs2(std::span<const cplx> a);
double sum_abs2_weighted(std::span<const cplx> a, std::span<const double> w);
double sum_abs2_masked(std::span<const cplx> a, std::span<const std::uint8_t> m);
// sum conj(a[i])*b[i]
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double max_abs(std::span<const cplx> a);
double max_abs(std::span<const double> a);

namespace ref {
void hadamard(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b);
void hadamard_scaled(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b, double s);
void multiply_real(std::span<cplx> out, std::span<const cplx> a, std::span<const double> w);
void phase_from_real(std::span<cplx> out, std::span<const double> v, double factor);
void scale(std::span<cplx> x, double s);
void apply_mask(std::span<cplx> out, std::span<const cplx> a, std::span<const std::uint8_t> m);
double sum_abs2(std::span<const cplx> a);
double sum_abs2_weighted(std::span<const cplx> a, std::span<const double> w);
double sum_abs2_masked(std::span<const cplx> a, std::span<const std::uint8_t> m);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double max_abs(std::span<const cplx> a);
double max_abs(std::span<const double> a);
}  // namespace ref

}  // namespace lightcone::kernels
