#include "lightcone/fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <mutex>
#include <stdexcept>

#include "lightcone/kernels.hpp"

namespace lightcone {

// fftw_plan_dft is not reentrant; execution via the new-array interface is.
static std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {
struct PlanPair {
  fftw_plan inplace = nullptr;
  fftw_plan outofplace = nullptr;
};
}  // namespace

// An FFTW plan may only be re-executed on arrays with the same
// in-place-ness it was created with, hence one plan of each flavor
// per direction.
struct FftPlans {
  PlanPair fwd, bwd;
};

Fft::Fft(std::span<const int> dims) {
  total_ = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("Fft: nonpositive dimension");
    total_ *= static_cast<std::size_t>(d);
  }
  std::vector<std::complex<double>> a(total_), b(total_);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_UNALIGNED so plans stay valid for arbitrary caller buffers,
  // FFTW_ESTIMATE so planning never touches the data and stays deterministic.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int rank = static_cast<int>(dims.size());
  auto* plans = new FftPlans;
  plans->fwd.inplace = fftw_plan_dft(rank, dims.data(), pa, pa, FFTW_FORWARD, flags);
  plans->fwd.outofplace = fftw_plan_dft(rank, dims.data(), pa, pb, FFTW_FORWARD, flags);
  plans->bwd.inplace = fftw_plan_dft(rank, dims.data(), pa, pa, FFTW_BACKWARD, flags);
  plans->bwd.outofplace = fftw_plan_dft(rank, dims.data(), pa, pb, FFTW_BACKWARD, flags);
  impl_ = plans;
  if (!plans->fwd.inplace || !plans->fwd.outofplace || !plans->bwd.inplace || !plans->bwd.outofplace)
    throw std::runtime_error("Fft: planner failed");
}

Fft::~Fft() {
  auto* plans = static_cast<FftPlans*>(impl_);
  if (!plans) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  for (fftw_plan p : {plans->fwd.inplace, plans->fwd.outofplace, plans->bwd.inplace, plans->bwd.outofplace})
    if (p) fftw_destroy_plan(p);
  delete plans;
}

static void run(const PlanPair& pair, std::span<const std::complex<double>> in,
                std::span<std::complex<double>> out) {
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(src == dst ? pair.inplace : pair.outofplace, src, dst);
}

void Fft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  assert(in.size() == total_ && out.size() == total_);
  run(static_cast<FftPlans*>(impl_)->fwd, in, out);
}

void Fft::inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  assert(in.size() == total_ && out.size() == total_);
  run(static_cast<FftPlans*>(impl_)->bwd, in, out);
  kernels::scale(out, 1.0 / static_cast<double>(total_));
}

}  // namespace lightcone
