#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lightcone/kernels.hpp"

namespace {

using lightcone::kernels::cplx;

std::vector<cplx> random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(gauss(rng), gauss(rng));
  return v;
}

std::vector<double> random_real(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = gauss(rng);
  return v;
}

void bm_hadamard_omp(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto a = random_field(n, 1), b = random_field(n, 2);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    lightcone::kernels::hadamard(out, a, b);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

void bm_hadamard_ref(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto a = random_field(n, 1), b = random_field(n, 2);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    lightcone::kernels::ref::hadamard(out, a, b);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

void bm_phase_omp(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto v = random_real(n, 3);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    lightcone::kernels::phase_from_real(out, v, 0.37);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

void bm_phase_ref(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto v = random_real(n, 3);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    lightcone::kernels::ref::phase_from_real(out, v, 0.37);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

void bm_sum_abs2_omp(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto a = random_field(n, 4);
  for (auto _ : state) {
    double s = lightcone::kernels::sum_abs2(a);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

void bm_sum_abs2_ref(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto a = random_field(n, 4);
  for (auto _ : state) {
    double s = lightcone::kernels::ref::sum_abs2(a);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

}  // namespace

BENCHMARK(bm_hadamard_omp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_hadamard_ref)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_phase_omp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_phase_ref)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_sum_abs2_omp)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_sum_abs2_ref)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
