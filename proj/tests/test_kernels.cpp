#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "lightcone/kernels.hpp"

using lightcone::kernels::cplx;
namespace ker = lightcone::kernels;

namespace {

struct Fields {
  std::vector<cplx> a, b;
  std::vector<double> w;
  std::vector<std::uint8_t> m;
};

Fields random_fields(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Fields f;
  f.a.resize(n);
  f.b.resize(n);
  f.w.resize(n);
  f.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.a[i] = cplx(u(rng), u(rng));
    f.b[i] = cplx(u(rng), u(rng));
    f.w[i] = u(rng);
    f.m[i] = rng() & 1 ? 1 : 0;
  }
  return f;
}

// odd and pow2 sizes, plus empty and single element
const std::size_t sizes[] = {0, 1, 7, 64, 1000, 4097};

}  // namespace

TEST_CASE("pointwise kernels match the serial reference exactly") {
  for (std::size_t n : sizes) {
    Fields f = random_fields(n, 17 + n);
    std::vector<cplx> got(n), want(n);

    ker::hadamard(got, f.a, f.b);
    ker::ref::hadamard(want, f.a, f.b);
    CHECK(got == want);

    ker::hadamard_scaled(got, f.a, f.b, 0.37);
    ker::ref::hadamard_scaled(want, f.a, f.b, 0.37);
    CHECK(got == want);

    ker::multiply_real(got, f.a, f.w);
    ker::ref::multiply_real(want, f.a, f.w);
    CHECK(got == want);

    ker::phase_from_real(got, f.w, -2.5);
    ker::ref::phase_from_real(want, f.w, -2.5);
    CHECK(got == want);

    ker::apply_mask(got, f.a, f.m);
    ker::ref::apply_mask(want, f.a, f.m);
    CHECK(got == want);

    got = f.a;
    want = f.a;
    ker::scale(got, 1.0 / 3.0);
    ker::ref::scale(want, 1.0 / 3.0);
    CHECK(got == want);
  }
}

TEST_CASE("reduction kernels match the serial reference") {
  for (std::size_t n : sizes) {
    Fields f = random_fields(n, 91 + n);
    // omp reductions may reassociate, so compare with a tolerance
    CHECK(ker::sum_abs2(f.a) == doctest::Approx(ker::ref::sum_abs2(f.a)).epsilon(1e-13));
    CHECK(ker::sum_abs2_weighted(f.a, f.w) ==
          doctest::Approx(ker::ref::sum_abs2_weighted(f.a, f.w)).epsilon(1e-13));
    CHECK(ker::sum_abs2_masked(f.a, f.m) ==
          doctest::Approx(ker::ref::sum_abs2_masked(f.a, f.m)).epsilon(1e-13));
    cplx d = ker::dot(f.a, f.b);
    cplx dr = ker::ref::dot(f.a, f.b);
    CHECK(std::abs(d - dr) <= 1e-13 * (1.0 + std::abs(dr)));
    CHECK(ker::max_abs(std::span<const cplx>(f.a)) == ker::ref::max_abs(std::span<const cplx>(f.a)));
    CHECK(ker::max_abs(std::span<const double>(f.w)) ==
          ker::ref::max_abs(std::span<const double>(f.w)));
  }
}

TEST_CASE("kernel identities on hand values") {
  std::vector<cplx> a{cplx(1, 2), cplx(0, -1)};
  std::vector<cplx> b{cplx(3, 0), cplx(0, 1)};
  std::vector<cplx> out(2);
  ker::hadamard(out, a, b);
  CHECK(out[0] == cplx(3, 6));
  CHECK(out[1] == cplx(1, 0));

  std::vector<double> v{0.0, M_PI};
  ker::phase_from_real(out, v, 1.0);
  CHECK(out[0] == cplx(1, 0));
  CHECK(std::abs(out[1] - cplx(-1, 0)) < 1e-15);

  CHECK(ker::sum_abs2(a) == doctest::Approx(6.0));
  std::vector<std::uint8_t> m{0, 1};
  ker::apply_mask(out, a, m);
  CHECK(out[0] == cplx(0, 0));
  CHECK(out[1] == a[1]);
  CHECK(ker::sum_abs2_masked(a, m) == doctest::Approx(1.0));
  CHECK(ker::dot(a, b) == cplx(3, -6) + cplx(-1, 0));
}
