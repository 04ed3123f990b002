#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "lightcone/grid.hpp"
#include "lightcone/symbols.hpp"
#include "lightcone/wavefunction.hpp"

using namespace lightcone;

namespace {

std::vector<cplx> random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> x(n);
  for (auto& v : x) v = cplx(u(rng), u(rng));
  return x;
}

// plain DFT sum over the index lattice, any dim
std::vector<cplx> naive_dft(const Grid& g, const std::vector<cplx>& in) {
  const std::size_t n = g.total();
  std::vector<cplx> out(n);
  std::array<int, max_dim> kj{}, xj{};
  for (std::size_t k = 0; k < n; ++k) {
    g.unflatten(k, kj);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      g.unflatten(j, xj);
      double phase = 0.0;
      for (int a = 0; a < g.dim(); ++a)
        phase += 2.0 * M_PI * double(kj[a]) * double(xj[a]) / double(g.points(a));
      acc += in[j] * std::exp(cplx(0.0, -phase));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("grid lattice matches the stated conventions") {
  GridPtr g = make_grid(1, 8, 2.0 * M_PI);
  CHECK(g->total() == 8);
  CHECK(g->spacing(0) == doctest::Approx(M_PI / 4.0));
  CHECK(g->coord(0, 0) == doctest::Approx(-M_PI));
  CHECK(g->cell_volume() == doctest::Approx(M_PI / 4.0));
  // FFT-ordered frequencies 0..3, -4..-1 at unit spacing for L = 2 pi
  const std::vector<double> want{0, 1, 2, 3, -4, -3, -2, -1};
  REQUIRE(g->freq(0).size() == 8);
  for (int k = 0; k < 8; ++k) CHECK(g->freq(0)[k] == doctest::Approx(want[k]));

  const std::array<int, 2> pts{8, 16};
  const std::array<double, 2> len{2.0, 4.0};
  GridPtr g2 = make_grid(2, pts, len);
  CHECK(g2->total() == 128);
  CHECK(g2->spacing(0) == doctest::Approx(0.25));
  CHECK(g2->spacing(1) == doctest::Approx(0.25));
  CHECK(g2->cell_volume() == doctest::Approx(0.0625));
}

TEST_CASE("grid validation rejects bad shapes") {
  CHECK_THROWS(make_grid(1, 6, 1.0));     // not a power of two
  CHECK_THROWS(make_grid(1, 4, 1.0));     // below the minimum of 8
  CHECK_THROWS(make_grid(1, 8, -1.0));    // negative length
  CHECK_THROWS(make_grid(4, 8, 1.0));     // dim out of range
  CHECK_THROWS(make_grid(0, 8, 1.0));
}

TEST_CASE("fft agrees with the naive dft and inverts") {
  for (int dim = 1; dim <= 2; ++dim) {
    const std::array<int, 2> pts{8, 16};
    const std::array<double, 2> len{2.0, 3.0};
    GridPtr g = dim == 1 ? make_grid(1, 16, 3.0) : make_grid(2, pts, len);
    std::vector<cplx> x = random_state(g->total(), 5 + dim);
    std::vector<cplx> hat(g->total()), back(g->total());
    g->fft().forward(x, hat);
    std::vector<cplx> want = naive_dft(*g, x);
    for (std::size_t i = 0; i < hat.size(); ++i)
      CHECK(std::abs(hat[i] - want[i]) < 1e-12 * double(g->total()));
    g->fft().inverse(hat, back);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-13);
  }
}

TEST_CASE("parseval for the unnormalized forward transform") {
  GridPtr g = make_grid(1, 64, 5.0);
  std::vector<cplx> x = random_state(g->total(), 42);
  std::vector<cplx> hat(g->total());
  g->fft().forward(x, hat);
  double sx = 0.0, sh = 0.0;
  for (auto v : x) sx += std::norm(v);
  for (auto v : hat) sh += std::norm(v);
  CHECK(sh == doctest::Approx(double(g->total()) * sx).epsilon(1e-12));
}

TEST_CASE("dispersion symbol values") {
  const double xi1[] = {1.0, 0.0, 0.0};
  CHECK(kinetic_omega(xi1, 3, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  const double xi0[] = {0.0, 0.0, 0.0};
  CHECK(kinetic_omega(xi0, 3, 1.0, 1.0) == 0.0);
  // m = 2, c = 0.5: sqrt(c^2 xi^2 + m^2 c^4) - m c^2 at xi = e_1
  CHECK(kinetic_omega(xi1, 1, 2.0, 0.5) ==
        doctest::Approx(std::sqrt(0.25 + 0.25) - 0.5).epsilon(1e-15));
  // massless limit is |c xi|
  CHECK(kinetic_omega(xi1, 1, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("theta1 symbol is xi_1 over <xi>") {
  GridPtr g = make_grid(1, 8, 2.0 * M_PI);
  MultiplierSymbol th = theta1_symbol(g);
  // mode k = 1 has xi = 1, theta = 1/sqrt(2)
  CHECK(th.values[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(th.values[1].imag() == 0.0);
  CHECK(th.values[0] == cplx(0.0, 0.0));
  // spectrum stays inside [-1, 1]
  for (auto v : th.values) CHECK(std::abs(v.real()) <= 1.0);
}

TEST_CASE("principal square root helpers track the library branch") {
  // sqrt(-2i) = 1 - i, so im_sqrt(0, -2) = -1
  CHECK(im_sqrt(0.0, -2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(re_sqrt(0.0, -2.0) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    double lam = u(rng), mu = u(rng);
    if (mu == 0.0) continue;
    cplx w = std::sqrt(cplx(lam, mu));
    CHECK(im_sqrt(lam, mu) == doctest::Approx(w.imag()).epsilon(1e-13));
    CHECK(re_sqrt(lam, mu) == doctest::Approx(w.real()).epsilon(1e-13));
  }
  // on the positive real axis both sides agree without a cut
  CHECK(im_sqrt(4.0, 0.0) == 0.0);
  CHECK(re_sqrt(4.0, 0.0) == doctest::Approx(2.0));
  // the negative real axis is the cut
  CHECK_THROWS_AS(im_sqrt(-1.0, 0.0), std::domain_error);
}

TEST_CASE("f_pm symbol at a hand mode") {
  GridPtr g = make_grid(1, 8, 2.0 * M_PI);
  const double n[] = {1.0};
  MultiplierSymbol fp = f_pm_symbol(g, std::span<const double>(n, 1), +1);
  // xi = 1: sqrt(1 + 2i) = 1.2720196495... + 0.7861513777...i
  cplx want = std::sqrt(cplx(1.0, 2.0));
  CHECK(std::abs(fp.values[1] - want) < 1e-14);
  CHECK(fp.values[1].real() == doctest::Approx(1.272019649514069).epsilon(1e-12));
  CHECK(fp.values[1].imag() == doctest::Approx(0.786151377757423).epsilon(1e-12));
  MultiplierSymbol fm = f_pm_symbol(g, std::span<const double>(n, 1), -1);
  CHECK(std::abs(fm.values[1] - std::conj(want)) < 1e-14);

  CHECK_THROWS(f_pm_symbol(g, std::span<const double>(n, 1), 2));
  const double n2[] = {2.0};
  CHECK_THROWS(f_pm_symbol(g, std::span<const double>(n2, 1), 1));
}

TEST_CASE("multipliers compose pointwise and unimodular symbols preserve norm") {
  GridPtr g = make_grid(1, 32, 4.0);
  WaveFunction psi{g, random_state(g->total(), 13)};
  MultiplierSymbol a = sobolev_symbol(g, 0.5);
  MultiplierSymbol b = theta1_symbol(g);
  MultiplierSymbol ab{g, std::vector<cplx>(g->total())};
  for (std::size_t i = 0; i < ab.values.size(); ++i) ab.values[i] = a.values[i] * b.values[i];
  WaveFunction seq = apply_multiplier(apply_multiplier(psi, b), a);
  WaveFunction once = apply_multiplier(psi, ab);
  for (std::size_t i = 0; i < seq.values.size(); ++i)
    CHECK(std::abs(seq.values[i] - once.values[i]) < 1e-13);

  MultiplierSymbol phase = make_symbol(g, [](const double* xi, int) {
    return std::exp(cplx(0.0, 0.3 * xi[0]));
  });
  WaveFunction rotated = apply_multiplier(psi, phase);
  CHECK(l2_norm(rotated) == doctest::Approx(l2_norm(psi)).epsilon(1e-13));
}

TEST_CASE("h_half norm on a pure lattice mode") {
  GridPtr g = make_grid(1, 16, 2.0 * M_PI);
  WaveFunction psi = WaveFunction::zero(g);
  // e^{i 3 x} has <xi> = sqrt(10); build it in position space
  for (std::size_t j = 0; j < g->total(); ++j)
    psi.values[j] = std::exp(cplx(0.0, 3.0 * g->coord(0, int(j))));
  normalize(psi);
  CHECK(l2_norm(psi) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(h_half_norm(psi) == doctest::Approx(std::pow(10.0, 0.25)).epsilon(1e-12));
}
