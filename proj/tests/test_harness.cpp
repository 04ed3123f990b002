#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lightcone/harness.hpp"
#include "lightcone/oracle.hpp"
#include "lightcone/symbols.hpp"

using namespace lightcone;

namespace {

geom::Vec vec1(double x) { return geom::make_vec(std::array<double, 1>{x}); }

geom::Region interval(double lo, double hi) {
  geom::Region r;
  r.components.push_back(geom::ConvexRegion{{geom::AxisBox{vec1(lo), vec1(hi)}}});
  return r;
}

BoundExperiment base_experiment(GridPtr g) {
  BoundExperiment e;
  e.grid = g;
  e.potential = {ZeroPotential{}};
  e.region_x = interval(-1.0, 1.0);
  e.region_y = interval(3.0, 8.0);
  e.state.width = 0.25;
  e.times = {0.25};
  e.check_admissibility = false;
  return e;
}

}  // namespace

TEST_CASE("masked bump state: exact support, unit norm, auto center") {
  GridPtr g = make_grid(1, 256, 32.0);
  geom::Region x = interval(2.0, 6.0);
  double tail = -1.0;
  WaveFunction psi = masked_bump_state(g, x, StateSpec{{}, 0.5}, &tail);
  CHECK(l2_norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tail >= 0.0);
  std::size_t peak = 0;
  for (std::size_t j = 0; j < g->total(); ++j) {
    if (std::abs(psi.values[j]) > std::abs(psi.values[peak])) peak = j;
    if (psi.values[j] != cplx(0.0, 0.0)) {
      geom::Vec p = vec1(g->coord(0, int(j)));
      CHECK(geom::contains(x, p));
    }
  }
  // dimension-0 center defaults to the bounding-box center of the region
  CHECK(g->coord(0, int(peak)) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("state-norm check at time zero") {
  GridPtr g = make_grid(1, 512, 64.0);
  BoundExperiment e = base_experiment(g);
  e.times = {0.0};

  BoundReport disjoint = state_norm_bound_check(e);
  CHECK(disjoint.dist == doctest::Approx(2.0).epsilon(1e-9));
  REQUIRE(disjoint.samples.size() == 1);
  CHECK(disjoint.samples[0].measured == doctest::Approx(0.0));
  CHECK(disjoint.samples[0].bound == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(!disjoint.samples[0].vacuous);
  CHECK(disjoint.all_pass);

  e.region_y = interval(-1.0, 1.0);  // Y = X
  BoundReport overlap = state_norm_bound_check(e);
  CHECK(overlap.dist == doctest::Approx(0.0));
  CHECK(overlap.samples[0].measured == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap.samples[0].bound == doctest::Approx(1.0));
  CHECK(overlap.samples[0].vacuous);  // e^{s c t - s d} = 1 carries no information
  CHECK(overlap.all_pass);
}

TEST_CASE("larger target windows capture at least as much mass") {
  GridPtr g = make_grid(1, 512, 64.0);
  BoundExperiment e = base_experiment(g);
  e.times = {0.5};
  double prev = -1.0;
  for (double hi : {4.0, 6.0, 10.0}) {
    e.region_y = interval(3.0, hi);
    BoundReport r = state_norm_bound_check(e);
    CHECK(r.samples[0].measured >= prev - 1e-12);
    prev = r.samples[0].measured;
  }
}

TEST_CASE("operator norm: one on overlap at time zero, zero on disjoint masks") {
  GridPtr g = make_grid(1, 256, 32.0);
  BoundExperiment e = base_experiment(g);
  e.region_y = interval(-1.0, 1.0);
  OperatorNormResult r = operator_norm_estimate(e, 0.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));

  e.region_y = interval(3.0, 8.0);
  OperatorNormResult z = operator_norm_estimate(e, 0.0);
  CHECK(z.value <= 1e-8);
}

TEST_CASE("operator norm matches the dense masked singular value") {
  GridPtr g = make_grid(1, 64, 16.0);
  BoundExperiment e = base_experiment(g);
  e.region_x = interval(-2.0, -0.5);
  e.region_y = interval(0.5, 2.0);
  e.potential = {StaticBump{0.5, vec1(0.0), 1.0}};
  const double t = 0.5;

  OperatorNormResult got = operator_norm_estimate(e, t);
  CHECK(got.converged);

  Eigen::MatrixXcd u = dense_propagator(*g, e.potential, t, int(std::lround(t / e.dt)), 1.0, 1.0);
  std::vector<std::uint8_t> mx = geom::indicator_mask(e.region_x, *g);
  std::vector<std::uint8_t> my = geom::indicator_mask(e.region_y, *g);
  double want = dense_masked_norm(u, mx, my);
  // strang vs dense propagator differ at O(dt^2), inside the 1e-4 budget
  CHECK(got.value == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("operator norm dominates any single-state measurement") {
  GridPtr g = make_grid(1, 256, 32.0);
  BoundExperiment e = base_experiment(g);
  e.times = {0.25};
  BoundReport state = state_norm_bound_check(e);
  e.mode = BoundMode::OperatorNorm;
  BoundReport op = operator_norm_bound_check(e);
  REQUIRE(op.samples.size() == 1);
  CHECK(op.samples[0].measured >= state.samples[0].measured - 1e-8);
  CHECK(op.mode == "operator-norm");
  CHECK(state.mode == "state-norm");
}

TEST_CASE("union bound assembles the tiling constant") {
  GridPtr g = make_grid(1, 1024, 64.0);
  BoundExperiment e = base_experiment(g);
  geom::Region x;
  x.components.push_back(geom::ConvexRegion{{geom::Ball{vec1(-2.0), 1.0}}});
  x.components.push_back(geom::ConvexRegion{{geom::Ball{vec1(2.0), 1.0}}});
  e.region_x = x;
  e.region_y = interval(9.0, 14.0);
  e.state.center = vec1(2.0);
  e.times = {0.5};
  BoundReport r = nonconvex_bound_check(e, 0.5);
  CHECK(r.mode == "union");
  CHECK(r.dist == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(r.tiling_constant_value ==
        doctest::Approx(geom::tiling_constant(6.0, 0.5, 1)).epsilon(1e-12));
  CHECK(r.tiles_x > 0);
  CHECK(r.tiles_y > 0);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].bound_raw ==
        doctest::Approx(std::exp(0.5) * r.tiling_constant_value).epsilon(1e-12));
  CHECK(r.all_pass);

  // regions closer than the cube diagonal are rejected
  e.region_y = interval(2.2, 3.0);
  CHECK_THROWS_AS(nonconvex_bound_check(e, 0.5), std::invalid_argument);
}

TEST_CASE("conjugated check: factored bound never beats the direct bound") {
  GridPtr g = make_grid(1, 512, 16.0);
  BoundExperiment e = base_experiment(g);
  e.region_y = interval(5.0, 7.0);
  e.state.width = 0.4;
  e.times = {0.0, 0.25};
  ConjugatedReport r = conjugated_norm_check(e);
  CHECK(r.dist == doctest::Approx(4.0).epsilon(1e-9));
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0].ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.samples[0].bound == doctest::Approx(1.0));
  for (const ConjugatedSample& s : r.samples) {
    CHECK(s.pass);
    CHECK(s.ratio <= s.bound * (1.0 + 1e-3));
    // lattice mask maxima sit inside the continuum envelope e^{-s d/2}
    CHECK(s.mask_factor_x <= std::exp(-0.5 * r.dist) + 1e-12);
    CHECK(s.mask_factor_y <= std::exp(-0.5 * r.dist) + 1e-12);
    CHECK(s.factored_bound == doctest::Approx(s.mask_factor_y * s.ratio * s.mask_factor_x));
    CHECK(s.factored_bound <= s.direct_bound * (1.0 + 1e-9));
  }
  CHECK(r.all_pass);

  // union regions are rejected, the functional needs single components
  geom::Region two;
  two.components.push_back(geom::ConvexRegion{{geom::Ball{vec1(0.0), 1.0}}});
  two.components.push_back(geom::ConvexRegion{{geom::Ball{vec1(1.0), 1.0}}});
  e.region_x = two;
  CHECK_THROWS_AS(conjugated_norm_check(e), std::invalid_argument);
}

TEST_CASE("sharpness state: shell projection is idempotent, R scan is minimal") {
  GridPtr g = make_grid(1, 2048, 128.0);
  const double delta = 0.9, eps = 0.1;
  SharpnessState st = sharpness_state(g, delta, eps, 4.0);
  CHECK(l2_norm(st.phi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st.shell_mass > 0.0);
  CHECK(st.shell_mass <= 1.0 + 1e-12);
  CHECK(st.R > 0.0);

  // the spectrum lies in the shell: reapplying the projector changes nothing
  const double threshold = 0.5 * (1.0 + delta);
  MultiplierSymbol proj = make_symbol(g, [&](const double* xi, int) {
    double theta = xi[0] / std::sqrt(1.0 + xi[0] * xi[0]);
    return theta > threshold ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  });
  WaveFunction again = apply_multiplier(st.phi, proj);
  double diff = 0.0;
  for (std::size_t i = 0; i < again.values.size(); ++i)
    diff += std::norm(again.values[i] - st.phi.values[i]);
  CHECK(std::sqrt(diff * g->cell_volume()) < 1e-10);
  // carrier frequency really sits inside the shell
  CHECK(st.modulation / std::sqrt(1.0 + st.modulation * st.modulation) > threshold);

  // tail beyond R obeys the eps/2 budget and R is the smallest such coordinate
  auto tail_norm = [&](double r) {
    double m = 0.0;
    for (std::size_t j = 0; j < g->total(); ++j)
      if (std::abs(g->coord(0, int(j))) >= r) m += std::norm(st.phi.values[j]);
    return std::sqrt(m * g->cell_volume());
  };
  CHECK(tail_norm(st.R) <= 0.5 * eps + 1e-12);
  CHECK(tail_norm(st.R - g->spacing(0)) > 0.5 * eps);
}

TEST_CASE("sharpness run reports the certifying constant and the crossing") {
  GridPtr g = make_grid(1, 2048, 128.0);
  SharpnessParams p;
  p.times = {5.0, 10.0, 15.0, 20.0};
  SharpnessReport r = sharpness_run(g, p);
  REQUIRE(r.measured.size() == 4);
  CHECK(r.fitted_c_finite);
  // fitted_c certifies measured >= 1 - eps - C/t across the sweep by construction
  for (std::size_t j = 0; j < r.measured.size(); ++j)
    CHECK(r.measured[j] >= 1.0 - p.eps - r.fitted_c / r.times[j] - 1e-12);
  // and it is attained at some sample
  double attained = -1e300;
  for (std::size_t j = 0; j < r.measured.size(); ++j)
    attained = std::max(attained, r.times[j] * (1.0 - p.eps - r.measured[j]));
  CHECK(r.fitted_c == doctest::Approx(attained).epsilon(1e-12));
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].speed == doctest::Approx(0.5));
  CHECK(r.crossings[0].found);
  CHECK(r.crossings[0].measured > r.crossings[0].curve);
  CHECK(r.dist[0] == doctest::Approx(p.delta * p.times[0]));
}

TEST_CASE("cone profile: conservation, cumulative columns, resolution floor") {
  GridPtr g = make_grid(1, 2048, 64.0);
  BoundExperiment e = base_experiment(g);
  e.times = {0.5, 1.0};
  ConeProfile prof = light_cone_profile(e, 0.5);
  CHECK(prof.mass_conserved);
  CHECK(prof.spectral_floor >= 0.0);
  REQUIRE(!prof.rows.empty());
  CHECK(prof.rows.size() % 2 == 0);
  const std::size_t shells = prof.rows.size() / 2;

  for (std::size_t b = 0; b < 2; ++b) {
    double total = 0.0;
    double prev_beyond = 2.0;
    for (std::size_t k = 0; k < shells; ++k) {
      const ConeProfileRow& row = prof.rows[b * shells + k];
      CHECK(row.t == doctest::Approx(e.times[b]));
      CHECK(row.shell_hi == doctest::Approx(row.shell_lo + 0.5));
      total += row.mass;
      // suffix sums decrease and match the per-shell masses
      CHECK(row.mass_beyond <= prev_beyond + 1e-15);
      prev_beyond = row.mass_beyond;
      CHECK(row.bound <= 1.0);
      if (k == 0) {
        CHECK(row.bound == 1.0);
      } else {
        CHECK(row.bound == doctest::Approx(std::min(
                  1.0, std::exp(2.0 * (e.times[b] - row.shell_lo)))));
      }
      CHECK(row.asserted == (row.bound >= 10.0 * prof.spectral_floor));
      if (row.asserted) CHECK(row.mass_beyond <= row.bound * (1.0 + 1e-6));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(prof.rows[b * shells].mass_beyond == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("symbol audit passes on a small lattice") {
  GridPtr g = make_grid(2, 16, 8.0);
  SymbolAuditReport r = g0_and_symbol_audit(g, 25, 77);
  CHECK(r.pass);
  CHECK(r.directions == 25);
  CHECK(r.comparisons == std::size_t(25) * 2 * g->total());
  CHECK(r.max_im_abs <= 1.0 + 1e-12);
  CHECK(r.max_im_abs > 0.5);  // the bound is near-saturated on a decent lattice
  CHECK(r.max_form_discrepancy <= 1e-12);
  CHECK(r.g0_norm <= 1.0 + 1e-12);
  CHECK(r.g0_mode_ratio <= 1.0 + 1e-12);
  CHECK(r.g0_mode_ratio == doctest::Approx(r.g0_norm).epsilon(1e-10));
}
