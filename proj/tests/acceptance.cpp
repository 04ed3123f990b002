// Acceptance gate: one line per criterion, exit code = number of failures.
// Each criterion is independent and self-timed; a thrown exception fails
// only the criterion that raised it.
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lightcone/admissibility.hpp"
#include "lightcone/errors.hpp"
#include "lightcone/geometry.hpp"
#include "lightcone/harness.hpp"
#include "lightcone/oracle.hpp"
#include "lightcone/potential.hpp"
#include "lightcone/propagator.hpp"
#include "lightcone/wavefunction.hpp"

using namespace lightcone;

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_s(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

geom::Vec vec1(double x) { return geom::make_vec(std::array<double, 1>{x}); }

geom::Region interval(double lo, double hi) {
  geom::Region r;
  r.components.push_back(geom::ConvexRegion{{geom::AxisBox{vec1(lo), vec1(hi)}}});
  return r;
}

std::vector<double> quarter_times() {
  std::vector<double> t;
  for (int k = 0; k < 8; ++k) t.push_back(0.25 * k);
  return t;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// disjoint-window norm bound for a 1d box pair, shared by criteria 1-3
Outcome window_bound(double mass, double speed, const PotentialSpec& potential, double limit_s,
                     bool check_admissibility) {
  auto t0 = clock_type::now();
  BoundExperiment e;
  e.grid = make_grid(1, 4096, 64.0);
  e.mass = mass;
  e.speed = speed;
  e.potential = potential;
  e.region_x = interval(-1.0, 1.0);
  e.region_y = interval(3.0, 8.0);
  e.times = quarter_times();
  e.dt = 1e-3;
  e.check_admissibility = false;

  std::string adm_note;
  if (check_admissibility) {
    AdmissibilityReport adm = admissibility_report(potential, e.grid, e.times.back(), 5,
                                                   Decomposition::FormBounded);
    if (adm.status != AdmissibilityStatus::Pass || !(adm.sup_klmn < 1.0))
      return {false, fmt("potential failed admissibility, klmn %.6f", adm.sup_klmn)};
    adm_note = fmt(", klmn %.3f", adm.sup_klmn);
  }

  BoundReport r = state_norm_bound_check(e);
  const double s = mass * speed * speed;
  double worst = -1e300;
  bool ok = std::abs(r.dist - 2.0) < 1e-9 && r.all_pass;
  for (const BoundSample& sm : r.samples) {
    double bound = std::exp(s * (speed * sm.t - 2.0));
    if (!(sm.measured <= bound * (1.0 + 1e-6))) ok = false;
    if (bound > 0.0) worst = std::max(worst, sm.measured / bound);
  }
  double dt_s = elapsed_s(t0);
  if (dt_s >= limit_s) ok = false;
  return {ok, fmt("max measured/bound %.3e over t in [0, 1.75]%s, %.1f s (limit %.0f s)", worst,
                  adm_note.c_str(), dt_s, limit_s)};
}

Outcome criterion1() { return window_bound(1.0, 1.0, {ZeroPotential{}}, 60.0, false); }

Outcome criterion2() {
  return window_bound(1.0, 1.0, {StaticBump{0.5, vec1(0.0), 1.0}}, 90.0, true);
}

Outcome criterion3() { return window_bound(2.0, 0.5, {ZeroPotential{}}, 600.0, false); }

Outcome criterion4() {
  BoundExperiment e;
  e.grid = make_grid(1, 512, 16.0);
  e.region_x = interval(-1.0, 1.0);
  e.region_y = interval(5.0, 7.0);
  e.state.width = 0.4;
  e.times = {0.25, 0.5, 1.0};
  e.dt = 1e-3;
  e.check_admissibility = false;

  bool ok = true;
  double worst = 0.0;
  for (const PotentialSpec& pot :
       {PotentialSpec{ZeroPotential{}}, PotentialSpec{StaticBump{0.5, vec1(0.0), 1.0}}}) {
    e.potential = pot;
    ConjugatedReport r = conjugated_norm_check(e);
    for (const ConjugatedSample& sm : r.samples) {
      if (!(sm.ratio <= std::exp(sm.t_final) * (1.0 + 1e-3))) ok = false;
      worst = std::max(worst, sm.ratio / std::exp(sm.t_final));
    }
  }
  return {ok, fmt("max ratio/e^T %.4f across T in {0.25, 0.5, 1} for zero and bump potentials", worst)};
}

Outcome criterion5() {
  GridPtr g = make_grid(1, 256, 32.0);
  WaveFunction psi0 = masked_bump_state(g, interval(-1.0, 1.0), StateSpec{{}, 0.25});
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 10.0;
  cfg.snapshot_every = 500;
  Trajectory tr = evolve(psi0, cfg, {StaticBump{0.5, vec1(0.0), 2.0}});
  double worst = 0.0;
  for (double d : tr.norm_drift) worst = std::max(worst, d);
  bool ok = worst <= 1e-10 && tr.snapshots.size() == 21 &&
            std::abs(tr.snapshots.back().t - 10.0) < 1e-12;
  return {ok, fmt("max norm drift %.2e over 10000 strang steps (tolerance 1e-10)", worst)};
}

Outcome criterion6() {
  GridPtr g = make_grid(1, 64, 16.0);
  PotentialSpec pot{StaticBump{0.5, vec1(0.0), 1.0}};
  WaveFunction psi0 = WaveFunction::zero(g);
  for (std::size_t j = 0; j < g->total(); ++j) {
    double x = g->coord(0, int(j));
    psi0.values[j] = std::exp(-0.5 * x * x);
  }
  normalize(psi0);
  WaveFunction exact = dense_oracle_evolve(psi0, pot, 1.0, 1, 1.0, 1.0);

  auto split_error = [&](double dt) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 1.0;
    Trajectory tr = evolve(psi0, cfg, pot);
    const WaveFunction& got = tr.snapshots.back().psi;
    double acc = 0.0;
    for (std::size_t j = 0; j < got.values.size(); ++j)
      acc += std::norm(got.values[j] - exact.values[j]);
    return std::sqrt(acc * g->cell_volume());
  };
  double e1 = split_error(1e-3);
  double e2 = split_error(2e-3);
  double e4 = split_error(4e-3);
  bool ok = e1 <= 1e-6;
  for (double ratio : {e4 / e2, e2 / e1})
    if (!(ratio >= 3.5 && ratio <= 4.5)) ok = false;
  return {ok, fmt("split vs dense oracle %.2e at dt 1e-3 (tol 1e-6), halving ratios %.2f, %.2f",
                  e1, e4 / e2, e2 / e1)};
}

Outcome criterion7() {
  GridPtr g = make_grid(2, 32, 8.0);
  SymbolAuditReport r = g0_and_symbol_audit(g, 100, 2024);
  bool ok = r.pass && r.max_im_abs <= 1.0 + 1e-12 && r.max_form_discrepancy <= 1e-12 &&
            r.comparisons >= 100000;
  return {ok, fmt("max |Im f| %.15f (cap 1+1e-12), closed forms agree to %.1e on %zu points",
                  r.max_im_abs, r.max_form_discrepancy, r.comparisons)};
}

Outcome criterion8() {
  GridPtr g = make_grid(1, 64, 16.0);
  const int n = int(g->total());
  std::vector<double> field(g->total());
  evaluate_potential({StaticBump{0.5, vec1(0.0), 1.0}}, *g, 0.0, field);
  double iterative = klmn_norm(field, g);

  Eigen::MatrixXcd f(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      f(k, j) = std::exp(cplx(0.0, -2.0 * M_PI * double(k) * double(j) / double(n)));
  Eigen::VectorXd half(n);
  for (int k = 0; k < n; ++k) {
    double xi = g->freq(0)[k];
    half(k) = std::pow(1.0 + xi * xi, -0.25);
  }
  Eigen::MatrixXcd s = f.adjoint() * half.asDiagonal() * f / double(n);
  Eigen::VectorXd vd = Eigen::Map<const Eigen::VectorXd>(field.data(), n);
  Eigen::MatrixXcd svs = s * vd.asDiagonal() * s;
  double dense = Eigen::JacobiSVD<Eigen::MatrixXcd>(svs).singularValues()(0);

  bool ok = std::abs(iterative - dense) <= 0.01 * dense;

  std::vector<double> constant(g->total(), 10.0);
  double c10 = klmn_norm(constant, g);
  std::fill(constant.begin(), constant.end(), -3.0);
  double c3 = klmn_norm(constant, g);
  if (std::abs(c10 - 10.0) > 1e-6 || std::abs(c3 - 3.0) > 1e-6) ok = false;
  return {ok, fmt("bump klmn %.6f vs dense svd %.6f, constants 10 -> %.8f, -3 -> %.8f",
                  iterative, dense, c10, c3)};
}

// uniform point of the primitive; balls reject from their bounding cube,
// halfspaces from a window pushed inside around the witness
bool sample_inside(const geom::Primitive& p, const geom::Vec& witness, std::mt19937_64& rng,
                   geom::Vec& out) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (const geom::AxisBox* b = std::get_if<geom::AxisBox>(&p)) {
    out = b->lo;
    for (int a = 0; a < out.dim; ++a) out.v[a] = b->lo.v[a] + u01(rng) * (b->hi.v[a] - b->lo.v[a]);
    return true;
  }
  for (int tries = 0; tries < 10000; ++tries) {
    out = witness;
    if (const geom::Ball* b = std::get_if<geom::Ball>(&p)) {
      out = b->center;
      for (int a = 0; a < out.dim; ++a) out.v[a] += b->radius * (2.0 * u01(rng) - 1.0);
    } else {
      for (int a = 0; a < out.dim; ++a) out.v[a] += 4.0 * (2.0 * u01(rng) - 1.0);
    }
    if (geom::contains(p, out)) return true;
  }
  return false;
}

geom::Primitive random_primitive(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> w(0.3, 2.0);
  switch (rng() % 3) {
    case 0: {
      geom::Ball b;
      b.center.dim = dim;
      for (int a = 0; a < dim; ++a) b.center.v[a] = u(rng);
      b.radius = w(rng);
      return b;
    }
    case 1: {
      geom::AxisBox b;
      b.lo.dim = b.hi.dim = dim;
      for (int a = 0; a < dim; ++a) {
        double c = u(rng), h = w(rng);
        b.lo.v[a] = c - h;
        b.hi.v[a] = c + h;
      }
      return b;
    }
    default: {
      std::vector<double> nrm(dim);
      double len = 0.0;
      while (len < 1e-3) {
        len = 0.0;
        for (int a = 0; a < dim; ++a) {
          nrm[a] = u(rng);
          len += nrm[a] * nrm[a];
        }
        len = std::sqrt(len);
      }
      return geom::make_halfspace(nrm, u(rng));
    }
  }
}

geom::Vec witness_point(const geom::Primitive& p) {
  if (const geom::Ball* b = std::get_if<geom::Ball>(&p)) return b->center;
  if (const geom::AxisBox* b = std::get_if<geom::AxisBox>(&p)) return 0.5 * (b->lo + b->hi);
  const geom::HalfSpace& h = std::get<geom::HalfSpace>(p);
  geom::Vec x = h.normal;
  for (int a = 0; a < x.dim; ++a) x.v[a] *= h.offset - 1.0;
  return x;
}

Outcome criterion9() {
  std::mt19937_64 rng(7);
  int kept = 0, attempts = 0;
  double worst_a = 1e300, worst_b = -1e300;  // min l - d/2 on A, max l + d/2 on B
  while (kept < 20) {
    if (++attempts > 2000) return {false, "could not find 20 separated primitive pairs"};
    int dim = 1 + int(rng() % 3);
    geom::ConvexRegion a{{random_primitive(dim, rng)}};
    geom::ConvexRegion b{{random_primitive(dim, rng)}};
    geom::SeparatingFunctional ell;
    try {
      if (!(geom::distance(a, b).dist > 0.05)) continue;
      ell = geom::separating_functional(a, b);
    } catch (const GeometryError&) {
      continue;
    }
    ++kept;
    geom::Vec wa = witness_point(a.parts[0]), wb = witness_point(b.parts[0]);
    for (int k = 0; k < 10000; ++k) {
      geom::Vec x;
      if (!sample_inside(a.parts[0], wa, rng, x)) return {false, "sampler starved on A"};
      worst_a = std::min(worst_a, ell(x) - 0.5 * ell.dist);
      if (!sample_inside(b.parts[0], wb, rng, x)) return {false, "sampler starved on B"};
      worst_b = std::max(worst_b, ell(x) + 0.5 * ell.dist);
    }
  }
  bool ok = worst_a >= -1e-8 && worst_b <= 1e-8;
  return {ok, fmt("20 pairs, 10^4 samples each: min_A l - d/2 = %.1e, max_B l + d/2 = %.1e "
                  "(tolerance 1e-8)", worst_a, worst_b)};
}

Outcome criterion10() {
  double value = geom::tiling_constant(3.0, 1.0, 1);
  double closed = 2.0 * std::exp(-1.0) / (1.0 - std::exp(-1.0));
  bool ok = std::abs(value - closed) <= 1e-10 * closed;

  BoundExperiment e;
  e.grid = make_grid(1, 1024, 64.0);
  e.region_x.components.push_back(geom::ConvexRegion{{geom::Ball{vec1(-2.0), 1.0}}});
  e.region_x.components.push_back(geom::ConvexRegion{{geom::Ball{vec1(2.0), 1.0}}});
  e.region_y = interval(9.0, 14.0);
  e.state.center = vec1(2.0);
  e.times = {0.25, 0.5};
  e.dt = 1e-3;
  e.check_admissibility = false;
  BoundReport r = nonconvex_bound_check(e, 0.5);
  double worst = 0.0;
  for (const BoundSample& sm : r.samples) {
    double bound = std::exp(sm.t) * r.tiling_constant_value;
    if (!(sm.measured <= bound * (1.0 + 1e-6))) ok = false;
    worst = std::max(worst, sm.measured / bound);
  }
  if (!r.all_pass) ok = false;
  return {ok, fmt("constant %.12f vs closed form %.12f; union leakage/bound max %.3e", value,
                  closed, worst)};
}

Outcome criterion11() {
  auto t0 = clock_type::now();
  GridPtr g = make_grid(1, 8192, 512.0);
  SharpnessParams p;
  for (int k = 1; k <= 8; ++k) p.times.push_back(25.0 * k);
  SharpnessReport r = sharpness_run(g, p);

  bool ok = r.fitted_c_finite && r.fitted_c > 0.0;
  // regression pins from the first derivation sweep at this exact size
  if (!(r.fitted_c >= 25.0 && r.fitted_c <= 55.0)) ok = false;
  if (!(r.R >= 6.0 && r.R <= 12.0)) ok = false;
  if (!(r.measured.back() >= 0.7)) ok = false;
  bool crossed = !r.crossings.empty() && r.crossings[0].found &&
                 r.crossings[0].measured > r.crossings[0].curve;
  if (!crossed) ok = false;
  double dt_s = elapsed_s(t0);
  if (dt_s >= 300.0) ok = false;
  std::string cross = crossed ? fmt("measured %.3f > %.2e at t %.0f for speed 0.5",
                                    r.crossings[0].measured, r.crossings[0].curve, r.crossings[0].t)
                              : std::string("no crossing found");
  return {ok, fmt("C %.2f (pin [25, 55]), R %.3f (pin [6, 12]), measured(200) %.4f >= 0.7; %s; "
                  "%.1f s (limit 300 s)", r.fitted_c, r.R, r.measured.back(), cross.c_str(), dt_s)};
}

Outcome criterion12() {
  BoundExperiment e;
  e.grid = make_grid(1, 256, 32.0);
  e.potential = {ZeroPotential{}};
  e.region_x = interval(-1.0, 1.0);
  e.region_y = interval(-1.0, 1.0);
  e.dt = 1e-3;
  OperatorNormResult unit = operator_norm_estimate(e, 0.0);
  bool ok = unit.converged && std::abs(unit.value - 1.0) <= 1e-6;

  BoundExperiment d;
  d.grid = make_grid(1, 64, 16.0);
  d.potential = {StaticBump{0.5, vec1(0.0), 1.0}};
  d.region_x = interval(-2.0, -0.5);
  d.region_y = interval(0.5, 2.0);
  d.dt = 1e-3;
  const double t = 0.5;
  OperatorNormResult est = operator_norm_estimate(d, t);
  Eigen::MatrixXcd u = dense_propagator(*d.grid, d.potential, t, 500, 1.0, 1.0);
  std::vector<std::uint8_t> mx = geom::indicator_mask(d.region_x, *d.grid);
  std::vector<std::uint8_t> my = geom::indicator_mask(d.region_y, *d.grid);
  double dense = dense_masked_norm(u, mx, my);
  if (!(est.converged && std::abs(est.value - dense) <= 1e-4)) ok = false;
  return {ok, fmt("overlap estimate %.8f (target 1 +- 1e-6); masked norm %.6f vs dense %.6f "
                  "(tol 1e-4)", unit.value, est.value, dense)};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> criteria = {
      {1, "free-particle window bound", criterion1},
      {2, "window bound with an admissible bump", criterion2},
      {3, "window bound under mass/speed rescaling", criterion3},
      {4, "conjugated norm growth rate", criterion4},
      {5, "long-run unitarity", criterion5},
      {6, "dense-oracle agreement and splitting order", criterion6},
      {7, "symbol imaginary-part cap and closed forms", criterion7},
      {8, "form-norm estimator vs dense svd and constants", criterion8},
      {9, "separating functional on random primitive pairs", criterion9},
      {10, "tiling constant and assembled union bound", criterion10},
      {11, "front propagation at the maximal speed", criterion11},
      {12, "masked propagator operator norm", criterion12},
  };

  int failures = 0;
  for (const Entry& c : criteria) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/12 criteria passed\n", 12 - failures);
  return failures;
}
