#include "lightcone/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lightcone/errors.hpp"
#include "lightcone/kernels.hpp"
#include "lightcone/symbols.hpp"

namespace lightcone {

namespace {

double now_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_times(const std::vector<double>& times, double dt) {
  if (times.empty()) throw std::invalid_argument("times: empty");
  if (!(dt > 0.0)) throw std::invalid_argument("times: dt must be positive");
  double prev = -1.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0)
      throw std::invalid_argument("times: entries must be finite and nonnegative");
    if (t < prev) throw std::invalid_argument("times: entries must be nondecreasing");
    prev = t;
    double steps = t / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw std::invalid_argument("times: every entry must be an integer multiple of dt");
  }
}

geom::Vec region_center(const geom::Region& region, int dim) {
  auto box = geom::bounding_box(region);
  geom::Vec c;
  c.dim = dim;
  if (box) {
    for (int a = 0; a < dim; ++a) c.v[a] = 0.5 * (box->lo[a] + box->hi[a]);
  }
  return c;
}

// Fraction of spectral mass carried by modes with some |xi_a| above 2/3 of
// that axis's Nyquist frequency.
double spectral_tail_fraction(const WaveFunction& psi) {
  const Grid& g = *psi.grid;
  std::vector<cplx> hat(psi.values.size());
  g.fft().forward(psi.values, hat);
  std::array<double, max_dim> cut{};
  for (int a = 0; a < g.dim(); ++a) {
    double nyq = M_PI * static_cast<double>(g.points(a)) / g.length(a);
    cut[a] = (2.0 / 3.0) * nyq;
  }
  double total = 0.0, tail = 0.0;
  std::array<int, max_dim> idx{};
  for (std::size_t i = 0; i < hat.size(); ++i) {
    g.unflatten(i, idx);
    double p = std::norm(hat[i]);
    total += p;
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(g.freq(a)[idx[a]]) > cut[a]) {
        tail += p;
        break;
      }
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

// Shared stepping loop: evolve psi in place with per-step drift checks,
// visiting the state at each requested time (nondecreasing multiples of dt).
void evolve_visiting(const BoundExperiment& exp, WaveFunction& psi,
                     const std::function<void(std::size_t, const WaveFunction&)>& visit) {
  StrangWorkspace ws(exp.grid, exp.dt, exp.mass, exp.speed, exp.potential);
  const double norm0 = l2_norm(psi);
  if (!(norm0 > 0.0)) throw std::invalid_argument("evolve_visiting: zero initial state");
  long step = 0;
  for (std::size_t j = 0; j < exp.times.size(); ++j) {
    const long target = std::lround(exp.times[j] / exp.dt);
    while (step < target) {
      ws.step(psi.values, static_cast<double>(step) * exp.dt);
      ++step;
      double drift = std::abs(l2_norm(psi) - norm0) / norm0;
      if (drift > 1e-8)
        throw NumericalError("evolution: norm drift " + std::to_string(drift) + " at t = " +
                             std::to_string(static_cast<double>(step) * exp.dt));
    }
    visit(j, psi);
  }
}

double masked_norm(const WaveFunction& psi, std::span<const std::uint8_t> mask) {
  return std::sqrt(psi.grid->cell_volume() * kernels::sum_abs2_masked(psi.values, mask));
}

void require_dim(const geom::Region& region, int dim, const char* name) {
  int rd = geom::region_dim(region);
  if (rd != dim) {
    std::ostringstream os;
    os << name << ": region dimension " << rd << " does not match grid dimension " << dim;
    throw std::invalid_argument(os.str());
  }
  geom::validate(region, dim);
}

std::string admissibility_warning(const BoundExperiment& exp, double t_max) {
  int samples = is_static(exp.potential) ? 1 : 17;
  try {
    AdmissibilityReport rep =
        admissibility_report(exp.potential, exp.grid, t_max, samples, Decomposition::FormBounded);
    if (rep.status == AdmissibilityStatus::Pass) return {};
    std::ostringstream os;
    os << "admissibility "
       << (rep.status == AdmissibilityStatus::Inconclusive ? "inconclusive" : "fail")
       << ": sup form-norm estimate " << rep.sup_klmn;
    return os.str();
  } catch (const std::exception& e) {
    return std::string("admissibility check failed to run: ") + e.what();
  }
}

}  // namespace

WaveFunction masked_bump_state(GridPtr g, const geom::Region& region, const StateSpec& spec,
                               double* tail_fraction) {
  require_dim(region, g->dim(), "masked_bump_state");
  if (!(spec.width > 0.0) || !std::isfinite(spec.width))
    throw std::invalid_argument("masked_bump_state: width must be positive");
  geom::Vec center = spec.center;
  if (center.dim == 0) center = region_center(region, g->dim());
  if (center.dim != g->dim())
    throw std::invalid_argument("masked_bump_state: center dimension does not match grid");

  WaveFunction psi = WaveFunction::zero(g);
  const double inv2w2 = 1.0 / (2.0 * spec.width * spec.width);
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(g->total());
#pragma omp parallel for if (total >= 4096)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    std::array<int, max_dim> idx{};
    g->unflatten(static_cast<std::size_t>(i), idx);
    double q = 0.0;
    for (int a = 0; a < g->dim(); ++a) {
      double d = g->coord(a, idx[a]) - center[a];
      q += d * d;
    }
    psi.values[static_cast<std::size_t>(i)] = std::exp(-q * inv2w2);
  }
  std::vector<std::uint8_t> mask = geom::indicator_mask(region, *g);
  kernels::apply_mask(psi.values, psi.values, mask);
  if (!(l2_norm(psi) > 0.0))
    throw std::invalid_argument("masked_bump_state: state vanishes on the region (no grid cell hit)");
  normalize(psi);
  if (tail_fraction) *tail_fraction = spectral_tail_fraction(psi);
  return psi;
}

BoundReport state_norm_bound_check(const BoundExperiment& exp) {
  auto t0 = std::chrono::steady_clock::now();
  const Grid& g = *exp.grid;
  require_dim(exp.region_x, g.dim(), "state_norm_bound_check X");
  require_dim(exp.region_y, g.dim(), "state_norm_bound_check Y");
  check_times(exp.times, exp.dt);

  BoundReport report;
  report.mode = "state-norm";
  report.mass = exp.mass;
  report.speed = exp.speed;
  geom::DistanceResult dr = geom::distance(exp.region_x, exp.region_y);
  report.dist = dr.dist;
  if (exp.region_x.components.size() == 1 && exp.region_y.components.size() == 1 && dr.dist > 0.0) {
    try {
      report.functional =
          geom::separating_functional(exp.region_x.components[0], exp.region_y.components[0]);
    } catch (const GeometryError&) {
      // touching regions admit no strict separator; leave empty
    }
  }

  WaveFunction psi = masked_bump_state(exp.grid, exp.region_x, exp.state, &report.state_tail_fraction);
  if (report.state_tail_fraction > 1e-4) {
    std::ostringstream os;
    os << "initial state keeps " << report.state_tail_fraction
       << " of its spectral mass above 2/3 Nyquist; refine the grid or widen the bump";
    report.warnings.push_back(os.str());
  }
  if (exp.check_admissibility) {
    std::string w = admissibility_warning(exp, exp.times.back());
    if (!w.empty()) report.warnings.push_back(w);
  }

  EvolutionConfig margin_cfg;
  margin_cfg.dt = exp.dt;
  margin_cfg.t_final = exp.times.back();
  margin_cfg.mass = exp.mass;
  margin_cfg.speed = exp.speed;
  margin_cfg.margin_extra = report.dist;
  std::string margin_detail;
  report.margin_ok = margin_satisfied(psi, margin_cfg, &margin_detail);
  if (!report.margin_ok)
    report.warnings.push_back("box margin violated, wrap-around can contaminate tails: " + margin_detail);

  std::vector<std::uint8_t> mask_y = geom::indicator_mask(exp.region_y, g);
  const double s = exp.mass * exp.speed * exp.speed;
  report.samples.resize(exp.times.size());
  evolve_visiting(exp, psi, [&](std::size_t j, const WaveFunction& state) {
    BoundSample& sm = report.samples[j];
    sm.t = exp.times[j];
    sm.measured = masked_norm(state, mask_y);
    sm.bound_raw = std::exp(s * (exp.speed * sm.t - report.dist));
    sm.bound = std::min(1.0, sm.bound_raw);
    sm.vacuous = sm.bound_raw >= 1.0;
    sm.margin = sm.bound - sm.measured;
    sm.pass = sm.measured <= sm.bound * (1.0 + exp.tolerance);
  });
  for (const BoundSample& sm : report.samples) report.all_pass = report.all_pass && sm.pass;
  report.runtime_seconds = now_seconds(t0);
  return report;
}

OperatorNormResult operator_norm_estimate(const BoundExperiment& exp, double t) {
  const Grid& g = *exp.grid;
  require_dim(exp.region_x, g.dim(), "operator_norm_estimate X");
  require_dim(exp.region_y, g.dim(), "operator_norm_estimate Y");
  {
    double steps = t / exp.dt;
    if (t < 0.0 || std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw std::invalid_argument("operator_norm_estimate: t must be a nonnegative multiple of dt");
  }
  const long steps = std::lround(t / exp.dt);
  StrangWorkspace ws(exp.grid, exp.dt, exp.mass, exp.speed, exp.potential);

  std::vector<std::uint8_t> mask_x = geom::indicator_mask(exp.region_x, g);
  std::vector<std::uint8_t> mask_y = geom::indicator_mask(exp.region_y, g);
  const std::size_t total = g.total();

  auto apply_forward = [&](std::vector<cplx>& v) {
    kernels::apply_mask(v, v, mask_x);
    for (long k = 0; k < steps; ++k) ws.step(v, static_cast<double>(k) * exp.dt);
    kernels::apply_mask(v, v, mask_y);
  };
  auto apply_adjoint = [&](std::vector<cplx>& v) {
    kernels::apply_mask(v, v, mask_y);
    for (long k = steps - 1; k >= 0; --k) ws.step_inverse(v, static_cast<double>(k) * exp.dt);
    kernels::apply_mask(v, v, mask_x);
  };

  std::mt19937_64 rng(exp.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> v(total);
  for (auto& z : v) z = cplx(gauss(rng), gauss(rng));
  kernels::apply_mask(v, v, mask_x);
  double nv = std::sqrt(kernels::sum_abs2(v));
  if (!(nv > 0.0)) return {0.0, 0, true};  // X misses every grid cell
  kernels::scale(v, 1.0 / nv);

  OperatorNormResult result;
  double prev = -1.0;
  const int max_iter = 2000;
  std::vector<cplx> w(total);
  for (int it = 1; it <= max_iter; ++it) {
    w.assign(v.begin(), v.end());
    apply_forward(w);
    double sigma = std::sqrt(kernels::sum_abs2(w));
    result.value = sigma;
    result.iterations = it;
    if (sigma <= 1e-300) {
      result.converged = true;  // the masked propagator annihilates the iterate
      result.value = 0.0;
      return result;
    }
    apply_adjoint(w);
    double nw = std::sqrt(kernels::sum_abs2(w));
    if (!(nw > 0.0)) {
      result.converged = true;
      return result;
    }
    kernels::scale(w, 1.0 / nw);
    v.swap(w);
    if (prev >= 0.0 && std::abs(sigma - prev) <= 1e-8 * std::max(sigma, 1e-300)) {
      result.converged = true;
      return result;
    }
    prev = sigma;
  }
  throw NumericalError("operator_norm_estimate: power iteration did not converge in 2000 sweeps");
}

BoundReport operator_norm_bound_check(const BoundExperiment& exp) {
  auto t0 = std::chrono::steady_clock::now();
  check_times(exp.times, exp.dt);
  BoundReport report;
  report.mode = "operator-norm";
  report.mass = exp.mass;
  report.speed = exp.speed;
  report.dist = geom::distance(exp.region_x, exp.region_y).dist;
  if (exp.check_admissibility) {
    std::string w = admissibility_warning(exp, exp.times.back());
    if (!w.empty()) report.warnings.push_back(w);
  }
  const double s = exp.mass * exp.speed * exp.speed;
  report.samples.resize(exp.times.size());
  for (std::size_t j = 0; j < exp.times.size(); ++j) {
    BoundSample& sm = report.samples[j];
    sm.t = exp.times[j];
    OperatorNormResult est = operator_norm_estimate(exp, sm.t);
    sm.measured = est.value;
    if (!est.converged)
      report.warnings.push_back("operator norm at t = " + std::to_string(sm.t) + " did not converge");
    sm.bound_raw = std::exp(s * (exp.speed * sm.t - report.dist));
    sm.bound = std::min(1.0, sm.bound_raw);
    sm.vacuous = sm.bound_raw >= 1.0;
    sm.margin = sm.bound - sm.measured;
    sm.pass = sm.measured <= sm.bound * (1.0 + exp.tolerance);
    report.all_pass = report.all_pass && sm.pass;
  }
  report.runtime_seconds = now_seconds(t0);
  return report;
}

ConjugatedReport conjugated_norm_check(const BoundExperiment& exp) {
  auto t0 = std::chrono::steady_clock::now();
  const Grid& g = *exp.grid;
  require_dim(exp.region_x, g.dim(), "conjugated_norm_check X");
  require_dim(exp.region_y, g.dim(), "conjugated_norm_check Y");
  if (exp.region_x.components.size() != 1 || exp.region_y.components.size() != 1)
    throw std::invalid_argument(
        "conjugated_norm_check: X and Y must each be a single convex component");
  check_times(exp.times, exp.dt);

  ConjugatedReport report;
  report.dist = geom::distance(exp.region_x.components[0], exp.region_y.components[0]).dist;
  report.functional =
      geom::separating_functional(exp.region_x.components[0], exp.region_y.components[0]);

  WaveFunction psi0 = masked_bump_state(exp.grid, exp.region_x, exp.state, nullptr);
  const double s = exp.mass * exp.speed * exp.speed;

  // mask-side factors of the three-factor decomposition
  std::vector<std::uint8_t> mask_x = geom::indicator_mask(exp.region_x, g);
  std::vector<std::uint8_t> mask_y = geom::indicator_mask(exp.region_y, g);
  double max_x = 0.0, max_y = 0.0;  // max e^{-s l} on X, max e^{+s l} on Y
  {
    std::array<int, max_dim> idx{};
    geom::Vec x;
    x.dim = g.dim();
    for (std::size_t i = 0; i < g.total(); ++i) {
      g.unflatten(i, idx);
      for (int a = 0; a < g.dim(); ++a) x.v[a] = g.coord(a, idx[a]);
      double l = report.functional(x);
      if (mask_x[i]) max_x = std::max(max_x, std::exp(-s * l));
      if (mask_y[i]) max_y = std::max(max_y, std::exp(s * l));
    }
  }

  for (double T : exp.times) {
    EvolutionConfig cfg;
    cfg.dt = exp.dt;
    cfg.t_final = T;
    cfg.mass = exp.mass;
    cfg.speed = exp.speed;
    ConjugatedResult cr = conjugated_evolve(psi0, report.functional, cfg, exp.potential);
    report.weight_scale = cr.weight_scale;
    for (const std::string& w : cr.warnings) report.warnings.push_back(w);
    ConjugatedSample sm;
    sm.t_final = T;
    sm.ratio = cr.ratio;
    sm.bound = std::exp(s * exp.speed * T);
    sm.pass = cr.ratio <= sm.bound * (1.0 + 1e-3);
    sm.mask_factor_x = max_x;
    sm.mask_factor_y = max_y;
    sm.factored_bound = max_y * cr.ratio * max_x;
    sm.direct_bound = std::exp(s * (exp.speed * T - report.dist));
    report.all_pass = report.all_pass && sm.pass;
    report.samples.push_back(sm);
  }
  report.runtime_seconds = now_seconds(t0);
  return report;
}

SymbolAuditReport g0_and_symbol_audit(GridPtr g, int directions, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  if (directions < 1) throw std::invalid_argument("g0_and_symbol_audit: directions must be >= 1");
  SymbolAuditReport report;
  report.directions = directions;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = g->dim();
  const std::size_t total = g->total();

  std::vector<cplx> last_plus(total);
  for (int d = 0; d < directions; ++d) {
    std::array<double, max_dim> n{};
    double nn = 0.0;
    do {
      nn = 0.0;
      for (int a = 0; a < dim; ++a) {
        n[a] = gauss(rng);
        nn += n[a] * n[a];
      }
    } while (nn < 1e-12);
    nn = std::sqrt(nn);
    for (int a = 0; a < dim; ++a) n[a] /= nn;

    for (int sign : {+1, -1}) {
      MultiplierSymbol f = f_pm_symbol(g, std::span<const double>(n.data(), dim), sign);
      std::array<int, max_dim> idx{};
      for (std::size_t i = 0; i < total; ++i) {
        double im = f.values[i].imag();
        report.max_im_abs = std::max(report.max_im_abs, std::abs(im));
        g->unflatten(i, idx);
        double q = 0.0, ndot = 0.0;
        for (int a = 0; a < dim; ++a) {
          double xi = g->freq(a)[idx[a]];
          q += xi * xi;
          ndot += n[a] * xi;
        }
        // quotient closed form for |Im sqrt(|xi|^2 + 2 i sign n.xi)|
        double quotient = 0.0;
        if (ndot != 0.0) {
          double r = std::sqrt(q * q + 4.0 * ndot * ndot);
          quotient = std::sqrt(2.0) * std::abs(ndot) / std::sqrt(r + q);
        }
        // principal root straight from the library, independent of im_sqrt
        cplx root = std::sqrt(cplx(q, 2.0 * sign * ndot));
        report.max_form_discrepancy =
            std::max(report.max_form_discrepancy, std::abs(std::abs(root.imag()) - quotient));
        report.max_form_discrepancy =
            std::max(report.max_form_discrepancy, std::abs(std::abs(im) - quotient));
        ++report.comparisons;
      }
      if (d == directions - 1 && sign == +1) last_plus = f.values;
    }
  }

  // G0 = Im f_+ for the last direction is diagonal in frequency, so its
  // multiplier norm equals the largest |symbol| and is attained on the
  // corresponding pure mode.
  std::size_t peak = 0;
  double peak_val = -1.0;
  MultiplierSymbol g0{g, std::vector<cplx>(total)};
  for (std::size_t i = 0; i < total; ++i) {
    g0.values[i] = cplx(last_plus[i].imag(), 0.0);
    if (std::abs(g0.values[i].real()) > peak_val) {
      peak_val = std::abs(g0.values[i].real());
      peak = i;
    }
  }
  report.g0_norm = peak_val;

  WaveFunction mode = WaveFunction::zero(g);
  {
    std::array<int, max_dim> idx{};
    g->unflatten(peak, idx);
    std::array<double, max_dim> xi{};
    for (int a = 0; a < dim; ++a) xi[a] = g->freq(a)[idx[a]];
    std::array<int, max_dim> pos{};
    for (std::size_t i = 0; i < total; ++i) {
      g->unflatten(i, pos);
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += xi[a] * g->coord(a, pos[a]);
      mode.values[i] = std::exp(cplx(0.0, phase));
    }
    normalize(mode);
  }
  WaveFunction image = apply_multiplier(mode, g0);
  report.g0_mode_ratio = l2_norm(image) / l2_norm(mode);

  // random states never grow faster than the peak symbol
  double worst_growth = 0.0;
  for (int k = 0; k < 4; ++k) {
    WaveFunction psi = WaveFunction::zero(g);
    for (auto& z : psi.values) z = cplx(gauss(rng), gauss(rng));
    normalize(psi);
    WaveFunction out = apply_multiplier(psi, g0);
    worst_growth = std::max(worst_growth, l2_norm(out));
  }

  report.pass = report.max_im_abs <= 1.0 + 1e-12 && report.max_form_discrepancy <= 1e-12 &&
                std::abs(report.g0_mode_ratio - report.g0_norm) <= 1e-10 &&
                worst_growth <= report.g0_norm * (1.0 + 1e-10);
  report.runtime_seconds = now_seconds(t0);
  return report;
}

SharpnessState sharpness_state(GridPtr g, double delta, double eps, double seed_width) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("sharpness_state: delta must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("sharpness_state: eps must lie in (0, 1)");
  if (!(seed_width > 0.0)) throw std::invalid_argument("sharpness_state: seed width must be positive");

  const double theta = 0.5 * (1.0 + delta);  // shell threshold for xi_1/<xi>
  const double xi_cut = theta / std::sqrt(1.0 - theta * theta);
  const double xi0 = xi_cut + 6.0 / seed_width;  // carrier well inside the shell

  SharpnessState out;
  out.modulation = xi0;
  out.phi = WaveFunction::zero(g);
  const std::size_t total = g->total();
  const double inv2w2 = 1.0 / (2.0 * seed_width * seed_width);
  {
    std::array<int, max_dim> idx{};
    for (std::size_t i = 0; i < total; ++i) {
      g->unflatten(i, idx);
      double q = 0.0;
      for (int a = 0; a < g->dim(); ++a) {
        double x = g->coord(a, idx[a]);
        q += x * x;
      }
      double x1 = g->coord(0, idx[0]);
      out.phi.values[i] = std::exp(-q * inv2w2) * std::exp(cplx(0.0, xi0 * x1));
    }
  }
  double seed_norm = l2_norm(out.phi);

  // project onto the spectral shell
  g->fft().forward(out.phi.values, out.phi.values);
  std::size_t kept = 0;
  {
    std::array<int, max_dim> idx{};
    for (std::size_t i = 0; i < total; ++i) {
      g->unflatten(i, idx);
      double q = 0.0;
      for (int a = 0; a < g->dim(); ++a) {
        double xi = g->freq(a)[idx[a]];
        q += xi * xi;
      }
      double xi1 = g->freq(0)[idx[0]];
      if (xi1 / std::sqrt(1.0 + q) > theta)
        ++kept;
      else
        out.phi.values[i] = cplx(0.0, 0.0);
    }
  }
  if (kept == 0)
    throw NumericalError("sharpness_state: the spectral shell misses every lattice mode; "
                         "refine the frequency lattice (larger box or more points)");
  g->fft().inverse(out.phi.values, out.phi.values);
  double proj_norm = l2_norm(out.phi);
  if (!(proj_norm > 0.0)) throw NumericalError("sharpness_state: projected state vanished");
  out.shell_mass = (proj_norm * proj_norm) / (seed_norm * seed_norm);
  normalize(out.phi);

  // smallest grid coordinate R with tail |1_{|x_1| >= R} phi| <= eps/2
  const int n1 = g->points(0);
  std::vector<double> mass_by_x1(static_cast<std::size_t>(n1), 0.0);
  {
    std::array<int, max_dim> idx{};
    for (std::size_t i = 0; i < total; ++i) {
      g->unflatten(i, idx);
      mass_by_x1[static_cast<std::size_t>(idx[0])] += std::norm(out.phi.values[i]) * g->cell_volume();
    }
  }
  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(n1));
  for (int j = 0; j < n1; ++j) candidates.push_back(std::abs(g->coord(0, j)));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const double budget = 0.25 * eps * eps;  // (eps/2)^2 in mass
  bool found = false;
  for (double r : candidates) {
    double tail = 0.0;
    for (int j = 0; j < n1; ++j)
      if (std::abs(g->coord(0, j)) >= r) tail += mass_by_x1[static_cast<std::size_t>(j)];
    if (tail <= budget) {
      out.R = r;
      found = true;
      break;
    }
  }
  if (!found)
    throw NumericalError("sharpness_state: no grid radius confines the eps/2 tail; enlarge the box");
  return out;
}

SharpnessReport sharpness_run(GridPtr g, const SharpnessParams& params) {
  auto t0 = std::chrono::steady_clock::now();
  if (params.times.empty()) throw std::invalid_argument("sharpness_run: no times given");
  for (double t : params.times)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("sharpness_run: times must be strictly positive");
  if (!std::is_sorted(params.times.begin(), params.times.end()))
    throw std::invalid_argument("sharpness_run: times must be sorted");
  if (!(params.mass > 0.0 && params.speed > 0.0))
    throw std::invalid_argument("sharpness_run: mass and speed must be positive");

  SharpnessReport report;
  report.delta = params.delta;
  report.eps = params.eps;
  SharpnessState st = sharpness_state(g, params.delta, params.eps, params.seed_width);
  report.R = st.R;
  report.shell_mass = st.shell_mass;

  const Grid& grid = *g;
  const std::size_t total = grid.total();
  const double c = params.speed;
  const double s = params.mass * c * c;

  // mass-based effective support for the wrap-around margin: the spectral
  // projection leaves slow spatial tails, so an amplitude cutoff would
  // always trip
  double margin_radius = 0.0;
  {
    const int n1 = grid.points(0);
    std::vector<double> mass_by_x1(static_cast<std::size_t>(n1), 0.0);
    std::array<int, max_dim> idx{};
    for (std::size_t i = 0; i < total; ++i) {
      grid.unflatten(i, idx);
      mass_by_x1[static_cast<std::size_t>(idx[0])] += std::norm(st.phi.values[i]) * grid.cell_volume();
    }
    std::vector<std::pair<double, double>> by_r;
    by_r.reserve(static_cast<std::size_t>(n1));
    for (int j = 0; j < n1; ++j)
      by_r.emplace_back(std::abs(grid.coord(0, j)), mass_by_x1[static_cast<std::size_t>(j)]);
    std::sort(by_r.begin(), by_r.end());
    double cum = 0.0;
    for (const auto& [r, m] : by_r) {
      cum += m;
      margin_radius = r;
      if (cum >= 1.0 - 1e-10) break;
    }
  }
  double reach = margin_radius + c * params.times.back() + 5.0 * grid.spacing(0);
  if (reach > 0.5 * grid.length(0)) {
    std::ostringstream os;
    os << "box margin violated for the largest time: reach " << reach << " exceeds half length "
       << 0.5 * grid.length(0);
    report.warnings.push_back(os.str());
  }

  // truncate to X = {x_1 <= R}; measured is |1_{Y_t} U_t 1_X phi|
  WaveFunction phi_x = st.phi;
  {
    std::array<int, max_dim> idx{};
    for (std::size_t i = 0; i < total; ++i) {
      grid.unflatten(i, idx);
      if (grid.coord(0, idx[0]) > st.R) phi_x.values[i] = cplx(0.0, 0.0);
    }
  }

  MultiplierSymbol omega = kinetic_symbol(g, params.mass, params.speed);
  std::vector<cplx> hat(total);
  grid.fft().forward(phi_x.values, hat);

  std::vector<cplx> evolved(total);
  std::array<int, max_dim> idx{};
  for (double t : params.times) {
    for (std::size_t i = 0; i < total; ++i)
      evolved[i] = hat[i] * std::exp(cplx(0.0, -t * omega.values[i].real()));
    grid.fft().inverse(evolved, evolved);
    const double front = st.R + params.delta * c * t;
    double m = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      grid.unflatten(i, idx);
      if (grid.coord(0, idx[0]) >= front) m += std::norm(evolved[i]);
    }
    report.times.push_back(t);
    report.measured.push_back(std::min(1.0, std::sqrt(grid.cell_volume() * m)));
    report.dist.push_back(params.delta * c * t);
  }

  // The demonstrated property is the lower bound measured(t) >= 1 - eps - C/t.
  // fitted_c is the smallest constant certifying it over the sweep,
  // max_t t (1 - eps - measured). The sharp cutoff at x_1 = R diffracts
  // ~C/t of lagging mass at moderate t; at large t the deficit can go
  // negative (the cut only removes (eps/2)^2 of mass, not eps), so a naive
  // least squares fit of the deficit would be pulled below zero.
  const std::size_t nt = report.times.size();
  const std::size_t half = nt / 2;
  report.floor_largest_half = 1.0;
  for (std::size_t j = half; j < nt; ++j)
    report.floor_largest_half = std::min(report.floor_largest_half, report.measured[j]);
  report.fitted_c = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nt; ++j)
    report.fitted_c =
        std::max(report.fitted_c, report.times[j] * (1.0 - params.eps - report.measured[j]));
  report.fitted_c_finite = std::isfinite(report.fitted_c);

  for (double cprime : params.comparison_speeds) {
    SharpnessCrossing cross;
    cross.speed = cprime;
    for (std::size_t j = 0; j < nt; ++j) {
      double t = report.times[j];
      double curve = std::exp(s * (cprime * t - report.dist[j]));
      if (report.measured[j] > curve) {
        cross.found = true;
        cross.t = t;
        cross.measured = report.measured[j];
        cross.curve = curve;
        break;
      }
    }
    report.crossings.push_back(cross);
  }
  report.runtime_seconds = now_seconds(t0);
  return report;
}

BoundReport nonconvex_bound_check(const BoundExperiment& exp, double edge) {
  auto t0 = std::chrono::steady_clock::now();
  const Grid& g = *exp.grid;
  require_dim(exp.region_x, g.dim(), "nonconvex_bound_check X");
  require_dim(exp.region_y, g.dim(), "nonconvex_bound_check Y");
  check_times(exp.times, exp.dt);
  if (!(edge > 0.0)) throw std::invalid_argument("nonconvex_bound_check: edge must be positive");

  BoundReport report;
  report.mode = "union";
  report.mass = exp.mass;
  report.speed = exp.speed;
  report.tiling_edge = edge;
  report.dist = geom::distance(exp.region_x, exp.region_y).dist;
  const int dim = g.dim();
  const double s = exp.mass * exp.speed * exp.speed;
  if (!(report.dist > edge * std::sqrt(static_cast<double>(dim))))
    throw std::invalid_argument(
        "nonconvex_bound_check: regions too close for the cube edge, need dist > edge*sqrt(d)");

  // constant of the cube-decomposition assembly, evaluated at the rate scale
  report.tiling_constant_value = geom::tiling_constant(s * report.dist, s * edge, dim);
  report.tiles_x = geom::cube_tiling(exp.region_x, edge).size();
  report.tiles_y = geom::cube_tiling(exp.region_y, edge).size();

  WaveFunction psi = masked_bump_state(exp.grid, exp.region_x, exp.state, &report.state_tail_fraction);
  if (exp.check_admissibility) {
    std::string w = admissibility_warning(exp, exp.times.back());
    if (!w.empty()) report.warnings.push_back(w);
  }
  EvolutionConfig margin_cfg;
  margin_cfg.dt = exp.dt;
  margin_cfg.t_final = exp.times.back();
  margin_cfg.mass = exp.mass;
  margin_cfg.speed = exp.speed;
  margin_cfg.margin_extra = report.dist;
  std::string margin_detail;
  report.margin_ok = margin_satisfied(psi, margin_cfg, &margin_detail);
  if (!report.margin_ok)
    report.warnings.push_back("box margin violated, wrap-around can contaminate tails: " + margin_detail);

  std::vector<std::uint8_t> mask_y = geom::indicator_mask(exp.region_y, g);
  report.samples.resize(exp.times.size());
  evolve_visiting(exp, psi, [&](std::size_t j, const WaveFunction& state) {
    BoundSample& sm = report.samples[j];
    sm.t = exp.times[j];
    sm.measured = masked_norm(state, mask_y);
    sm.bound_raw = std::exp(s * exp.speed * sm.t) * report.tiling_constant_value;
    sm.bound = std::min(1.0, sm.bound_raw);
    sm.vacuous = sm.bound_raw >= 1.0;
    sm.margin = sm.bound - sm.measured;
    sm.pass = sm.measured <= sm.bound * (1.0 + exp.tolerance);
  });
  for (const BoundSample& sm : report.samples) report.all_pass = report.all_pass && sm.pass;
  report.runtime_seconds = now_seconds(t0);
  return report;
}

ConeProfile light_cone_profile(const BoundExperiment& exp, double shell_width) {
  auto t0 = std::chrono::steady_clock::now();
  const Grid& g = *exp.grid;
  require_dim(exp.region_x, g.dim(), "light_cone_profile X");
  check_times(exp.times, exp.dt);
  if (!(shell_width > 0.0))
    throw std::invalid_argument("light_cone_profile: shell width must be positive");

  ConeProfile profile;
  profile.shell_width = shell_width;

  // distance from each cell center to X, 0 inside
  const std::size_t total = g.total();
  std::vector<double> dist_field(total, 0.0);
  {
    const auto& comps = exp.region_x.components;
#pragma omp parallel for if (total >= 4096)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
      std::array<int, max_dim> idx{};
      g.unflatten(static_cast<std::size_t>(i), idx);
      geom::Vec x;
      x.dim = g.dim();
      for (int a = 0; a < g.dim(); ++a) x.v[a] = g.coord(a, idx[a]);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& comp : comps) {
        geom::Vec p = geom::project(x, comp);
        best = std::min(best, geom::norm(x - p));
      }
      dist_field[static_cast<std::size_t>(i)] = best;
    }
  }
  double max_dist = 0.0;
  for (double d : dist_field) max_dist = std::max(max_dist, d);
  const std::size_t shells = static_cast<std::size_t>(std::floor(max_dist / shell_width)) + 1;

  WaveFunction psi = masked_bump_state(exp.grid, exp.region_x, exp.state, nullptr);
  EvolutionConfig margin_cfg;
  margin_cfg.dt = exp.dt;
  margin_cfg.t_final = exp.times.back();
  margin_cfg.mass = exp.mass;
  margin_cfg.speed = exp.speed;
  std::string margin_detail;
  if (!margin_satisfied(psi, margin_cfg, &margin_detail))
    profile.warnings.push_back("box margin violated, wrap-around can contaminate tails: " + margin_detail);

  // The sharp cutoff at the edge of X leaves Fourier content up to the lattice
  // Nyquist; the truncated tail scatters a ~1/dist^2 probability floor across the
  // whole box. Rows where the bound is not safely above that floor are reported
  // but not asserted: the discrete model cannot resolve them either way.
  profile.spectral_floor = spectral_tail_fraction(psi);
  const double assert_floor = 10.0 * profile.spectral_floor;
  if (profile.spectral_floor > 1e-3)
    profile.warnings.push_back("initial state is spectrally unresolved, refine the grid");

  const double s = exp.mass * exp.speed * exp.speed;
  std::size_t exempt = 0;
  evolve_visiting(exp, psi, [&](std::size_t j, const WaveFunction& state) {
    std::vector<double> shell_mass(shells, 0.0);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t k = static_cast<std::size_t>(dist_field[i] / shell_width);
      if (k >= shells) k = shells - 1;
      shell_mass[k] += std::norm(state.values[i]) * g.cell_volume();
    }
    double sum = std::accumulate(shell_mass.begin(), shell_mass.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-10) profile.mass_conserved = false;
    std::vector<double> beyond(shells, 0.0);
    double acc = 0.0;
    for (std::size_t k = shells; k-- > 0;) {
      acc += shell_mass[k];
      beyond[k] = acc;
    }
    double t = exp.times[j];
    for (std::size_t k = 0; k < shells; ++k) {
      ConeProfileRow row;
      row.t = t;
      row.shell_lo = static_cast<double>(k) * shell_width;
      row.shell_hi = row.shell_lo + shell_width;
      row.mass = shell_mass[k];
      row.mass_beyond = beyond[k];
      // probability convention: mass beyond distance D is at most e^{2 s (c t - D)}
      row.bound = k == 0 ? 1.0 : std::min(1.0, std::exp(2.0 * s * (exp.speed * t - row.shell_lo)));
      row.asserted = row.bound >= assert_floor;
      if (!row.asserted) ++exempt;
      profile.rows.push_back(row);
    }
  });
  if (exempt > 0) {
    std::ostringstream os;
    os << exempt << " rows below the spectral resolution floor (" << profile.spectral_floor
       << "), reported but not asserted";
    profile.warnings.push_back(os.str());
  }
  profile.runtime_seconds = now_seconds(t0);
  return profile;
}

}  // namespace lightcone
