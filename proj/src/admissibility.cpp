#include "lightcone/admissibility.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "lightcone/kernels.hpp"
#include "lightcone/symbols.hpp"

namespace lightcone {

namespace {

// w = S V S v with S = <grad>^{-1/2}
struct KlmnOperator {
  const Grid& g;
  std::span<const double> v_field;
  std::vector<cplx> sob_inv_half;
  std::vector<cplx> buf;

  KlmnOperator(const Grid& grid, std::span<const double> v) : g(grid), v_field(v) {
    sob_inv_half.resize(g.total());
    fill_symbol(g, std::span<cplx>(sob_inv_half), [](const double* xi, int dim) {
      double q = 1.0;
      for (int a = 0; a < dim; ++a) q += xi[a] * xi[a];
      return cplx(std::pow(q, -0.25), 0.0);
    });
    buf.resize(g.total());
  }

  void smooth(std::vector<cplx>& x) {
    g.fft().forward(x, buf);
    kernels::hadamard(buf, buf, sob_inv_half);
    g.fft().inverse(buf, x);
  }

  void apply(std::vector<cplx>& x) {
    smooth(x);
    kernels::multiply_real(x, x, v_field);
    smooth(x);
  }
};

double norm_of(const std::vector<cplx>& v) { return std::sqrt(kernels::sum_abs2(v)); }

}  // namespace

KlmnResult klmn_norm_full(std::span<const double> v_field, GridPtr g, const KlmnOptions& opt,
                          const std::vector<cplx>* warm_start) {
  if (v_field.size() != g->total()) throw std::invalid_argument("klmn_norm: field size mismatch");
  KlmnResult res;
  KlmnOperator op(*g, v_field);

  std::vector<cplx> v;
  if (warm_start && warm_start->size() == g->total() && norm_of(*warm_start) > 0.0) {
    v = *warm_start;
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    v.resize(g->total());
    for (auto& z : v) z = cplx(gauss(rng), gauss(rng));
  }
  kernels::scale(v, 1.0 / norm_of(v));

  double prev = -1.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    std::vector<cplx> w = v;
    op.apply(w);
    const double sigma = norm_of(w);  // = |A v| with |v| = 1
    res.iterations = it + 1;
    if (sigma == 0.0) {
      res.value = 0.0;
      res.converged = true;
      res.vector = std::move(v);
      return res;
    }
    op.apply(w);  // w = A^2 v
    const double wnorm = norm_of(w);
    if (wnorm == 0.0) {
      res.value = sigma;
      res.converged = true;
      res.vector = std::move(v);
      return res;
    }
    kernels::scale(w, 1.0 / wnorm);
    v = std::move(w);
    if (prev >= 0.0 && std::abs(sigma - prev) <= opt.tol * std::max(sigma, 1e-300)) {
      res.value = sigma;
      res.converged = true;
      res.vector = std::move(v);
      return res;
    }
    prev = sigma;
    res.value = sigma;
  }
  res.vector = std::move(v);
  return res;
}

double klmn_norm(std::span<const double> v_field, GridPtr g, double tol) {
  KlmnOptions opt;
  opt.tol = tol;
  const KlmnResult res = klmn_norm_full(v_field, g, opt);
  if (!res.converged)
    throw NumericalError("klmn_norm: power iteration did not converge in " +
                         std::to_string(opt.max_iter) + " iterations");
  return res.value;
}

AdmissibilityReport admissibility_report(const PotentialSpec& potential, GridPtr g, double t_final,
                                         int samples, Decomposition hint, const KlmnOptions& opt) {
  if (!(t_final >= 0.0)) throw std::invalid_argument("admissibility_report: t_final must be >= 0");
  if (samples < 1) throw std::invalid_argument("admissibility_report: need at least one sample");
  validate(potential, g->dim());

  AdmissibilityReport rep;
  rep.decomposition = hint;
  const bool form_bounded = hint == Decomposition::FormBounded;
  const bool stat = is_static(potential);

  if (stat || t_final == 0.0) samples = 1;
  rep.sample_times.reserve(samples);
  for (int j = 0; j < samples; ++j)
    rep.sample_times.push_back(samples == 1 ? 0.0 : t_final * j / (samples - 1));

  std::vector<double> field(g->total());
  std::vector<double> dfield(g->total()), dfield2(g->total());
  std::vector<cplx> warm, warm_d;
  double worst_t = 0.0;
  const double delta = t_final > 0.0 ? t_final / 1e4 : 0.0;

  for (double t : rep.sample_times) {
    evaluate_potential(potential, *g, t, field);
    if (form_bounded) {
      const KlmnResult r = klmn_norm_full(field, g, opt, warm.empty() ? nullptr : &warm);
      warm = r.vector;
      rep.klmn_by_sample.push_back(r.value);
      rep.all_converged = rep.all_converged && r.converged;
      if (r.value > rep.sup_klmn) {
        rep.sup_klmn = r.value;
        worst_t = t;
      }
    } else {
      rep.sup_bounded = std::max(rep.sup_bounded, kernels::max_abs(std::span<const double>(field)));
    }
    if (!stat) {
      evaluate_potential(potential, *g, t + delta, dfield);
      evaluate_potential(potential, *g, t - delta, dfield2);
      for (std::size_t i = 0; i < dfield.size(); ++i) dfield[i] = (dfield[i] - dfield2[i]) / (2.0 * delta);
      // split norm upper bound: route dV/dt entirely to the bounded part
      double est = kernels::max_abs(std::span<const double>(dfield));
      if (form_bounded) {
        const KlmnResult r = klmn_norm_full(dfield, g, opt, warm_d.empty() ? nullptr : &warm_d);
        warm_d = r.vector;
        if (r.converged) est = std::min(est, r.value);
      }
      rep.sup_derivative = std::max(rep.sup_derivative, est);
    }
  }

  if (form_bounded && g->points(0) >= 16) {
    // coarse probe: same box, half the points per axis
    std::vector<int> n2(g->dim());
    std::vector<double> len(g->dim());
    for (int a = 0; a < g->dim(); ++a) {
      n2[a] = g->points(a) / 2;
      len[a] = g->length(a);
    }
    GridPtr coarse = make_grid(g->dim(), n2, len);
    std::vector<double> cfield(coarse->total());
    evaluate_potential(potential, *coarse, worst_t, cfield);
    const KlmnResult r = klmn_norm_full(cfield, coarse, opt);
    if (r.converged) rep.refinement_delta = rep.sup_klmn - r.value;
  }

  const bool inconclusive = form_bounded && std::abs(rep.sup_klmn - 1.0) <= 1e-3;
  rep.cond_klmn = !form_bounded || rep.sup_klmn < 1.0;
  rep.cond_bounded = std::isfinite(rep.sup_bounded);
  rep.cond_derivative = std::isfinite(rep.sup_derivative);
  if (inconclusive) {
    rep.status = AdmissibilityStatus::Inconclusive;
  } else if (rep.cond_klmn && rep.cond_bounded && rep.cond_derivative && rep.all_converged) {
    rep.status = AdmissibilityStatus::Pass;
  } else {
    rep.status = AdmissibilityStatus::Fail;
  }
  rep.note = "finite-section estimates approximate the continuum norms from below";
  return rep;
}

}  // namespace lightcone
