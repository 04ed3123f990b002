#include "lightcone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lightcone::geom {

static constexpr double inf = std::numeric_limits<double>::infinity();

Vec make_vec(std::span<const double> x) {
  if (x.empty() || x.size() > max_dim) throw GeometryError("vector dimension must be 1..3");
  Vec out;
  out.dim = static_cast<int>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.v[i] = x[i];
  return out;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec out = a;
  for (int i = 0; i < a.dim; ++i) out.v[i] += b.v[i];
  return out;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec out = a;
  for (int i = 0; i < a.dim; ++i) out.v[i] -= b.v[i];
  return out;
}

Vec operator*(double s, const Vec& a) {
  Vec out = a;
  for (int i = 0; i < a.dim; ++i) out.v[i] *= s;
  return out;
}

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (int i = 0; i < a.dim; ++i) acc += a.v[i] * b.v[i];
  return acc;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

HalfSpace make_halfspace(std::span<const double> normal, double offset) {
  Vec n = make_vec(normal);
  const double len = norm(n);
  if (!(len > 0.0)) throw GeometryError("halfspace: zero normal");
  return {(1.0 / len) * n, offset / len};
}

static int dim_of(const HalfSpace& h) { return h.normal.dim; }
static int dim_of(const Ball& b) { return b.center.dim; }
static int dim_of(const AxisBox& b) { return b.lo.dim; }

int primitive_dim(const Primitive& p) {
  return std::visit([](const auto& q) { return dim_of(q); }, p);
}

void validate(const Primitive& p, int dim) {
  if (primitive_dim(p) != dim) throw GeometryError("primitive dimension mismatch");
  if (const auto* h = std::get_if<HalfSpace>(&p)) {
    if (std::abs(norm(h->normal) - 1.0) > 1e-9) throw GeometryError("halfspace: normal not unit");
    if (!std::isfinite(h->offset)) throw GeometryError("halfspace: offset not finite");
  } else if (const auto* b = std::get_if<Ball>(&p)) {
    if (!(b->radius > 0.0)) throw GeometryError("ball: radius must be positive");
  } else {
    const auto& box = std::get<AxisBox>(p);
    if (box.hi.dim != dim) throw GeometryError("box dimension mismatch");
    for (int i = 0; i < dim; ++i)
      if (!(box.lo.v[i] <= box.hi.v[i])) throw GeometryError("box: lo must not exceed hi");
  }
}

void validate(const Region& r, int dim) {
  if (r.components.empty()) throw GeometryError("region: no components");
  for (const auto& c : r.components) {
    if (c.parts.empty()) throw GeometryError("region: empty intersection list");
    for (const auto& p : c.parts) validate(p, dim);
  }
}

int region_dim(const Region& r) {
  if (r.components.empty() || r.components[0].parts.empty()) throw GeometryError("region: empty");
  return primitive_dim(r.components[0].parts[0]);
}

bool contains(const Primitive& p, const Vec& x, double tol) {
  if (const auto* h = std::get_if<HalfSpace>(&p)) return dot(h->normal, x) <= h->offset + tol;
  if (const auto* b = std::get_if<Ball>(&p)) return norm(x - b->center) <= b->radius + tol;
  const auto& box = std::get<AxisBox>(p);
  for (int i = 0; i < x.dim; ++i)
    if (x.v[i] < box.lo.v[i] - tol || x.v[i] > box.hi.v[i] + tol) return false;
  return true;
}

bool contains(const ConvexRegion& c, const Vec& x, double tol) {
  return std::all_of(c.parts.begin(), c.parts.end(),
                     [&](const Primitive& p) { return contains(p, x, tol); });
}

bool contains(const Region& r, const Vec& x, double tol) {
  return std::any_of(r.components.begin(), r.components.end(),
                     [&](const ConvexRegion& c) { return contains(c, x, tol); });
}

Vec project(const Vec& x, const Primitive& p) {
  if (const auto* h = std::get_if<HalfSpace>(&p)) {
    const double excess = dot(h->normal, x) - h->offset;
    return excess > 0.0 ? x - excess * h->normal : x;
  }
  if (const auto* b = std::get_if<Ball>(&p)) {
    const Vec d = x - b->center;
    const double len = norm(d);
    if (len <= b->radius) return x;
    return b->center + (b->radius / len) * d;
  }
  const auto& box = std::get<AxisBox>(p);
  Vec out = x;
  for (int i = 0; i < x.dim; ++i) out.v[i] = std::clamp(out.v[i], box.lo.v[i], box.hi.v[i]);
  return out;
}

Vec project(const Vec& x, const ConvexRegion& c, const ProjectOptions& opt) {
  if (c.parts.empty()) throw GeometryError("project: empty intersection list");
  if (c.parts.size() == 1) return project(x, c.parts[0]);
  Vec y = x;
  std::vector<Vec> incr(c.parts.size(), Vec{x.dim, {}});
  for (int cycle = 0; cycle < opt.max_cycles; ++cycle) {
    const Vec prev = y;
    for (std::size_t i = 0; i < c.parts.size(); ++i) {
      const Vec target = y + incr[i];
      const Vec proj = project(target, c.parts[i]);
      incr[i] = target - proj;
      y = proj;
    }
    if (norm(y - prev) < opt.tol) return y;
  }
  throw GeometryError("project: Dykstra did not converge (empty intersection?)");
}

DistanceResult distance(const ConvexRegion& a, const ConvexRegion& b, const ProjectOptions& opt) {
  Vec seed{primitive_dim(a.parts.at(0)), {}};
  Vec pa = project(seed, a, opt);
  Vec pb = project(pa, b, opt);
  for (int it = 0; it < opt.max_cycles; ++it) {
    const Vec next_a = project(pb, a, opt);
    const Vec next_b = project(next_a, b, opt);
    const double moved = std::max(norm(next_a - pa), norm(next_b - pb));
    pa = next_a;
    pb = next_b;
    if (moved < opt.tol) return {norm(pa - pb), pa, pb};
  }
  throw GeometryError("distance: alternating projections did not converge");
}

DistanceResult distance(const Region& a, const Region& b, const ProjectOptions& opt) {
  DistanceResult best;
  best.dist = inf;
  for (const auto& ca : a.components)
    for (const auto& cb : b.components) {
      const DistanceResult r = distance(ca, cb, opt);
      if (r.dist < best.dist) best = r;
    }
  return best;
}

SeparatingFunctional separating_functional(const ConvexRegion& a, const ConvexRegion& b,
                                           const ProjectOptions& opt) {
  const DistanceResult r = distance(a, b, opt);
  if (r.dist <= 10.0 * opt.tol)
    throw GeometryError("separating_functional: regions touch or overlap");
  SeparatingFunctional f;
  f.normal = (1.0 / r.dist) * (r.a - r.b);
  f.base = 0.5 * (r.a + r.b);
  f.dist = r.dist;
  return f;
}

std::vector<std::uint8_t> indicator_mask(const Region& r, const Grid& g) {
  validate(r, g.dim());
  std::vector<std::uint8_t> mask(g.total());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.total());
#pragma omp parallel for if (n >= 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::array<double, max_dim> x;
    g.point(static_cast<std::size_t>(i), x);
    Vec p{g.dim(), x};
    mask[i] = contains(r, p) ? 1 : 0;
  }
  return mask;
}

std::optional<AxisBox> bounding_box(const ConvexRegion& c) {
  const int d = primitive_dim(c.parts.at(0));
  Vec lo{d, {}}, hi{d, {}};
  for (int i = 0; i < d; ++i) {
    lo.v[i] = -inf;
    hi.v[i] = inf;
  }
  for (const auto& p : c.parts) {
    if (const auto* b = std::get_if<Ball>(&p)) {
      for (int i = 0; i < d; ++i) {
        lo.v[i] = std::max(lo.v[i], b->center.v[i] - b->radius);
        hi.v[i] = std::min(hi.v[i], b->center.v[i] + b->radius);
      }
    } else if (const auto* box = std::get_if<AxisBox>(&p)) {
      for (int i = 0; i < d; ++i) {
        lo.v[i] = std::max(lo.v[i], box->lo.v[i]);
        hi.v[i] = std::min(hi.v[i], box->hi.v[i]);
      }
    } else {
      const auto& h = std::get<HalfSpace>(p);
      // only axis-aligned halfspaces tighten a box
      for (int i = 0; i < d; ++i) {
        bool axis = true;
        for (int j = 0; j < d; ++j)
          if (j != i && std::abs(h.normal.v[j]) > 1e-12) axis = false;
        if (!axis) continue;
        if (h.normal.v[i] > 0.5)
          hi.v[i] = std::min(hi.v[i], h.offset / h.normal.v[i]);
        else if (h.normal.v[i] < -0.5)
          lo.v[i] = std::max(lo.v[i], h.offset / h.normal.v[i]);
      }
    }
  }
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(lo.v[i]) || !std::isfinite(hi.v[i])) return std::nullopt;
  return AxisBox{lo, hi};
}

std::optional<AxisBox> bounding_box(const Region& r) {
  const int d = region_dim(r);
  Vec lo{d, {}}, hi{d, {}};
  for (int i = 0; i < d; ++i) {
    lo.v[i] = inf;
    hi.v[i] = -inf;
  }
  for (const auto& c : r.components) {
    const auto box = bounding_box(c);
    if (!box) return std::nullopt;
    for (int i = 0; i < d; ++i) {
      lo.v[i] = std::min(lo.v[i], box->lo.v[i]);
      hi.v[i] = std::max(hi.v[i], box->hi.v[i]);
    }
  }
  return AxisBox{lo, hi};
}

// Exact overlap tests between one primitive and a closed cube.
static bool meets_cube(const Primitive& p, const Vec& lo, const Vec& hi) {
  const int d = lo.dim;
  if (const auto* box = std::get_if<AxisBox>(&p)) {
    for (int i = 0; i < d; ++i)
      if (box->lo.v[i] > hi.v[i] || box->hi.v[i] < lo.v[i]) return false;
    return true;
  }
  if (const auto* b = std::get_if<Ball>(&p)) {
    double d2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double gap = std::max({lo.v[i] - b->center.v[i], 0.0, b->center.v[i] - hi.v[i]});
      d2 += gap * gap;
    }
    return d2 <= b->radius * b->radius;
  }
  const auto& h = std::get<HalfSpace>(p);
  double lowest = 0.0;
  for (int i = 0; i < d; ++i)
    lowest += h.normal.v[i] * (h.normal.v[i] > 0.0 ? lo.v[i] : hi.v[i]);
  return lowest <= h.offset;
}

static bool meets_cube(const ConvexRegion& c, const Vec& lo, const Vec& hi,
                       const ProjectOptions& opt) {
  for (const auto& p : c.parts)
    if (!meets_cube(p, lo, hi)) return false;
  if (c.parts.size() == 1) return true;
  // Each primitive overlaps the cube; decide the joint overlap by distance
  // between the intersection and the cube.
  const ConvexRegion cube{{AxisBox{lo, hi}}};
  const DistanceResult r = distance(c, cube, opt);
  return r.dist <= 1e-9;
}

std::vector<Vec> cube_tiling(const Region& r, double edge) {
  if (!(edge > 0.0) || !std::isfinite(edge)) throw GeometryError("cube_tiling: edge must be positive");
  const int d = region_dim(r);
  validate(r, d);
  const auto box = bounding_box(r);
  if (!box) throw GeometryError("cube_tiling: region is unbounded");
  std::array<long, max_dim> kmin{}, kmax{};
  for (int i = 0; i < d; ++i) {
    kmin[i] = static_cast<long>(std::floor((box->lo.v[i] - 0.5 * edge) / edge - 1e-9)) - 1;
    kmax[i] = static_cast<long>(std::ceil((box->hi.v[i] + 0.5 * edge) / edge + 1e-9)) + 1;
  }
  const ProjectOptions opt;
  std::vector<Vec> out;
  std::array<long, max_dim> k = kmin;
  while (true) {
    Vec z{d, {}}, lo{d, {}}, hi{d, {}};
    for (int i = 0; i < d; ++i) {
      z.v[i] = edge * static_cast<double>(k[i]);
      lo.v[i] = z.v[i] - 0.5 * edge;
      hi.v[i] = z.v[i] + 0.5 * edge;
    }
    for (const auto& c : r.components)
      if (meets_cube(c, lo, hi, opt)) {
        out.push_back(z);
        break;
      }
    int axis = d - 1;
    while (axis >= 0 && ++k[axis] > kmax[axis]) {
      k[axis] = kmin[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

double tiling_constant(double dist, double edge, int dim) {
  if (!(edge > 0.0) || !std::isfinite(edge)) throw GeometryError("tiling_constant: edge must be positive");
  if (dim < 1 || dim > max_dim) throw GeometryError("tiling_constant: dim must be 1..3");
  if (!std::isfinite(dist) || !(dist > edge * std::sqrt(static_cast<double>(dim))))
    throw GeometryError("tiling_constant: need dist > edge*sqrt(dim)");
  const double threshold = dist / edge - std::sqrt(static_cast<double>(dim));
  double total = 0.0;
  auto ring_count = [dim](long s) -> double {
    if (s == 0) return 1.0;
    const double outer = std::pow(2.0 * s + 1.0, dim);
    const double inner = std::pow(2.0 * s - 1.0, dim);
    return outer - inner;
  };
  // walk sup-norm rings; every ring point z has |z| >= s
  long s = 0;
  std::array<long, max_dim> k{};
  while (true) {
    // enumerate the ring |k|_inf == s
    double ring_sum = 0.0;
    for (int i = 0; i < dim; ++i) k[i] = -s;
    while (true) {
      bool on_ring = false;
      for (int i = 0; i < dim; ++i)
        if (std::labs(k[i]) == s) on_ring = true;
      if (on_ring) {
        double q = 0.0;
        for (int i = 0; i < dim; ++i) q += static_cast<double>(k[i]) * static_cast<double>(k[i]);
        const double len = std::sqrt(q);
        if (len >= threshold) ring_sum += std::exp(-edge * len);
      }
      int axis = dim - 1;
      while (axis >= 0 && ++k[axis] > s) {
        k[axis] = -s;
        --axis;
      }
      if (axis < 0) break;
    }
    total += ring_sum;
    // Tail majorant: every point in ring s' > s has weight <= e^{-edge s'},
    // so the tail is below sum_{s'>s} count(s') e^{-edge s'}, a ratio-bounded
    // series once count(s+1)/count(s) * e^{-edge} < 1.
    if (static_cast<double>(s) >= threshold && s >= 1) {
      const double ratio = ring_count(s + 1) / ring_count(s) * std::exp(-edge);
      if (ratio < 1.0) {
        const double tail = ring_count(s + 1) * std::exp(-edge * (s + 1)) / (1.0 - ratio);
        if (tail <= 1e-12 * std::max(total, 1e-300)) break;
      }
    }
    ++s;
  }
  return std::exp(edge * std::sqrt(static_cast<double>(dim))) * total;
}

}  // namespace lightcone::geom
