#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "lightcone/errors.hpp"
#include "lightcone/grid.hpp"

namespace lightcone::geom {

struct Vec {
  int dim = 0;
  std::array<double, max_dim> v{};

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

Vec make_vec(std::span<const double> x);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);

// Closed convex primitives. HalfSpace is the set {x : normal.x <= offset}
// with a unit normal.
struct HalfSpace {
  Vec normal;
  double offset = 0.0;
};
struct Ball {
  Vec center;
  double radius = 0.0;
};
struct AxisBox {
  Vec lo, hi;
};
using Primitive = std::variant<HalfSpace, Ball, AxisBox>;

// Intersection of primitives; assumed nonempty.
struct ConvexRegion {
  std::vector<Primitive> parts;
};
// Finite union of convex pieces.
struct Region {
  std::vector<ConvexRegion> components;
};

// Normalizes the normal (scaling the offset to keep the same set); throws
// on a zero normal.
HalfSpace make_halfspace(std::span<const double> normal, double offset);

int primitive_dim(const Primitive& p);
void validate(const Primitive& p, int dim);
void validate(const Region& r, int dim);
int region_dim(const Region& r);

bool contains(const Primitive& p, const Vec& x, double tol = 0.0);
bool contains(const ConvexRegion& c, const Vec& x, double tol = 0.0);
bool contains(const Region& r, const Vec& x, double tol = 0.0);

Vec project(const Vec& x, const Primitive& p);

struct ProjectOptions {
  double tol = 1e-10;
  int max_cycles = 200000;
};
// Dykstra's algorithm over the primitive list; exact for a single
// primitive. Throws GeometryError when the cycle budget runs out.
Vec project(const Vec& x, const ConvexRegion& c, const ProjectOptions& opt = {});

struct DistanceResult {
  double dist = 0.0;
  Vec a, b;  // realizing points, a in the first region
};
// Alternating projections between the two regions.
DistanceResult distance(const ConvexRegion& a, const ConvexRegion& b, const ProjectOptions& opt = {});
// Minimum over component pairs.
DistanceResult distance(const Region& a, const Region& b, const ProjectOptions& opt = {});

// Affine functional from the nearest-point pair (a, b): direction
// (a - b)/|a - b| through the midpoint. Takes value >= dist/2 on A and
// <= -dist/2 on B. Throws GeometryError when the regions touch.
struct SeparatingFunctional {
  Vec normal;
  Vec base;
  double dist = 0.0;

  double operator()(const Vec& x) const { return dot(normal, x - base); }
};
SeparatingFunctional separating_functional(const ConvexRegion& a, const ConvexRegion& b,
                                           const ProjectOptions& opt = {});

// 1 at cell centers inside the region (closed membership), 0 elsewhere.
std::vector<std::uint8_t> indicator_mask(const Region& r, const Grid& g);

// Centers z of the cubes z + r[-1/2, 1/2]^d, z on the lattice (r Z)^d,
// whose closed cube meets the region. Requires a bounded region.
std::vector<Vec> cube_tiling(const Region& r, double edge);

// e^{r sqrt(d)} * sum over integer lattice points with |z| >= dist/r - sqrt(d)
// of e^{-r |z|}; the tail is cut only once an analytic majorant puts it
// below 1e-12 of the running total.
double tiling_constant(double dist, double edge, int dim);

// Axis-aligned bounding box, when every axis is bounded.
std::optional<AxisBox> bounding_box(const ConvexRegion& c);
std::optional<AxisBox> bounding_box(const Region& r);

}  // namespace lightcone::geom
