#include "lightcone/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace lightcone {

namespace {

struct BumpTerm {
  double amp;
  std::array<double, max_dim> center;
  double inv_w2;
};

void check_vec(const geom::Vec& v, int dim, const char* what) {
  if (v.dim != dim) throw std::invalid_argument(std::string("potential: ") + what + " dimension mismatch");
  for (int i = 0; i < dim; ++i)
    if (!std::isfinite(v.v[i])) throw std::invalid_argument(std::string("potential: ") + what + " not finite");
}

void validate_node(const PotentialSpec& spec, int dim) {
  std::visit(
      [dim](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
        } else if constexpr (std::is_same_v<T, StaticBump>) {
          if (!(node.width > 0.0) || !std::isfinite(node.width) || !std::isfinite(node.amplitude))
            throw std::invalid_argument("potential: bump needs finite amplitude and width > 0");
          check_vec(node.center, dim, "center");
        } else if constexpr (std::is_same_v<T, MovingBump>) {
          if (!(node.width > 0.0) || !std::isfinite(node.width) || !std::isfinite(node.amplitude))
            throw std::invalid_argument("potential: bump needs finite amplitude and width > 0");
          check_vec(node.center, dim, "center");
          check_vec(node.velocity, dim, "velocity");
        } else if constexpr (std::is_same_v<T, OscillatingBump>) {
          if (!(node.width > 0.0) || !std::isfinite(node.width) || !std::isfinite(node.amplitude) ||
              !std::isfinite(node.omega))
            throw std::invalid_argument("potential: oscillating bump needs finite parameters, width > 0");
          check_vec(node.center, dim, "center");
        } else {
          for (const auto& term : node.terms) validate_node(term, dim);
        }
      },
      spec.node);
}

void collect_terms(const PotentialSpec& spec, double t, std::vector<BumpTerm>& out) {
  std::visit(
      [t, &out](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
        } else if constexpr (std::is_same_v<T, StaticBump>) {
          BumpTerm b{node.amplitude, {}, 1.0 / (node.width * node.width)};
          for (int i = 0; i < node.center.dim; ++i) b.center[i] = node.center.v[i];
          out.push_back(b);
        } else if constexpr (std::is_same_v<T, MovingBump>) {
          BumpTerm b{node.amplitude, {}, 1.0 / (node.width * node.width)};
          for (int i = 0; i < node.center.dim; ++i) b.center[i] = node.center.v[i] + t * node.velocity.v[i];
          out.push_back(b);
        } else if constexpr (std::is_same_v<T, OscillatingBump>) {
          BumpTerm b{node.amplitude * std::cos(node.omega * t), {}, 1.0 / (node.width * node.width)};
          for (int i = 0; i < node.center.dim; ++i) b.center[i] = node.center.v[i];
          out.push_back(b);
        } else {
          for (const auto& term : node.terms) collect_terms(term, t, out);
        }
      },
      spec.node);
}

}  // namespace

void validate(const PotentialSpec& spec, int dim) { validate_node(spec, dim); }

bool is_static(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ZeroPotential> || std::is_same_v<T, StaticBump>) {
          return true;
        } else if constexpr (std::is_same_v<T, MovingBump>) {
          double v2 = 0.0;
          for (int i = 0; i < node.velocity.dim; ++i) v2 += node.velocity.v[i] * node.velocity.v[i];
          return v2 == 0.0;
        } else if constexpr (std::is_same_v<T, OscillatingBump>) {
          return node.omega == 0.0 || node.amplitude == 0.0;
        } else {
          for (const auto& term : node.terms)
            if (!is_static(term)) return false;
          return true;
        }
      },
      spec.node);
}

bool is_zero(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return true;
        } else if constexpr (std::is_same_v<T, SumPotential>) {
          for (const auto& term : node.terms)
            if (!is_zero(term)) return false;
          return true;
        } else {
          return node.amplitude == 0.0;
        }
      },
      spec.node);
}

void evaluate_potential(const PotentialSpec& spec, const Grid& g, double t, std::span<double> out) {
  if (out.size() != g.total()) throw std::invalid_argument("evaluate_potential: output size mismatch");
  std::vector<BumpTerm> terms;
  collect_terms(spec, t, terms);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.total());
  const int dim = g.dim();
#pragma omp parallel for if (n >= 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::array<double, max_dim> x;
    g.point(static_cast<std::size_t>(i), x);
    double acc = 0.0;
    for (const auto& b : terms) {
      double q = 0.0;
      for (int a = 0; a < dim; ++a) {
        const double dxa = x[a] - b.center[a];
        q += dxa * dxa;
      }
      acc += b.amp * std::exp(-q * b.inv_w2);
    }
    out[i] = acc;
  }
}

}  // namespace lightcone
