#include "lightcone/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lightcone {

static bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

static std::vector<int> checked_dims(int dim, std::span<const int> points, std::span<const double> lengths) {
  if (dim < 1 || dim > max_dim) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  if (points.size() != static_cast<std::size_t>(dim) || lengths.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("grid: points/lengths must have one entry per axis");
  std::vector<int> dims(points.begin(), points.end());
  for (int a = 0; a < dim; ++a) {
    if (!power_of_two(points[a]) || points[a] < 8)
      throw std::invalid_argument("grid: axis " + std::to_string(a) + " point count " +
                                  std::to_string(points[a]) + " must be a power of two >= 8");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw std::invalid_argument("grid: axis " + std::to_string(a) + " length must be positive");
  }
  return dims;
}

Grid::Grid(int dim, std::span<const int> points, std::span<const double> lengths)
    : dim_(dim), fft_(checked_dims(dim, points, lengths)) {
  total_ = 1;
  cell_volume_ = 1.0;
  for (int a = 0; a < dim_; ++a) {
    n_[a] = points[a];
    length_[a] = lengths[a];
    h_[a] = lengths[a] / points[a];
    total_ *= static_cast<std::size_t>(points[a]);
    cell_volume_ *= h_[a];
    auto& f = freq_[a];
    f.resize(points[a]);
    const double base = 2.0 * std::numbers::pi / lengths[a];
    const int n = points[a];
    for (int k = 0; k < n; ++k) f[k] = base * (k < n / 2 ? k : k - n);
  }
  for (int a = dim_; a < max_dim; ++a) {
    n_[a] = 1;
    length_[a] = 0.0;
    h_[a] = 0.0;
  }
}

void Grid::unflatten(std::size_t flat, std::array<int, max_dim>& idx) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_[a]);
    flat /= n_[a];
  }
  for (int a = dim_; a < max_dim; ++a) idx[a] = 0;
}

void Grid::point(std::size_t flat, std::array<double, max_dim>& x) const {
  std::array<int, max_dim> idx;
  unflatten(flat, idx);
  for (int a = 0; a < dim_; ++a) x[a] = coord(a, idx[a]);
  for (int a = dim_; a < max_dim; ++a) x[a] = 0.0;
}

GridPtr make_grid(int dim, std::span<const int> points, std::span<const double> lengths) {
  return std::make_shared<Grid>(dim, points, lengths);
}

GridPtr make_grid(int dim, int points_per_axis, double length_per_axis) {
  std::vector<int> n(dim, points_per_axis);
  std::vector<double> len(dim, length_per_axis);
  return std::make_shared<Grid>(dim, n, len);
}

}  // namespace lightcone
