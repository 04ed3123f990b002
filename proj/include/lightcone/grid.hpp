#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "lightcone/fft.hpp"

namespace lightcone {

inline constexpr int max_dim = 3;

// Periodic box [-L/2, L/2)^dim sampled at x_j = -L/2 + j*h per axis,
// h = L/N, with power-of-two N. The frequency lattice is stored in FFT
// order, xi_k = 2*pi*k/L for k = 0..N/2-1 followed by k = -N/2..-1, so
// the Nyquist mode carries the negative representative. Data is row-major
// with the last axis fastest, matching the transform layout.
class Grid {
 public:
  Grid(int dim, std::span<const int> points, std::span<const double> lengths);

  int dim() const { return dim_; }
  int points(int axis) const { return n_[axis]; }
  double length(int axis) const { return length_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  std::size_t total() const { return total_; }
  double cell_volume() const { return cell_volume_; }

  double coord(int axis, int index) const { return -0.5 * length_[axis] + h_[axis] * index; }
  const std::vector<double>& freq(int axis) const { return freq_[axis]; }

  // flat index -> per-axis indices
  void unflatten(std::size_t flat, std::array<int, max_dim>& idx) const;
  // cell center of a flat index
  void point(std::size_t flat, std::array<double, max_dim>& x) const;

  const Fft& fft() const { return fft_; }

 private:
  int dim_;
  std::array<int, max_dim> n_{};
  std::array<double, max_dim> length_{};
  std::array<double, max_dim> h_{};
  std::array<std::vector<double>, max_dim> freq_;
  std::size_t total_;
  double cell_volume_;
  Fft fft_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Validates dim in {1,2,3}, power-of-two point counts, positive lengths.
GridPtr make_grid(int dim, std::span<const int> points, std::span<const double> lengths);
GridPtr make_grid(int dim, int points_per_axis, double length_per_axis);

}  // namespace lightcone
