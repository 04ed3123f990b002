#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "lightcone/potential.hpp"
#include "lightcone/wavefunction.hpp"

namespace lightcone {

// Dense reference implementations for small grids (total points <= 4096).
// Deliberately built without the FFT stack: the Fourier matrix is assembled
// entry by entry and the propagator comes out of Hermitian eigensolves, so
// agreement with the split-step path is a meaningful cross-check.

inline constexpr std::size_t dense_oracle_limit = 4096;

// <grid.total()> x <grid.total()> kinetic matrix F^H diag(omega) F / total.
Eigen::MatrixXcd dense_kinetic_matrix(const Grid& g, double mass, double speed);

// Time-ordered product of exp(-i tau (K + V(t_mid))) over `substeps`
// midpoint-sampled slices; a static potential collapses to one exponential.
Eigen::MatrixXcd dense_propagator(const Grid& g, const PotentialSpec& potential, double t_final,
                                  int substeps, double mass, double speed);

WaveFunction dense_oracle_evolve(const WaveFunction& psi0, const PotentialSpec& potential, double t_final,
                                 int substeps, double mass, double speed);

// Largest singular value of diag(mask_y) U diag(mask_x).
double dense_masked_norm(const Eigen::MatrixXcd& U, std::span<const std::uint8_t> mask_x,
                         std::span<const std::uint8_t> mask_y);

}  // namespace lightcone
