#include "lightcone/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lightcone/symbols.hpp"

namespace lightcone {

static void check_size(const Grid& g) {
  if (g.total() > dense_oracle_limit)
    throw std::invalid_argument("dense oracle: grid exceeds " + std::to_string(dense_oracle_limit) + " points");
}

Eigen::MatrixXcd dense_kinetic_matrix(const Grid& g, double mass, double speed) {
  check_size(g);
  const auto M = static_cast<Eigen::Index>(g.total());
  // per-axis twiddle tables exp(-2 pi i k j / N)
  std::array<Eigen::MatrixXcd, max_dim> twiddle;
  for (int a = 0; a < g.dim(); ++a) {
    const int n = g.points(a);
    twiddle[a].resize(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const double ph = -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(j) / n;
        twiddle[a](k, j) = cplx(std::cos(ph), std::sin(ph));
      }
  }
  Eigen::MatrixXcd F(M, M);
  std::array<int, max_dim> ki, ji;
  for (Eigen::Index k = 0; k < M; ++k) {
    g.unflatten(static_cast<std::size_t>(k), ki);
    for (Eigen::Index j = 0; j < M; ++j) {
      g.unflatten(static_cast<std::size_t>(j), ji);
      cplx w(1.0, 0.0);
      for (int a = 0; a < g.dim(); ++a) w *= twiddle[a](ki[a], ji[a]);
      F(k, j) = w;
    }
  }
  if (!(mass > 0.0) || !(speed > 0.0)) throw std::invalid_argument("dense oracle: need mass > 0, speed > 0");
  Eigen::VectorXd diag(M);
  std::array<int, max_dim> idx;
  std::array<double, max_dim> xi;
  for (Eigen::Index k = 0; k < M; ++k) {
    g.unflatten(static_cast<std::size_t>(k), idx);
    for (int a = 0; a < g.dim(); ++a) xi[a] = g.freq(a)[idx[a]];
    diag(k) = kinetic_omega(xi.data(), g.dim(), mass, speed);
  }
  Eigen::MatrixXcd K = F.adjoint() * diag.asDiagonal() * F / static_cast<double>(M);
  // kill roundoff asymmetry so the eigensolver sees an exactly Hermitian matrix
  K = 0.5 * (K + Eigen::MatrixXcd(K.adjoint()));
  return K;
}

static Eigen::MatrixXcd step_exponential(const Eigen::MatrixXcd& H, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense oracle: eigensolver failed");
  const auto& V = es.eigenvectors();
  Eigen::VectorXcd phases(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    const double ph = -tau * es.eigenvalues()(i);
    phases(i) = cplx(std::cos(ph), std::sin(ph));
  }
  return V * phases.asDiagonal() * V.adjoint();
}

Eigen::MatrixXcd dense_propagator(const Grid& g, const PotentialSpec& potential, double t_final,
                                  int substeps, double mass, double speed) {
  check_size(g);
  if (substeps < 1) throw std::invalid_argument("dense oracle: substeps must be >= 1");
  if (!(t_final >= 0.0)) throw std::invalid_argument("dense oracle: t_final must be >= 0");
  validate(potential, g.dim());
  const auto M = static_cast<Eigen::Index>(g.total());
  const Eigen::MatrixXcd K = dense_kinetic_matrix(g, mass, speed);
  std::vector<double> vfield(g.total());
  if (t_final == 0.0) return Eigen::MatrixXcd::Identity(M, M);

  if (is_static(potential)) {
    Eigen::MatrixXcd H = K;
    evaluate_potential(potential, g, 0.0, vfield);
    for (Eigen::Index i = 0; i < M; ++i) H(i, i) += vfield[i];
    return step_exponential(H, t_final);
  }

  const double tau = t_final / substeps;
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(M, M);
  for (int k = 0; k < substeps; ++k) {
    const double t_mid = tau * (static_cast<double>(k) + 0.5);
    Eigen::MatrixXcd H = K;
    evaluate_potential(potential, g, t_mid, vfield);
    for (Eigen::Index i = 0; i < M; ++i) H(i, i) += vfield[i];
    U = step_exponential(H, tau) * U;
  }
  return U;
}

WaveFunction dense_oracle_evolve(const WaveFunction& psi0, const PotentialSpec& potential, double t_final,
                                 int substeps, double mass, double speed) {
  const Grid& g = *psi0.grid;
  const Eigen::MatrixXcd U = dense_propagator(g, potential, t_final, substeps, mass, speed);
  Eigen::Map<const Eigen::VectorXcd> in(psi0.values.data(), static_cast<Eigen::Index>(g.total()));
  WaveFunction out{psi0.grid, std::vector<cplx>(g.total())};
  Eigen::Map<Eigen::VectorXcd> res(out.values.data(), static_cast<Eigen::Index>(g.total()));
  res = U * in;
  return out;
}

double dense_masked_norm(const Eigen::MatrixXcd& U, std::span<const std::uint8_t> mask_x,
                         std::span<const std::uint8_t> mask_y) {
  const auto M = U.rows();
  if (mask_x.size() != static_cast<std::size_t>(M) || mask_y.size() != static_cast<std::size_t>(M))
    throw std::invalid_argument("dense_masked_norm: mask size mismatch");
  Eigen::MatrixXcd A = U;
  for (Eigen::Index j = 0; j < M; ++j)
    if (!mask_x[j]) A.col(j).setZero();
  for (Eigen::Index i = 0; i < M; ++i)
    if (!mask_y[i]) A.row(i).setZero();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

}  // namespace lightcone
