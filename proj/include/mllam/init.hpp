// Initialization strategies: Method-of-Moments spectral initialization and
// random orthonormal bases.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

#include "mllam/model.hpp"
#include "mllam/rng.hpp"

namespace mllam {

// Orthonormal basis of the top-r eigenspace of a symmetric matrix (only the
// lower triangle is read). Columns are ordered by descending eigenvalue and
// sign-fixed on their largest-magnitude entry.
inline Subspace top_r_eigenspace(const Matrix& symmetric, int r) {
  detail::require(symmetric.rows() == symmetric.cols(),
                  "top_r_eigenspace: matrix must be square");
  detail::require(r >= 1 && r <= symmetric.rows(), "top_r_eigenspace: bad r");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("top_r_eigenspace: eigensolver failed");
  }
  const auto d = symmetric.rows();
  Matrix basis(d, r);
  for (int k = 0; k < r; ++k) {
    Vector col = es.eigenvectors().col(d - 1 - k);  // eigenvalues are ascending
    Eigen::Index argmax = 0;
    col.cwiseAbs().maxCoeff(&argmax);
    if (col(argmax) < 0.0) col = -col;
    basis.col(k) = col;
  }
  return Subspace(std::move(basis));
}

// Method-of-Moments initialization: the top-r eigenspace of the weighted
// second-moment matrix M = (1/mt) sum_ij y_ij^2 x_ij x_ij'. Its population
// counterpart is (sum_i ||w_i||^2 / t + sigma^2) I + (2/t) sum_i w_i w_i'
// with w_i = U* v*^(i), whose top-r eigenspace is span(U*).
inline Subspace mom_init(const ProblemInstance& instance) {
  detail::require(instance.t() >= 1, "mom_init: instance has no tasks");
  long long samples = 0;
  for (const auto& task : instance.tasks) samples += task.m();
  detail::require(samples >= instance.subspace_dim,
                  "mom_init: need at least r samples in total");

  const int d = instance.ambient_dim;
  Matrix moment = Matrix::Zero(d, d);
  for (const auto& task : instance.tasks) {
    const Matrix weighted =
        task.examples.transpose() * task.observations.asDiagonal();  // d x m
    moment.selfadjointView<Eigen::Lower>().rankUpdate(weighted, 1.0);
  }
  moment = Matrix(moment.selfadjointView<Eigen::Lower>()) /
           static_cast<double>(samples);
  return top_r_eigenspace(moment, instance.subspace_dim);
}

// Haar-distributed span: sign-normalized QR factor of a seeded Gaussian.
// The seed is re-keyed so a basis drawn here never coincides with the
// ground-truth subspace of an instance generated from the same seed.
inline Subspace random_init(int d, int r, std::uint64_t seed) {
  detail::require(r >= 1 && r <= d, "random_init: need 1 <= r <= d");
  return sample_subspace(d, r, rng::keyed(seed, rng::kStreamDerived, 0, 0));
}

}  // namespace mllam
