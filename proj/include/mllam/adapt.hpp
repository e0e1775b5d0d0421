// Few-shot adaptation: fit only the r coefficients of a new task on a
// frozen learned subspace, then predict.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>
#include <utility>

#include "mllam/model.hpp"

namespace mllam {

struct AdaptedRegressor {
  Subspace subspace;    // frozen representation
  Vector coeffs;        // v+, length r
  int n_samples_used;   // m+
};

// Least squares over all m+ new samples; no half split, the representation
// is not re-estimated here. m+ < r falls back to the minimum-norm solution.
inline AdaptedRegressor adapt(const Subspace& u, const Matrix& examples,
                              const Vector& observations, double tol = 1e-10) {
  detail::require(examples.rows() >= 1, "adapt: need at least one sample");
  detail::require(examples.rows() == observations.size(),
                  "adapt: examples row count must equal observations length");
  detail::require(examples.cols() == u.d(), "adapt: dimension mismatch");
  const Matrix design = examples * u.basis;
  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol);
  return AdaptedRegressor{u, svd.solve(observations),
                          static_cast<int>(examples.rows())};
}

inline AdaptedRegressor adapt(const Subspace& u, const TaskData& new_task,
                              double tol = 1e-10) {
  return adapt(u, new_task.examples, new_task.observations, tol);
}

inline double predict(const AdaptedRegressor& reg, const Vector& x) {
  detail::require(x.size() == reg.subspace.d(), "predict: input length must be d");
  return x.dot(reg.subspace.basis * reg.coeffs);
}

}  // namespace mllam
