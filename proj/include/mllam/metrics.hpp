// Subspace-distance metrics, the minimax reference curve, and regression
// error. All pure functions.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mllam/model.hpp"

namespace mllam {

// Projection distance between the spans of U and U*:
//   frob     = ||(I - U* U*') U||_F       in [0, sqrt(r)]
//   spectral = ||(I - U* U*') U||_2       in [0, 1]
// Zero iff the spans coincide; invariant to rotations within either span.
struct SubspaceError {
  double frob = 0.0;
  double spectral = 0.0;
  double rescaled_frob = 0.0;  // frob / sqrt(r)
};

inline SubspaceError subspace_error(const Subspace& u, const Subspace& u_star) {
  detail::require(u.d() == u_star.d() && u.r() == u_star.r(),
                  "subspace_error: shape mismatch");
  const Matrix residual =
      u.basis - u_star.basis * (u_star.basis.transpose() * u.basis);
  const double sqrt_r = std::sqrt(static_cast<double>(u.r()));
  SubspaceError err;
  err.spectral = std::clamp(
      Eigen::JacobiSVD<Matrix>(residual).singularValues()(0), 0.0, 1.0);
  err.frob = std::clamp(residual.norm(), err.spectral, sqrt_r);
  err.rescaled_frob = err.frob / sqrt_r;
  return err;
}

// True when the minimax rate below is derived inside its assumed regime.
inline bool lower_bound_in_regime(int d, int r, int m, int t) {
  return 2 * r <= d &&
         static_cast<long long>(m) * t >= static_cast<long long>(r) * (d - r);
}

// Reference rate (lambda_r/lambda_1) * (sigma/sqrt(lambda_r)) * sqrt(dr/mt),
// constant taken as 1. A plotting/sanity reference, never a pass-fail bound.
inline double lower_bound_curve(double sigma, double lambda_max, double lambda_min,
                                int d, int r, int m, int t) {
  detail::require(lambda_max > 0.0 && lambda_min > 0.0,
                  "lower_bound_curve: eigenvalues must be positive");
  detail::require(d >= 1 && r >= 1 && m >= 1 && t >= 1,
                  "lower_bound_curve: dimensions must be positive");
  detail::require(sigma >= 0.0, "lower_bound_curve: sigma must be nonnegative");
  return (lambda_min / lambda_max) * (sigma / std::sqrt(lambda_min)) *
         std::sqrt(static_cast<double>(d) * r /
                   (static_cast<double>(m) * static_cast<double>(t)));
}

// Squared ambient-space distance ||U v - U* v*||^2 between an estimated and
// a true regressor; equals prediction MSE under isotropic Gaussian inputs.
inline double regressor_mse(const Subspace& u, const Vector& v,
                            const Subspace& u_star, const Vector& v_star) {
  detail::require(u.d() == u_star.d(), "regressor_mse: ambient dims differ");
  detail::require(v.size() == u.r() && v_star.size() == u_star.r(),
                  "regressor_mse: coefficient length mismatch");
  return (u.basis * v - u_star.basis * v_star).squaredNorm();
}

}  // namespace mllam
