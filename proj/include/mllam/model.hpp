// Domain types for multi-task linear regression with a shared low-rank
// representation, plus synthetic data generation under the Gaussian model
//
//   y_j^(i) = <x_j^(i), U* v*^(i)> + eps_j^(i),   x ~ N(0, I_d), eps ~ N(0, s^2)
//
// and spectrum/incoherence statistics of a regressor set.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mllam/rng.hpp"

namespace mllam {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Read-only view onto a contiguous row range of a task's data.
using ConstMatrixRef = Eigen::Ref<const Matrix, 0, Eigen::OuterStride<>>;
using ConstVectorRef = Eigen::Ref<const Vector>;

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Thin QR factor with the diagonal of R forced nonnegative, so the
// orthonormal basis of a given matrix is unique and reproducible.
// Throws when the input is numerically rank deficient.
inline Matrix qr_orthonormal_factor(const Matrix& a, double rank_tol = 1e-12) {
  require(a.rows() >= a.cols() && a.cols() > 0, "qr: need a tall matrix");
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Vector diag =
      qr.matrixQR().topRows(a.cols()).diagonal();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (!(dmax > 0.0) || diag.cwiseAbs().minCoeff() < rank_tol * dmax) {
    throw std::runtime_error(
        "qr: input is rank deficient (smallest |R_ii| = " +
        std::to_string(diag.cwiseAbs().minCoeff()) + ")");
  }
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

}  // namespace detail

// One regression task: m examples (rows of `examples`) with observations.
struct TaskData {
  Matrix examples;       // m x d
  Vector observations;   // m
  int task_id = 0;

  TaskData(Matrix x, Vector y, int id) : examples(std::move(x)), observations(std::move(y)), task_id(id) {
    detail::require(examples.rows() == observations.size(),
                    "TaskData: examples row count must equal observations length");
    detail::require(examples.rows() >= 2,
                    "TaskData: need m >= 2 so both sample halves are non-empty");
  }

  int m() const { return static_cast<int>(examples.rows()); }
  int d() const { return static_cast<int>(examples.cols()); }
};

// A d x r matrix with orthonormal columns. Validated on construction:
// basis' * basis must equal I_r to 1e-10 in max-entry norm.
struct Subspace {
  Matrix basis;

  explicit Subspace(Matrix b) : basis(std::move(b)) {
    detail::require(basis.cols() <= basis.rows(), "Subspace: r must not exceed d");
    detail::require(basis.cols() > 0, "Subspace: empty basis");
    const Matrix gram = basis.transpose() * basis;
    const double dev =
        (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    detail::require(dev <= 1e-10, "Subspace: columns not orthonormal (max deviation " +
                                      std::to_string(dev) + ")");
  }

  int d() const { return static_cast<int>(basis.rows()); }
  int r() const { return static_cast<int>(basis.cols()); }
};

// Per-task low-dimensional regressors, one row per task.
struct RegressorSet {
  Matrix coefficients;  // t x r

  int count() const { return static_cast<int>(coefficients.rows()); }
  int r() const { return static_cast<int>(coefficients.cols()); }
};

struct GroundTruth {
  Subspace u_star;
  RegressorSet v_star;
};

struct ProblemInstance {
  std::vector<TaskData> tasks;
  int ambient_dim = 0;    // d
  int subspace_dim = 0;   // r
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::optional<GroundTruth> ground_truth;

  int t() const { return static_cast<int>(tasks.size()); }
};

// Extreme eigenvalues of the task-diversity matrix (r/t) V'V and the
// incoherence they induce.
struct SpectrumStats {
  double lambda_max = 0.0;       // largest eigenvalue
  double lambda_min = 0.0;       // smallest eigenvalue
  double incoherence_mu = 1.0;   // max_i ||v_i||^2 / lambda_min, >= 1
  double max_row_norm_sq = 0.0;  // max_i ||v_i||^2
};

// View of either half of a task's samples. `full_m` carries the task's total
// sample count so the half covariance S = (2/m) sum_j x_j x_j' normalizes
// against m, not the half size.
struct TaskHalf {
  ConstMatrixRef examples;
  ConstVectorRef observations;
  int full_m;
  int task_id;

  double cov_scale() const { return 2.0 / static_cast<double>(full_m); }
};

// First half gets floor(m/2) samples, second half the remainder; the views
// are disjoint and exhaustive.
inline std::pair<TaskHalf, TaskHalf> split_halves(const TaskData& task) {
  detail::require(task.m() >= 2, "split_halves: need m >= 2");
  const int m = task.m();
  const int h = m / 2;
  return {TaskHalf{task.examples.middleRows(0, h), task.observations.segment(0, h),
                   m, task.task_id},
          TaskHalf{task.examples.middleRows(h, m - h),
                   task.observations.segment(h, m - h), m, task.task_id}};
}

inline std::vector<TaskHalf> first_halves(const std::vector<TaskData>& tasks) {
  std::vector<TaskHalf> out;
  out.reserve(tasks.size());
  for (const auto& task : tasks) out.push_back(split_halves(task).first);
  return out;
}

inline std::vector<TaskHalf> second_halves(const std::vector<TaskData>& tasks) {
  std::vector<TaskHalf> out;
  out.reserve(tasks.size());
  for (const auto& task : tasks) out.push_back(split_halves(task).second);
  return out;
}

// --- synthetic generation -------------------------------------------------

// d x r basis drawn as the sign-normalized QR factor of a Gaussian matrix.
inline Subspace sample_subspace(int d, int r, std::uint64_t seed) {
  detail::require(r >= 1 && r <= d, "sample_subspace: need 1 <= r <= d");
  Matrix g(d, r);
  for (int c = 0; c < r; ++c)
    for (int i = 0; i < d; ++i)
      g(i, c) = rng::gaussian(seed, rng::kStreamSubspace, 0,
                              static_cast<std::uint64_t>(c) * d + i);
  return Subspace(detail::qr_orthonormal_factor(g));
}

inline Vector sample_regressor(int r, std::uint64_t seed, int task_id) {
  Vector v(r);
  for (int k = 0; k < r; ++k)
    v(k) = rng::gaussian(seed, rng::kStreamRegressor,
                         static_cast<std::uint64_t>(task_id), k);
  return v;
}

inline Matrix sample_examples(int m, int d, std::uint64_t seed, int task_id) {
  Matrix x(m, d);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < d; ++k)
      x(j, k) = rng::gaussian(seed, rng::kStreamExample,
                              static_cast<std::uint64_t>(task_id),
                              static_cast<std::uint64_t>(j) * d + k);
  return x;
}

inline Vector sample_noise(int m, double sigma, std::uint64_t seed, int task_id) {
  Vector e(m);
  for (int j = 0; j < m; ++j)
    e(j) = sigma * rng::gaussian(seed, rng::kStreamNoise,
                                 static_cast<std::uint64_t>(task_id), j);
  return e;
}

// Fresh task observing the given true regressor through Gaussian examples.
inline TaskData make_task(const Subspace& u_star, const Vector& v_star, int m,
                          double sigma, std::uint64_t seed, int task_id) {
  detail::require(v_star.size() == u_star.r(), "make_task: regressor length mismatch");
  Matrix x = sample_examples(m, u_star.d(), seed, task_id);
  Vector y = x * (u_star.basis * v_star) + sample_noise(m, sigma, seed, task_id);
  return TaskData(std::move(x), std::move(y), task_id);
}

// Synthetic instance: U* from QR of a Gaussian matrix, v*^(i) ~ N(0, I_r),
// Gaussian examples, N(0, sigma^2) noise. Deterministic in `seed` and
// independent of generation order (all draws are counter-addressed).
inline ProblemInstance generate_instance(int d, int r, int t, int m, double sigma,
                                         std::uint64_t seed) {
  detail::require(d >= 1, "generate_instance: d must be positive");
  detail::require(r >= 1 && r <= d, "generate_instance: need 1 <= r <= d");
  detail::require(t >= 1, "generate_instance: t must be positive");
  detail::require(m >= 2, "generate_instance: need m >= 2 for the sample split");
  detail::require(sigma >= 0.0, "generate_instance: sigma must be nonnegative");

  Subspace u_star = sample_subspace(d, r, seed);
  Matrix v_star(t, r);
  ProblemInstance inst;
  inst.tasks.reserve(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    const Vector v = sample_regressor(r, seed, i);
    v_star.row(i) = v.transpose();
    inst.tasks.push_back(make_task(u_star, v, m, sigma, seed, i));
  }
  inst.ambient_dim = d;
  inst.subspace_dim = r;
  inst.noise_sigma = sigma;
  inst.seed = seed;
  inst.ground_truth = GroundTruth{std::move(u_star), RegressorSet{std::move(v_star)}};
  return inst;
}

// Eigen-extremes of (r/t) V'V and the induced incoherence. A zero smallest
// eigenvalue yields an infinite mu sentinel.
inline SpectrumStats compute_spectrum(const RegressorSet& v, int r, int t) {
  detail::require(v.count() > 0, "compute_spectrum: empty regressor set");
  detail::require(v.r() == r && v.count() == t, "compute_spectrum: shape mismatch");
  const Matrix gram =
      (static_cast<double>(r) / static_cast<double>(t)) *
      (v.coefficients.transpose() * v.coefficients);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  SpectrumStats stats;
  stats.lambda_min = es.eigenvalues().minCoeff();
  stats.lambda_max = es.eigenvalues().maxCoeff();
  stats.max_row_norm_sq = v.coefficients.rowwise().squaredNorm().maxCoeff();
  if (stats.lambda_min > 0.0) {
    // mu >= 1 holds mathematically; the clamp only strips eigensolver dust.
    stats.incoherence_mu = std::max(1.0, stats.max_row_norm_sq / stats.lambda_min);
  } else {
    stats.incoherence_mu = std::numeric_limits<double>::infinity();
  }
  return stats;
}

}  // namespace mllam
