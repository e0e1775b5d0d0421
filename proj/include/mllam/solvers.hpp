// Alternating minimization for a shared linear representation.
//
// Each outer iteration of the plain method (`mllam`):
//   1. per-task least squares on first halves:  v^(i) = argmin ||X1 U v - y1||
//   2. representation update on second halves:  solve A(Uhat) = B, where
//        A(U) = sum_i S2^(i) U v^(i) v^(i)'    (self-adjoint, PSD)
//        B    = sum_i (2/m) X2' y2 v^(i)'
//      with S2^(i) = (2/m) X2' X2 never materialized (matrix-free products)
//   3. U <- QR(Uhat)
// The subset-selecting variant (`mllams`) first drops tasks whose empirical
// Hessian U' S1^(i) U has spectrum outside configured thresholds.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mllam/metrics.hpp"
#include "mllam/model.hpp"
#include "mllam/rng.hpp"

namespace mllam {

enum class TaskSchedule {
  partition,  // fresh disjoint block of tasks per iteration
  reuse_all,  // every task, every iteration
};

enum class USolver { cg, dense };

struct SolverConfig {
  int iterations = 20;  // K
  TaskSchedule schedule = TaskSchedule::reuse_all;
  std::uint64_t shuffle_seed = 0;
  double v_solver_tol = 1e-10;  // relative pseudoinverse cutoff
  USolver u_solver = USolver::cg;
  double cg_tol = 1e-10;  // relative residual target
  int cg_max_iters = 0;   // 0 = auto (10 * d * r)
  double subset_sigma_min = 0.5;
  double subset_sigma_max = 10.0;
  bool use_subset_selection = false;

  void validate() const {
    detail::require(iterations >= 1, "SolverConfig: K must be >= 1");
    detail::require(subset_sigma_min > 0.0 && subset_sigma_min < subset_sigma_max,
                    "SolverConfig: need 0 < subset_sigma_min < subset_sigma_max");
    detail::require(v_solver_tol > 0.0 && cg_tol > 0.0,
                    "SolverConfig: tolerances must be positive");
  }
};

struct FitReport {
  Subspace final_u;
  std::vector<SubspaceError> per_iteration_errors;  // empty without ground truth
  std::vector<int> selected_task_counts;            // block size when selection is off
  std::vector<double> wall_ms;
  std::vector<std::string> warnings;
  std::optional<bool> init_condition_held;  // logged on synthetic instances only
};

// Half-open index range [begin, end).
struct IndexRange {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};

// k-th of K disjoint, exhaustive blocks over t tasks (k is 1-based).
inline IndexRange partition_block(int t, int K, int k) {
  detail::require(K >= 1 && k >= 1 && k <= K, "partition_block: bad k/K");
  const auto lo = static_cast<int>((static_cast<long long>(t) * (k - 1)) / K);
  const auto hi = static_cast<int>((static_cast<long long>(t) * k) / K);
  return {lo, hi};
}

// Least-squares regressor of one task against a frozen representation,
// via SVD pseudoinverse of the (m/2) x r design X1 U. Singular values below
// tol * sigma_max are truncated; rank deficiency yields the minimum-norm
// solution and is reported through `rank_deficient` when requested.
inline Vector v_update(const Subspace& u, const TaskHalf& first_half, double tol,
                       bool* rank_deficient = nullptr) {
  detail::require(first_half.examples.rows() >= 1, "v_update: empty sample half");
  detail::require(first_half.examples.cols() == u.d(), "v_update: dimension mismatch");
  const Matrix design = first_half.examples * u.basis;
  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol);
  if (rank_deficient != nullptr) *rank_deficient = svd.rank() < design.cols();
  return svd.solve(first_half.observations);
}

// A(U_in) = sum_i S2^(i) U_in v^(i) v^(i)', applied matrix-free as
// (2/m) X2' (X2 (U_in v)) v' per task, O(m d + d r) each. Accumulation runs
// in task order so results are independent of any outer parallelism.
inline Matrix apply_A(const Matrix& u_in, std::span<const TaskHalf> seconds,
                      const RegressorSet& v) {
  detail::require(v.count() == static_cast<int>(seconds.size()),
                  "apply_A: regressor rows must align with tasks");
  Matrix out = Matrix::Zero(u_in.rows(), u_in.cols());
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    const TaskHalf& half = seconds[i];
    detail::require(half.examples.cols() == u_in.rows(), "apply_A: dimension mismatch");
    const Vector vi = v.coefficients.row(static_cast<Eigen::Index>(i)).transpose();
    detail::require(vi.size() == u_in.cols(), "apply_A: regressor length mismatch");
    const Vector w = u_in * vi;
    const Vector xw = half.examples * w;
    out.noalias() +=
        (half.cov_scale() * (half.examples.transpose() * xw)) * vi.transpose();
  }
  return out;
}

// Right-hand side of the representation update's normal equations.
inline Matrix assemble_rhs(std::span<const TaskHalf> seconds, const RegressorSet& v) {
  detail::require(!seconds.empty(), "assemble_rhs: need at least one task");
  detail::require(v.count() == static_cast<int>(seconds.size()),
                  "assemble_rhs: regressor rows must align with tasks");
  const auto d = seconds.front().examples.cols();
  Matrix b = Matrix::Zero(d, v.r());
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    const TaskHalf& half = seconds[i];
    detail::require(half.examples.cols() == d,
                    "assemble_rhs: tasks must share the ambient dimension");
    const Vector xy = half.examples.transpose() * half.observations;
    b.noalias() += (half.cov_scale() * xy) *
                   v.coefficients.row(static_cast<Eigen::Index>(i));
  }
  return b;
}

namespace detail {

// Conjugate gradient on the self-adjoint PSD operator A over d x r matrices
// with the trace inner product. Started at zero, so consistent but
// rank-deficient systems converge to the minimum-norm solution.
inline Matrix solve_u_cg(std::span<const TaskHalf> seconds, const RegressorSet& v,
                         const Matrix& b, double tol, int max_iters) {
  const double b_norm = b.norm();
  if (b_norm == 0.0) return Matrix::Zero(b.rows(), b.cols());

  Matrix x = Matrix::Zero(b.rows(), b.cols());
  Matrix res = b;
  Matrix p = res;
  double rs = res.squaredNorm();
  for (int iter = 0; iter < max_iters; ++iter) {
    if (std::sqrt(rs) <= tol * b_norm) return x;
    const Matrix ap = apply_A(p, seconds, v);
    const double p_ap = p.cwiseProduct(ap).sum();
    if (p_ap <= 0.0) {
      // search direction fell into the operator's null space
      if (std::sqrt(rs) <= 1e3 * tol * b_norm) return x;
      throw std::runtime_error(
          "u_update: cg stalled on a null direction, relative residual " +
          std::to_string(std::sqrt(rs) / b_norm));
    }
    const double alpha = rs / p_ap;
    x.noalias() += alpha * p;
    res.noalias() -= alpha * ap;
    const double rs_next = res.squaredNorm();
    p = res + (rs_next / rs) * p;
    rs = rs_next;
  }
  if (std::sqrt(rs) <= tol * b_norm) return x;
  throw std::runtime_error("u_update: cg failed to converge in " +
                           std::to_string(max_iters) + " iterations, relative residual " +
                           std::to_string(std::sqrt(rs) / b_norm));
}

// Oracle path: assemble the dr x dr matrix of A (sum of Kronecker blocks
// G^(i) (x) S2^(i)) and pseudo-solve through its eigendecomposition.
inline Matrix solve_u_dense(std::span<const TaskHalf> seconds, const RegressorSet& v,
                            const Matrix& b, double tol) {
  const auto d = b.rows();
  const auto r = b.cols();
  const auto n = d * r;
  Matrix op = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    const TaskHalf& half = seconds[i];
    const Matrix s =
        half.cov_scale() * (half.examples.transpose() * half.examples);
    const Vector vi = v.coefficients.row(static_cast<Eigen::Index>(i)).transpose();
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index c = 0; c < r; ++c)
        op.block(a * d, c * d, d, d).noalias() += (vi(a) * vi(c)) * s;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(op);
  const Vector evals = es.eigenvalues();
  const double emax = evals.maxCoeff();
  if (!(emax > 0.0)) {
    throw std::runtime_error(
        "u_update: dense system is singular (operator has no positive spectrum)");
  }
  const double cutoff = tol * emax;
  const Vector rhs = Eigen::Map<const Vector>(b.data(), n);
  Vector coeffs = es.eigenvectors().transpose() * rhs;
  for (Eigen::Index i = 0; i < n; ++i)
    coeffs(i) = evals(i) > cutoff ? coeffs(i) / evals(i) : 0.0;
  const Vector solution = es.eigenvectors() * coeffs;
  return Eigen::Map<const Matrix>(solution.data(), d, r);
}

}  // namespace detail

// Representation update: solves the normal equations A(Uhat) = B of
//   argmin_U sum_i sum_{j in second half} (y_j - <U v^(i), x_j>)^2.
inline Matrix u_update(std::span<const TaskHalf> seconds, const RegressorSet& v,
                       const SolverConfig& cfg) {
  detail::require(!seconds.empty(), "u_update: need at least one task");
  detail::require(v.count() == static_cast<int>(seconds.size()),
                  "u_update: regressor rows must align with tasks");
  const Matrix b = assemble_rhs(seconds, v);
  if (cfg.u_solver == USolver::dense) {
    return detail::solve_u_dense(seconds, v, b, cfg.v_solver_tol);
  }
  const int max_iters = cfg.cg_max_iters > 0
                            ? cfg.cg_max_iters
                            : 10 * static_cast<int>(b.rows() * b.cols());
  return detail::solve_u_cg(seconds, v, b, cfg.cg_tol, max_iters);
}

// Orthonormalize while preserving span; R-diagonal sign convention makes the
// result reproducible. Rank-deficient input signals divergence and throws.
inline Subspace qr_step(const Matrix& u_hat) {
  return Subspace(detail::qr_orthonormal_factor(u_hat));
}

// Tasks of `block` whose empirical Hessian U' S1^(i) U has all eigenvalues
// within [subset_sigma_min, subset_sigma_max]. An empty result is legal.
inline std::vector<int> select_tasks(const Subspace& u,
                                     std::span<const TaskHalf> firsts,
                                     IndexRange block, const SolverConfig& cfg) {
  detail::require(block.begin >= 0 && block.end <= static_cast<int>(firsts.size()),
                  "select_tasks: block out of range");
  std::vector<int> kept;
  kept.reserve(static_cast<std::size_t>(block.size()));
  for (int i = block.begin; i < block.end; ++i) {
    const TaskHalf& half = firsts[static_cast<std::size_t>(i)];
    detail::require(half.examples.cols() == u.d(),
                    "select_tasks: dimension mismatch");
    const Matrix design = half.examples * u.basis;
    const Matrix hess = half.cov_scale() * (design.transpose() * design);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hess, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() >= cfg.subset_sigma_min &&
        es.eigenvalues().maxCoeff() <= cfg.subset_sigma_max) {
      kept.push_back(i);
    }
  }
  return kept;
}

// Empirical risk sum_i sum_j (1/2) (y_j - <U v^(i), x_j>)^2 over the given
// sample views, with V rows aligned to the views.
inline double empirical_risk(std::span<const TaskHalf> halves, const Matrix& u,
                             const Matrix& v) {
  detail::require(v.rows() == static_cast<Eigen::Index>(halves.size()),
                  "empirical_risk: regressor rows must align with tasks");
  detail::require(v.cols() == u.cols(), "empirical_risk: rank mismatch");
  double risk = 0.0;
  for (std::size_t i = 0; i < halves.size(); ++i) {
    detail::require(halves[i].examples.cols() == u.rows(),
                    "empirical_risk: dimension mismatch");
    const Vector w = u * v.row(static_cast<Eigen::Index>(i)).transpose();
    risk += 0.5 * (halves[i].observations - halves[i].examples * w).squaredNorm();
  }
  return risk;
}

// Theory-guided iteration count ceil(log2(l_r^2 m t / (l_1 s^2 mu d r^2))),
// clamped to [1, 64]; the noiseless limit maps to the clamp maximum.
inline int default_K(double lambda_max, double lambda_min, double sigma, double mu,
                     int d, int r, int m, int t) {
  detail::require(lambda_max > 0.0 && lambda_min > 0.0 && mu > 0.0,
                  "default_K: spectrum inputs must be positive");
  detail::require(d >= 1 && r >= 1 && m >= 1 && t >= 1,
                  "default_K: dimensions must be positive");
  if (sigma <= 0.0) return 64;
  const double arg = (lambda_min * lambda_min * static_cast<double>(m) * t) /
                     (lambda_max * sigma * sigma * mu * static_cast<double>(d) *
                      static_cast<double>(r) * r);
  if (!std::isfinite(arg) || arg <= 0.0) return 1;
  const double k = std::ceil(std::log2(arg));
  return static_cast<int>(std::clamp(k, 1.0, 64.0));
}

// Full alternating-minimization run. Tasks are shuffled once; each iteration
// works either on a fresh block (partition) or on all tasks (reuse_all),
// optionally restricted to well-conditioned tasks (subset selection). An
// empty active set skips the iteration and leaves U unchanged.
inline FitReport fit(const ProblemInstance& instance, const Subspace& u_init,
                     const SolverConfig& cfg) {
  cfg.validate();
  detail::require(instance.t() >= 1, "fit: instance has no tasks");
  detail::require(u_init.d() == instance.ambient_dim &&
                      u_init.r() == instance.subspace_dim,
                  "fit: U_init shape must be d x r");

  const int t = instance.t();
  for (const auto& task : instance.tasks) {
    detail::require(task.d() == instance.ambient_dim,
                    "fit: all tasks must share the declared ambient dimension");
  }
  const int k_total = cfg.iterations;
  const std::vector<int> order = rng::shuffled_indices(t, cfg.shuffle_seed);

  std::vector<TaskHalf> firsts;
  std::vector<TaskHalf> seconds;
  firsts.reserve(static_cast<std::size_t>(t));
  seconds.reserve(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    auto halves = split_halves(instance.tasks[static_cast<std::size_t>(order[i])]);
    firsts.push_back(halves.first);
    seconds.push_back(halves.second);
  }

  std::optional<SpectrumStats> spectrum;
  if (instance.ground_truth.has_value()) {
    spectrum = compute_spectrum(instance.ground_truth->v_star,
                                instance.subspace_dim, t);
  }

  FitReport report{u_init, {}, {}, {}, {}, std::nullopt};
  if (instance.ground_truth.has_value() && spectrum->lambda_max > 0.0) {
    const double init_err =
        subspace_error(u_init, instance.ground_truth->u_star).frob;
    report.init_condition_held =
        init_err <= std::min(0.75, std::sqrt(spectrum->lambda_min /
                                             spectrum->lambda_max));
  }

  Subspace u = u_init;
  int rank_deficient_updates = 0;
  for (int k = 1; k <= k_total; ++k) {
    const auto started = std::chrono::steady_clock::now();
    const IndexRange block = cfg.schedule == TaskSchedule::partition
                                 ? partition_block(t, k_total, k)
                                 : IndexRange{0, t};
    std::vector<int> active;
    if (cfg.use_subset_selection) {
      active = select_tasks(u, firsts, block, cfg);
    } else {
      active.resize(static_cast<std::size_t>(block.size()));
      for (int i = 0; i < block.size(); ++i)
        active[static_cast<std::size_t>(i)] = block.begin + i;
    }
    report.selected_task_counts.push_back(static_cast<int>(active.size()));

    if (active.empty()) {
      report.warnings.push_back("iteration " + std::to_string(k) +
                                ": no active tasks, U left unchanged");
    } else {
      RegressorSet v{Matrix(static_cast<Eigen::Index>(active.size()),
                            instance.subspace_dim)};
      std::vector<TaskHalf> active_seconds;
      active_seconds.reserve(active.size());
      for (std::size_t i = 0; i < active.size(); ++i) {
        bool deficient = false;
        v.coefficients.row(static_cast<Eigen::Index>(i)) =
            v_update(u, firsts[static_cast<std::size_t>(active[i])],
                     cfg.v_solver_tol, &deficient)
                .transpose();
        if (deficient) ++rank_deficient_updates;
        active_seconds.push_back(seconds[static_cast<std::size_t>(active[i])]);
      }
      u = qr_step(u_update(active_seconds, v, cfg));
    }

    if (instance.ground_truth.has_value()) {
      report.per_iteration_errors.push_back(
          subspace_error(u, instance.ground_truth->u_star));
    }
    report.wall_ms.push_back(
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count());
  }
  if (rank_deficient_updates > 0) {
    report.warnings.push_back(std::to_string(rank_deficient_updates) +
                              " rank-deficient v-updates handled by pseudoinverse");
  }
  report.final_u = u;
  return report;
}

}  // namespace mllam
