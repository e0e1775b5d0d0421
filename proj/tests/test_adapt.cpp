#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mllam/adapt.hpp"
#include "mllam/init.hpp"
#include "mllam/metrics.hpp"
#include "mllam/model.hpp"

using namespace mllam;

namespace {

// Copy of U* with its first column tilted by angle asin(delta) towards a
// direction orthogonal to span(U*); the subspace error is exactly delta.
Subspace tilted_subspace(const Subspace& u_star, double delta, std::uint64_t seed) {
  Vector w(u_star.d());
  for (int i = 0; i < u_star.d(); ++i) w(i) = rng::gaussian(seed, 71, i, 0);
  w -= u_star.basis * (u_star.basis.transpose() * w);
  w.normalize();
  Matrix basis = u_star.basis;
  basis.col(0) = std::sqrt(1.0 - delta * delta) * basis.col(0) + delta * w;
  return Subspace(basis);
}

}  // namespace

TEST_SUITE("adapt") {

TEST_CASE("noiseless adaptation on the true subspace is exact") {
  const Subspace u_star = random_init(10, 3, 2);
  for (int m_plus : {3, 5, 20}) {
    const Vector v_star = sample_regressor(3, 90, m_plus);
    const TaskData task = make_task(u_star, v_star, m_plus, 0.0, 91, m_plus);
    const AdaptedRegressor reg = adapt(u_star, task);
    CHECK(reg.n_samples_used == m_plus);
    CHECK((reg.coeffs - v_star).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(regressor_mse(reg.subspace, reg.coeffs, u_star, v_star) < 1e-18);
  }
}

TEST_CASE("adaptation with a single sample uses the raw overload") {
  const Subspace u_star = random_init(6, 2, 12);
  const Matrix x = sample_examples(1, 6, 14, 0);
  const Vector y = x * (u_star.basis * Vector::Ones(2));
  const AdaptedRegressor reg = adapt(u_star, x, y);
  CHECK(reg.n_samples_used == 1);
  // underdetermined: still interpolates
  CHECK(((x * u_star.basis) * reg.coeffs - y).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero samples are rejected") {
  const Subspace u = random_init(5, 2, 1);
  CHECK_THROWS_AS(adapt(u, Matrix(0, 5), Vector(0)), std::invalid_argument);
}

TEST_CASE("adaptation error scales quadratically with the subspace error") {
  const Subspace u_star = random_init(16, 3, 40);
  const std::vector<double> deltas = {1e-3, 1e-2, 1e-1};
  std::vector<double> ratios;
  for (double delta : deltas) {
    const Subspace u = tilted_subspace(u_star, delta, 41);
    CHECK(subspace_error(u, u_star).frob == doctest::Approx(delta).epsilon(1e-8));
    double mse_sum = 0.0;
    double v_norm_sq_sum = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
      const Vector v_star = sample_regressor(3, 42, rep);
      const TaskData task = make_task(u_star, v_star, 200, 0.0, 43, rep);
      const AdaptedRegressor reg = adapt(u, task);
      mse_sum += regressor_mse(reg.subspace, reg.coeffs, u_star, v_star);
      v_norm_sq_sum += v_star.squaredNorm();
    }
    ratios.push_back(mse_sum / (delta * delta * v_norm_sq_sum));
  }
  // mse <= c * delta^2 ||v*||^2 with a stable constant across three decades
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(hi > 0.0);
  CHECK(hi / lo < 4.0);
}

TEST_CASE("mean adaptation mse decreases with the shot count") {
  const Subspace u_star = random_init(20, 2, 77);
  const Subspace u = tilted_subspace(u_star, 0.01, 78);
  std::vector<double> means;
  for (int m_plus : {2, 4, 8, 16}) {
    double total = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const Vector v_star = sample_regressor(2, 80, rep);
      const TaskData task =
          make_task(u_star, v_star, m_plus, 0.1, 81 + m_plus, rep);
      const AdaptedRegressor reg = adapt(u, task);
      total += regressor_mse(reg.subspace, reg.coeffs, u_star, v_star);
    }
    means.push_back(total / 200.0);
  }
  for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] < means[i - 1]);
}

TEST_CASE("prediction") {
  const Subspace u = random_init(7, 2, 5);
  Vector v(2);
  v << 1.5, -0.5;
  const AdaptedRegressor reg{u, v, 4};

  CHECK(predict(reg, Vector::Zero(7)) == 0.0);

  const Vector full = u.basis * v;
  CHECK(predict(reg, full) == doctest::Approx(full.squaredNorm()).epsilon(1e-12));

  // naive-loop oracle
  const Vector x = sample_examples(1, 7, 9, 0).row(0).transpose();
  double naive = 0.0;
  for (int i = 0; i < 7; ++i) naive += x(i) * full(i);
  CHECK(predict(reg, x) == doctest::Approx(naive).epsilon(1e-12));

  CHECK_THROWS_AS(predict(reg, Vector::Zero(6)), std::invalid_argument);
}

}  // TEST_SUITE
