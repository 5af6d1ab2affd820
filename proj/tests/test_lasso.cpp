#include <doctest.h>

#include <cmath>

#include "omptk/lasso.hpp"
#include "omptk/rng.hpp"
#include "omptk/threshold.hpp"
#include "support/random.hpp"

using namespace omptk;
using namespace omptk::testing;

namespace {

/// Proximal-gradient reference solver for the same objective; an independent
/// algorithmic route used purely as a test oracle.
Vector ista_reference(const Matrix& a, const Vector& y, double penalty,
                      int iterations) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const double sigma_max = svd.singularValues()(0);
  const double step = 0.99 / (2.0 * sigma_max * sigma_max);
  Vector v = Vector::Zero(a.cols());
  for (int it = 0; it < iterations; ++it) {
    const Vector grad = 2.0 * (a.transpose() * (a * v - y));
    Vector z = v - step * grad;
    const double level = step * penalty;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (z(j) > level)
        z(j) -= level;
      else if (z(j) < -level)
        z(j) += level;
      else
        z(j) = 0.0;
    }
    v = z;
  }
  return v;
}

}  // namespace

TEST_CASE("orthogonal design soft-thresholds") {
  Matrix a = Matrix::Identity(2, 2);
  Vector y(2);
  y << 3.0, 0.5;
  LassoConfig config;
  config.penalty = 1.0;
  const LassoResult fit = fit_lasso(a, y, config);
  CHECK(fit.converged);
  CHECK(fit.x_hat(0) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(fit.x_hat(1) == 0.0);
  CHECK(fit.support == std::vector<int>{0});
}

TEST_CASE("vanishing penalty approaches least squares") {
  Rng rng(7);
  const Matrix a = gaussian_matrix(12, 6, rng);
  const Vector y = gaussian_vector(12, rng);
  LassoConfig config;
  config.penalty = 1e-10;
  config.tol = 1e-12;
  config.max_sweeps = 20000;
  const LassoResult fit = fit_lasso(a, y, config);
  const Vector ls = a.colPivHouseholderQr().solve(y);
  CHECK((fit.x_hat - ls).cwiseAbs().maxCoeff() <= 10 * config.tol + 1e-9);
}

TEST_CASE("objective matches an independent solver") {
  Rng rng(17);
  const Matrix a = gaussian_matrix(12, 8, rng);
  const Vector y = gaussian_vector(12, rng);
  const double penalty = 0.7;
  LassoConfig config;
  config.penalty = penalty;
  config.tol = 1e-11;
  config.max_sweeps = 50000;
  const LassoResult fit = fit_lasso(a, y, config);
  const Vector reference = ista_reference(a, y, penalty, 200000);
  const double ref_obj = lasso_objective(a, y, reference, penalty);
  CHECK(std::abs(fit.objective - ref_obj) <= 1e-6);
}

TEST_CASE("objective never increases across sweeps") {
  Rng rng(27);
  const Matrix a = gaussian_matrix(15, 10, rng);
  const Vector y = gaussian_vector(15, rng);
  LassoConfig config;
  config.penalty = 0.4;
  config.tol = 0.0 + 1e-16;
  double previous = lasso_objective(a, y, Vector::Zero(10), config.penalty);
  for (int sweeps = 1; sweeps <= 12; ++sweeps) {
    config.max_sweeps = sweeps;  // cyclic CD prefixes are nested
    const LassoResult fit = fit_lasso(a, y, config);
    CHECK(fit.objective <= previous + 1e-12 * std::max(1.0, previous));
    previous = fit.objective;
  }
}

TEST_CASE("KKT conditions hold at convergence") {
  Rng rng(37);
  const Matrix a = gaussian_matrix(30, 12, rng, 1.0 / std::sqrt(30.0));
  const Vector y = gaussian_vector(30, rng);
  LassoConfig config;
  config.penalty = 0.08;
  config.tol = 1e-10;
  config.max_sweeps = 100000;
  const LassoResult fit = fit_lasso(a, y, config);
  REQUIRE(fit.converged);
  const Vector grad = 2.0 * (a.transpose() * (a * fit.x_hat - y));
  for (Eigen::Index j = 0; j < 12; ++j) {
    const double col_norm = a.col(j).norm();
    if (fit.x_hat(j) != 0.0) {
      const double sign = fit.x_hat(j) > 0 ? 1.0 : -1.0;
      CHECK(std::abs(grad(j) + config.penalty * sign) <=
            10 * config.tol * col_norm + 1e-12);
    } else {
      CHECK(std::abs(grad(j)) <= config.penalty + 10 * config.tol);
    }
  }
}

TEST_CASE("unconverged fits are flagged") {
  Rng rng(47);
  const Matrix a = gaussian_matrix(20, 15, rng);
  const Vector y = gaussian_vector(20, rng);
  LassoConfig config;
  config.penalty = 0.01;
  config.tol = 1e-14;
  config.max_sweeps = 1;
  const LassoResult fit = fit_lasso(a, y, config);
  CHECK_FALSE(fit.converged);
  CHECK(fit.sweeps == 1);
}

TEST_CASE("recovery rate with generous measurements") {
  const int k = 5, n = 100;
  const int m = static_cast<int>(std::ceil(m_tropp_gilbert(k, n)));
  const SignalSpec spec = SignalSpec::equal_mode(n, k, 1.0, NoiseKind::noiseless);
  const double rate = lasso_support_recovery_rate(
      spec, m, PenaltyRule::oracle_grid(), 100, 99);
  CHECK(rate >= 0.9);
}

TEST_CASE("recovery fails when m equals k") {
  const SignalSpec spec = SignalSpec::equal_mode(100, 5, 1.0, NoiseKind::noiseless);
  const double rate = lasso_support_recovery_rate(
      spec, 5, PenaltyRule::oracle_grid(), 50, 123);
  CHECK(rate <= 0.1);
}

TEST_CASE("single-trial rates are reproducible") {
  const SignalSpec spec = SignalSpec::equal_mode(40, 3, 1.0, NoiseKind::noiseless);
  const double first = lasso_support_recovery_rate(
      spec, 30, PenaltyRule::oracle_grid(), 1, 5);
  const double second = lasso_support_recovery_rate(
      spec, 30, PenaltyRule::oracle_grid(), 1, 5);
  CHECK(first == second);
  CHECK((first == 0.0 || first == 1.0));
}
