#include "omptk/lasso.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "omptk/errors.hpp"
#include "omptk/parallel.hpp"
#include "omptk/rng.hpp"

namespace omptk {

void LassoConfig::validate() const {
  if (!(penalty > 0.0)) throw ConfigInvalid("lasso penalty must be positive");
  if (!(tol > 0.0)) throw ConfigInvalid("lasso tol must be positive");
  if (max_sweeps < 1) throw ConfigInvalid("lasso max_sweeps must be >= 1");
}

double lasso_objective(const Matrix& a, const Vector& y, const Vector& v,
                       double penalty) {
  return (y - a * v).squaredNorm() + penalty * v.lpNorm<1>();
}

namespace {

double soft_threshold(double z, double level) {
  if (z > level) return z - level;
  if (z < -level) return z + level;
  return 0.0;
}

}  // namespace

LassoResult fit_lasso(const Matrix& a, const Vector& y,
                      const LassoConfig& config, const Vector* warm_start) {
  config.validate();
  const auto n = a.cols();
  LassoResult result;
  result.x_hat = warm_start ? *warm_start : Vector::Zero(n);

  Vector col_energy(n);
  for (Eigen::Index j = 0; j < n; ++j) col_energy(j) = a.col(j).squaredNorm();

  // Residual r = y - A v, maintained incrementally.
  Vector r = y - a * result.x_hat;
  const double shrink = config.penalty / 2.0;
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (col_energy(j) <= 0.0) continue;
      const double old = result.x_hat(j);
      const double corr = a.col(j).dot(r) + col_energy(j) * old;
      const double next = soft_threshold(corr, shrink) / col_energy(j);
      if (next != old) {
        r -= (next - old) * a.col(j);
        result.x_hat(j) = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    result.sweeps = sweep;
    if (max_change < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.objective = lasso_objective(a, y, result.x_hat, config.penalty);
  for (Eigen::Index j = 0; j < n; ++j)
    if (result.x_hat(j) != 0.0) result.support.push_back(static_cast<int>(j));
  return result;
}

LassoResult fit_lasso(const ProblemInstance& instance,
                      const LassoConfig& config) {
  return fit_lasso(instance.a, instance.y, config);
}

PenaltyRule PenaltyRule::fixed(double penalty) {
  PenaltyRule rule;
  rule.kind = Kind::fixed;
  rule.fixed_penalty = penalty;
  return rule;
}

PenaltyRule PenaltyRule::oracle_grid() { return PenaltyRule{}; }

namespace {

bool support_matches(const Vector& x_hat, const std::vector<int>& truth) {
  const double floor = 1e-8 * x_hat.cwiseAbs().maxCoeff();
  std::vector<int> found;
  for (Eigen::Index j = 0; j < x_hat.size(); ++j)
    if (std::abs(x_hat(j)) > floor) found.push_back(static_cast<int>(j));
  return found == truth;
}

bool trial_recovers(const ProblemInstance& instance, const PenaltyRule& rule) {
  LassoConfig config;
  config.max_sweeps = 2000;
  config.tol = 1e-9;
  if (rule.kind == PenaltyRule::Kind::fixed) {
    config.penalty = rule.fixed_penalty;
    const LassoResult fit = fit_lasso(instance, config);
    return support_matches(fit.x_hat, instance.signal.support);
  }
  const double p_max =
      2.0 * (instance.a.transpose() * instance.y).cwiseAbs().maxCoeff();
  if (!(p_max > 0.0)) return false;
  const double hi = 0.9 * p_max;
  const double lo = rule.grid_span * p_max;
  Vector warm = Vector::Zero(instance.n());
  for (int g = 0; g < rule.grid_size; ++g) {
    const double frac = rule.grid_size == 1
                            ? 0.0
                            : static_cast<double>(g) / (rule.grid_size - 1);
    config.penalty = hi * std::pow(lo / hi, frac);
    const LassoResult fit = fit_lasso(instance.a, instance.y, config, &warm);
    warm = fit.x_hat;
    if (support_matches(fit.x_hat, instance.signal.support)) return true;
  }
  return false;
}

}  // namespace

double lasso_support_recovery_rate(const SignalSpec& spec, int m,
                                   const PenaltyRule& rule, int trials,
                                   std::uint64_t seed, int threads) {
  if (trials < 1) throw ConfigInvalid("trials must be >= 1");
  std::atomic<long> successes{0};
  parallel_chunks(trials, threads, 4, [&](std::int64_t begin, std::int64_t end) {
    long local = 0;
    for (std::int64_t trial = begin; trial < end; ++trial) {
      const ProblemInstance instance = generate_instance(
          spec, m, derive_seed(seed, static_cast<std::uint64_t>(trial)));
      if (trial_recovers(instance, rule)) ++local;
    }
    successes += local;
  });
  return static_cast<double>(successes.load()) / trials;
}

}  // namespace omptk
