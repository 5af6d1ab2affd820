#pragma once

#include <cstdint>
#include <vector>

#include "omptk/linalg.hpp"
#include "omptk/model.hpp"

namespace omptk {

/// Coordinate-descent settings for the l1-penalized least squares baseline
/// with objective ||y - A v||^2 + penalty * ||v||_1.
struct LassoConfig {
  double penalty = 0.0;
  int max_sweeps = 1000;
  double tol = 1e-8;  // max coordinate change per sweep at convergence

  void validate() const;  // throws ConfigInvalid
};

struct LassoResult {
  Vector x_hat;
  std::vector<int> support;  // exact nonzeros, sorted
  bool converged = false;
  int sweeps = 0;
  double objective = 0.0;
};

/// Cyclic coordinate descent from a zero (or warm) start.
LassoResult fit_lasso(const Matrix& a, const Vector& y,
                      const LassoConfig& config,
                      const Vector* warm_start = nullptr);
LassoResult fit_lasso(const ProblemInstance& instance,
                      const LassoConfig& config);

double lasso_objective(const Matrix& a, const Vector& y, const Vector& v,
                       double penalty);

/// Penalty selection for support-recovery experiments.
struct PenaltyRule {
  enum class Kind { fixed, oracle_grid };
  Kind kind = Kind::oracle_grid;
  double fixed_penalty = 0.0;
  /// oracle_grid: per instance, a descending geometric grid of grid_size
  /// penalties spanning [grid_span * p_max, 0.9 * p_max] is tried with warm
  /// starts, where p_max = 2*||A'y||_inf is the smallest penalty with an
  /// all-zero solution; the trial succeeds if any grid point recovers the
  /// exact support.
  int grid_size = 20;
  double grid_span = 1e-4;

  static PenaltyRule fixed(double penalty);
  static PenaltyRule oracle_grid();
};

/// Fraction of trials whose recovered support (after discarding coordinates
/// below 1e-8 * max|x_hat|) equals the true support.
double lasso_support_recovery_rate(const SignalSpec& spec, int m,
                                   const PenaltyRule& rule, int trials,
                                   std::uint64_t seed, int threads = 0);

}  // namespace omptk
