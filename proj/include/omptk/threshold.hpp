#pragma once

namespace omptk {

/// Stopping-threshold plan derived from the measurement scaling law.
/// All logarithms are natural.
struct ThresholdPlan {
  int m = 0;
  int n = 0;
  int k_min = 0;
  int k_max = 0;
  double delta = 0.0;    // measurement surplus: m = (1+delta)*2*k_max*ln(n-k_min)
  double epsilon = 0.0;  // largest value with (1+delta)/(1+epsilon) >= 1+epsilon
  double mu = 0.0;       // threshold level: (2*(1+epsilon)/m)*ln(n-k_min)
  bool reliable = true;  // false when forced below the scaling law
};

/// Measurement curve 2*k*ln(n-k), the delta = 0 boundary of the scaling law.
double m_theory(int k, int n);

/// Reference curve 4*k*ln(n).
double m_tropp_gilbert(int k, int n);

/// Reference scaling 2*k*ln(n/m_current). Self-referential; plotted via the
/// fixed point below. Non-normative overlay only.
double m_donoho_tanner(int k, double m_current, int n);

/// Solves m = 2*k*ln(n/m) by fixed-point iteration.
/// Throws NoFixedPoint after 200 steps without convergence.
double m_donoho_tanner_fixed_point(int k, int n);

/// Builds the threshold plan for measurements m, dimension n and sparsity
/// range [k_min, k_max]. Throws BelowScaling when m is at or below the
/// scaling law, unless force is set, in which case epsilon is clamped to
/// 0.01 and the plan is marked unreliable.
ThresholdPlan make_plan(int m, int n, int k_min, int k_max, bool force = false);

}  // namespace omptk
