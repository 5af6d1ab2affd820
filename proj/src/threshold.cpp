#include "omptk/threshold.hpp"

#include <cmath>
#include <stdexcept>

#include "omptk/errors.hpp"

namespace omptk {

double m_theory(int k, int n) {
  if (k < 1 || k >= n) throw std::invalid_argument("m_theory requires 1 <= k < n");
  return 2.0 * k * std::log(static_cast<double>(n - k));
}

double m_tropp_gilbert(int k, int n) {
  if (k < 1 || n < 2)
    throw std::invalid_argument("m_tropp_gilbert requires k >= 1, n >= 2");
  return 4.0 * k * std::log(static_cast<double>(n));
}

double m_donoho_tanner(int k, double m_current, int n) {
  if (k < 1 || m_current < 1.0 || m_current > n)
    throw std::invalid_argument("m_donoho_tanner requires 1 <= m_current <= n");
  return 2.0 * k * std::log(static_cast<double>(n) / m_current);
}

double m_donoho_tanner_fixed_point(int k, int n) {
  double m = 2.0 * k * std::log(static_cast<double>(n));
  for (int step = 0; step < 200; ++step) {
    if (!(m > 0.0) || m >= n) throw NoFixedPoint("iterate left (0, n)");
    const double next = 2.0 * k * std::log(static_cast<double>(n) / m);
    if (std::abs(next - m) <= 1e-12 * std::max(1.0, std::abs(next))) return next;
    m = next;
  }
  throw NoFixedPoint("no convergence in 200 steps");
}

ThresholdPlan make_plan(int m, int n, int k_min, int k_max, bool force) {
  if (k_min < 1 || k_min > k_max || 2 * k_max >= n)
    throw std::invalid_argument("make_plan requires 1 <= k_min <= k_max < n/2");
  if (m < 1) throw std::invalid_argument("make_plan requires m >= 1");
  ThresholdPlan plan;
  plan.m = m;
  plan.n = n;
  plan.k_min = k_min;
  plan.k_max = k_max;
  const double log_term = std::log(static_cast<double>(n - k_min));
  plan.delta = static_cast<double>(m) / (2.0 * k_max * log_term) - 1.0;
  if (plan.delta <= 0.0) {
    if (!force)
      throw BelowScaling("m is at or below 2*k_max*ln(n - k_min)");
    plan.epsilon = 0.01;
    plan.reliable = false;
  } else {
    plan.epsilon = std::sqrt(1.0 + plan.delta) - 1.0;
  }
  plan.mu = (2.0 * (1.0 + plan.epsilon) / m) * log_term;
  return plan;
}

}  // namespace omptk
