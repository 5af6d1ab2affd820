#include "omptk/omp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omptk {

namespace {

/// One pursuit step: ratios for every column against the current residual.
/// Returns false (and leaves ratios untouched) when the residual is
/// numerically zero.
bool selection_ratios(const Matrix& a, const Vector& residual, double y_energy,
                      Vector& ratios) {
  const double energy = residual.squaredNorm();
  if (energy <= kZeroResidualEnergyFrac * y_energy) return false;
  ratios.noalias() = a.transpose() * residual;
  ratios = ratios.array().square() / energy;
  return true;
}

int argmax_lowest(const Vector& values) {
  int best = 0;
  for (int j = 1; j < values.size(); ++j)
    if (values(j) > values(best)) best = j;
  return best;
}

}  // namespace

OmpTrace greedy_path(const ProblemInstance& instance, int max_selections) {
  const Matrix& a = instance.a;
  const double y_energy = instance.y.squaredNorm();
  ProjectionState state(instance.y);
  OmpTrace trace;
  Vector ratios(a.cols());
  for (int t = 0;; ++t) {
    if (t >= max_selections) {
      trace.stop_reason = StopReason::max_iterations;
      return trace;
    }
    const double energy = state.residual().squaredNorm();
    if (!selection_ratios(a, state.residual(), y_energy, ratios)) {
      trace.stop_reason = StopReason::zero_residual;
      return trace;
    }
    const int pick = argmax_lowest(ratios);
    trace.iterations.push_back({t, pick, ratios(pick), energy});
    state.append(a.col(pick), pick);
  }
}

RecoveryResult run_omp(const ProblemInstance& instance, double mu,
                       int max_iter) {
  if (!(mu > 0.0)) throw std::invalid_argument("run_omp requires mu > 0");
  if (max_iter == 0) max_iter = instance.m();
  if (max_iter < 1) throw std::invalid_argument("run_omp requires max_iter >= 1");

  const Matrix& a = instance.a;
  const double y_energy = instance.y.squaredNorm();
  ProjectionState state(instance.y);
  RecoveryResult result;
  Vector ratios(a.cols());
  for (int t = 0;; ++t) {
    const double energy = state.residual().squaredNorm();
    if (!selection_ratios(a, state.residual(), y_energy, ratios)) {
      result.trace.stop_reason = StopReason::zero_residual;
      break;
    }
    const int pick = argmax_lowest(ratios);
    const double rho_star = ratios(pick);
    if (!(rho_star > mu)) {
      result.trace.stop_reason = StopReason::threshold;
      result.trace.final_rho_star = rho_star;
      break;
    }
    if (t >= max_iter) {
      result.trace.stop_reason = StopReason::max_iterations;
      break;
    }
    result.trace.iterations.push_back({t, pick, rho_star, energy});
    state.append(a.col(pick), pick);
  }
  result.support = state.selected();
  std::sort(result.support.begin(), result.support.end());
  return result;
}

GenieResult run_genie(const ProblemInstance& instance) {
  const Matrix& a = instance.a;
  const int n = instance.n();
  const int k = instance.k();
  const double y_energy = instance.y.squaredNorm();

  GenieResult genie;
  genie.support = instance.signal.support;
  std::vector<char> on_support(static_cast<std::size_t>(n), 0);
  for (int j : genie.support) on_support[static_cast<std::size_t>(j)] = 1;

  ProjectionState state(instance.y);
  genie.rho_table = Matrix::Zero(k + 1, n);
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  Vector ratios(n);
  for (int t = 0; t <= k; ++t) {
    const double energy = state.residual().squaredNorm();
    if (selection_ratios(a, state.residual(), y_energy, ratios))
      genie.rho_table.row(t) = ratios.transpose();
    // else the row stays zero: a zero residual has no energy anywhere.
    if (t == k) break;
    int pick = -1;
    for (int j : genie.support) {
      if (picked[static_cast<std::size_t>(j)]) continue;
      if (pick < 0 || genie.rho_table(t, j) > genie.rho_table(t, pick)) pick = j;
    }
    if (pick < 0 || !on_support[static_cast<std::size_t>(pick)])
      throw GenieFailure("selection left the true support");
    picked[static_cast<std::size_t>(pick)] = 1;
    genie.trace.iterations.push_back({t, pick, genie.rho_table(t, pick), energy});
    state.append(a.col(pick), pick);
  }
  genie.trace.stop_reason = StopReason::max_iterations;

  genie.md_stat = std::numeric_limits<double>::infinity();
  for (int t = 0; t < k; ++t) {
    double best = 0.0;
    for (int j : genie.support) best = std::max(best, genie.rho_table(t, j));
    genie.md_stat = std::min(genie.md_stat, best);
  }
  genie.fa_stat = 0.0;
  for (int t = 0; t <= k; ++t)
    for (int j = 0; j < n; ++j)
      if (!on_support[static_cast<std::size_t>(j)])
        genie.fa_stat = std::max(genie.fa_stat, genie.rho_table(t, j));
  return genie;
}

EventFlags check_events(const GenieResult& genie, double mu) {
  return {genie.md_stat <= mu, genie.fa_stat >= mu};
}

Vector debias(const ProblemInstance& instance,
              const std::vector<int>& support) {
  const auto count = static_cast<Eigen::Index>(support.size());
  if (count > instance.m())
    throw std::invalid_argument("debias requires |support| <= m");
  Vector x_hat = Vector::Zero(instance.n());
  if (count == 0) return x_hat;
  Matrix phi(instance.m(), count);
  for (Eigen::Index i = 0; i < count; ++i)
    phi.col(i) = instance.a.col(support[static_cast<std::size_t>(i)]);
  Eigen::ColPivHouseholderQR<Matrix> qr(phi);
  qr.setThreshold(kRankTol);
  if (qr.rank() < count)
    throw RankDeficient("debias: selected columns are rank deficient");
  const Vector coeffs = qr.solve(instance.y);
  for (Eigen::Index i = 0; i < count; ++i)
    x_hat(support[static_cast<std::size_t>(i)]) = coeffs(i);
  return x_hat;
}

}  // namespace omptk
