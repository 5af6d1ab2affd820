#pragma once

#include <optional>
#include <vector>

#include "omptk/linalg.hpp"
#include "omptk/model.hpp"

namespace omptk {

/// Fraction of the initial measurement energy below which the residual is
/// treated as exactly zero and the pursuit stops.
inline constexpr double kZeroResidualEnergyFrac = 1e-14;

enum class StopReason { threshold, zero_residual, max_iterations };

struct OmpIteration {
  int t = 0;                     // iteration counter, 0-based
  int index = 0;                 // selected column
  double rho_star = 0.0;         // winning selection ratio
  double residual_norm_sq = 0.0; // energy of the residual the ratio used
};

struct OmpTrace {
  std::vector<OmpIteration> iterations;  // one record per accepted selection
  StopReason stop_reason = StopReason::threshold;
  /// The sub-threshold winning ratio that ended a threshold stop.
  std::optional<double> final_rho_star;
};

struct RecoveryResult {
  std::vector<int> support;  // sorted
  OmpTrace trace;
  std::optional<Vector> x_hat;  // filled by debias when requested
};

/// Threshold-stopped orthogonal matching pursuit. Selects the column with
/// the largest selection ratio (ties broken by lowest index), continues
/// while the winning ratio exceeds mu, and stops on a zero residual or after
/// max_iter selections (0 = default cap of m selections).
RecoveryResult run_omp(const ProblemInstance& instance, double mu,
                       int max_iter = 0);

/// The greedy selection path with the threshold test disabled: exactly
/// max_selections columns are selected unless the residual hits zero first.
/// The selection sequence does not depend on any threshold, so one path
/// evaluates every candidate threshold; the sweep harness relies on this.
OmpTrace greedy_path(const ProblemInstance& instance, int max_selections);

/// Oracle-restricted pursuit: selections are confined to the true support
/// and exactly k iterations run. Records the full table of selection ratios
/// for every column at every step, including the final state, to drive the
/// missed-detection / false-alarm event decomposition.
struct GenieResult {
  OmpTrace trace;
  Matrix rho_table;          // (k+1) x n; rows of a zero residual are zero
  std::vector<int> support;  // true support, sorted
  /// min over t in [0,k) of the best on-support ratio at step t.
  double md_stat = 0.0;
  /// max over t in [0,k] of the best off-support ratio at step t.
  double fa_stat = 0.0;
};

GenieResult run_genie(const ProblemInstance& instance);

struct EventFlags {
  bool md_event = false;  // best on-support ratio dipped to mu or below
  bool fa_event = false;  // some off-support ratio reached mu or above
};

/// Evaluates the two failure events of the genie decomposition at a given
/// threshold. When both are false, plain OMP at the same threshold stops in
/// exactly k iterations with the true support.
EventFlags check_events(const GenieResult& genie, double mu);

/// Least-squares re-fit of y on the selected columns; zero elsewhere.
Vector debias(const ProblemInstance& instance,
              const std::vector<int>& support);

}  // namespace omptk
