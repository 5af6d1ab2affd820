#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "omptk/model.hpp"

namespace omptk {

enum class ThresholdMode { plan, oracle_best_over_grid };

/// Monte Carlo sweep over a (k, m) grid.
struct SweepConfig {
  int n = 0;
  std::vector<int> k_values;
  std::vector<int> m_values;
  /// SNR in dB; +infinity means noiseless.
  double snr_db = std::numeric_limits<double>::infinity();
  /// Dynamic range of nonzero powers in dB; used by run_dynamic_range only.
  double dynamic_range_db = 0.0;
  int trials = 0;
  std::uint64_t master_seed = 0;
  ThresholdMode threshold_mode = ThresholdMode::oracle_best_over_grid;
  /// plan mode: sparsity range for the threshold plan; 0 means the cell's k.
  int plan_k_min = 0;
  int plan_k_max = 0;
  int threads = 0;  // 0 = OMPTK_THREADS env or hardware

  void validate() const;  // throws ConfigInvalid
};

struct SweepCell {
  int k = 0;
  int m = 0;
  double mu_used = 0.0;
  double error_prob = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/trials)
  double md_rate = 0.0;
  double fa_rate = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;    // the cell's derived seed
  double wall_time_s = 0.0;  // informational; never serialized
};

struct OverlayPoint {
  int k = 0;
  double m_theory = 0.0;
  double m_tropp_gilbert = 0.0;
};

struct SweepReport {
  SweepConfig config;
  bool dynamic_range_mode = false;
  std::vector<SweepCell> cells;      // config order: k-major, then m
  std::vector<OverlayPoint> overlays;
};

/// Runs every (k, m) cell with equal-magnitude signals. An error is a trial
/// whose recovered support differs from the truth. In oracle mode a fixed
/// geometric grid of 25 thresholds spanning [0.1/m, 20*ln(n)/m] is evaluated
/// on the same trials and the best error rate is reported; md/fa rates come
/// from the genie events at the reported threshold.
SweepReport run_sweep(const SweepConfig& config);

/// Same cell machinery with dynamic-range signals (noiseless only,
/// dynamic_range_db one of 0, 10, 20).
SweepReport run_dynamic_range(const SweepConfig& config);

/// Empirical missed-detection / false-alarm rates of one cell at a given
/// threshold. Uses the same per-trial instances as run_sweep.
std::pair<double, double> estimate_event_probs(const SweepConfig& config,
                                               int k, int m, double mu);

/// Writes the CSV (k,m,mu,error_prob,stderr,md_rate,fa_rate,trials,seed) and
/// a key = value metadata sidecar next to it.
void emit_report(const SweepReport& report, const std::string& path);

/// The oracle threshold grid for one cell.
std::vector<double> oracle_mu_grid(int n, int m);

}  // namespace omptk
