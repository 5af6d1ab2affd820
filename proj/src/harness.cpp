#include "omptk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include "omptk/errors.hpp"
#include "omptk/omp.hpp"
#include "omptk/parallel.hpp"
#include "omptk/rng.hpp"
#include "omptk/threshold.hpp"
#include "omptk/version.hpp"

namespace omptk {

void SweepConfig::validate() const {
  if (n < 2) throw ConfigInvalid("sweep requires n >= 2");
  if (trials < 1) throw ConfigInvalid("sweep requires trials >= 1");
  for (int k : k_values)
    if (k < 1 || k >= n) throw ConfigInvalid("sweep requires 1 <= k < n");
  for (int m : m_values)
    if (m < 1) throw ConfigInvalid("sweep requires m >= 1");
  if (threshold_mode == ThresholdMode::plan)
    for (int k : k_values)
      if (2 * k >= n && plan_k_max == 0)
        throw ConfigInvalid("plan mode requires k < n/2");
  if ((plan_k_min == 0) != (plan_k_max == 0) ||
      (plan_k_min != 0 && plan_k_min > plan_k_max))
    throw ConfigInvalid("plan range must set both bounds with k_min <= k_max");
}

std::vector<double> oracle_mu_grid(int n, int m) {
  constexpr int kPoints = 25;
  const double lo = 0.1 / m;
  const double hi = 20.0 * std::log(static_cast<double>(n)) / m;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i)
    grid[static_cast<std::size_t>(i)] =
        lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
  return grid;
}

namespace {

std::uint64_t stream_of_double(double value) {
  return std::bit_cast<std::uint64_t>(value);
}

std::uint64_t config_base_seed(const SweepConfig& config, bool dynamic_mode) {
  std::uint64_t s = derive_seed(config.master_seed,
                                static_cast<std::uint64_t>(config.n));
  s = derive_seed(s, stream_of_double(config.snr_db));
  s = derive_seed(s, stream_of_double(dynamic_mode ? config.dynamic_range_db
                                                   : 0.0));
  return derive_seed(s, dynamic_mode ? 1 : 0);
}

std::uint64_t cell_seed_of(std::uint64_t base, int k, int m) {
  return derive_seed(derive_seed(base, static_cast<std::uint64_t>(k)),
                     static_cast<std::uint64_t>(m));
}

SignalSpec cell_spec(const SweepConfig& config, int k, bool dynamic_mode) {
  const bool noisy = std::isfinite(config.snr_db);
  const NoiseKind noise = noisy ? NoiseKind::gaussian : NoiseKind::noiseless;
  // Noiseless recovery is scale invariant; unit per-entry power keeps the
  // numbers readable.
  const double power = noisy ? std::pow(10.0, config.snr_db / 10.0)
                             : static_cast<double>(k);
  if (dynamic_mode)
    return SignalSpec::dynamic_mode(config.n, k, config.dynamic_range_db,
                                    power, noise);
  return SignalSpec::equal_mode(config.n, k, std::sqrt(power / k), noise);
}

struct TrialSummary {
  bool path_correct = false;
  double min_rho = 0.0;  // min over t < k of the winning ratio
  double rho_k = 0.0;    // winning ratio at t = k; 0 after a zero residual
  double md_stat = 0.0;
  double fa_stat = 0.0;
};

TrialSummary summarize_trial(const ProblemInstance& instance) {
  const int k = instance.k();
  const OmpTrace trace = greedy_path(instance, k + 1);
  const auto& steps = trace.iterations;

  TrialSummary summary;
  if (static_cast<int>(steps.size()) >= k) {
    std::vector<int> first_k;
    first_k.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) first_k.push_back(steps[static_cast<std::size_t>(t)].index);
    std::sort(first_k.begin(), first_k.end());
    summary.path_correct = first_k == instance.signal.support;
  }
  summary.min_rho = std::numeric_limits<double>::infinity();
  for (int t = 0; t < std::min<int>(k, static_cast<int>(steps.size())); ++t)
    summary.min_rho =
        std::min(summary.min_rho, steps[static_cast<std::size_t>(t)].rho_star);
  if (static_cast<int>(steps.size()) > k)
    summary.rho_k = steps[static_cast<std::size_t>(k)].rho_star;
  // else the path ended on a zero residual and the ratio at t = k is 0.

  const GenieResult genie = run_genie(instance);
  summary.md_stat = genie.md_stat;
  summary.fa_stat = genie.fa_stat;
  return summary;
}

/// Exact support recovery at threshold mu, read off the threshold-free path:
/// the first k selections must be the true support, every winning ratio
/// before t = k must clear mu, and the ratio at t = k must not.
bool trial_succeeds(const TrialSummary& s, double mu) {
  return s.path_correct && s.min_rho > mu && s.rho_k <= mu;
}

SweepCell run_cell(const SweepConfig& config, const SignalSpec& spec, int k,
                   int m, std::uint64_t base_seed) {
  const auto start = std::chrono::steady_clock::now();
  SweepCell cell;
  cell.k = k;
  cell.m = m;
  cell.trials = config.trials;
  cell.seed = cell_seed_of(base_seed, k, m);

  std::vector<double> mu_grid;
  if (config.threshold_mode == ThresholdMode::oracle_best_over_grid) {
    mu_grid = oracle_mu_grid(config.n, m);
  } else {
    const int k_min = config.plan_k_min ? config.plan_k_min : k;
    const int k_max = config.plan_k_max ? config.plan_k_max : k;
    mu_grid.push_back(make_plan(m, config.n, k_min, k_max, true).mu);
  }

  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialSummary> summaries(trials);
  parallel_chunks(config.trials, config.threads, 4,
                  [&](std::int64_t begin, std::int64_t end) {
                    for (std::int64_t trial = begin; trial < end; ++trial) {
                      const auto seed = derive_seed(
                          cell.seed, static_cast<std::uint64_t>(trial));
                      summaries[static_cast<std::size_t>(trial)] =
                          summarize_trial(generate_instance(spec, m, seed));
                    }
                  });

  // Deterministic sequential reduction.
  std::vector<long> errors(mu_grid.size(), 0);
  for (const TrialSummary& s : summaries)
    for (std::size_t i = 0; i < mu_grid.size(); ++i)
      if (!trial_succeeds(s, mu_grid[i])) ++errors[i];
  std::size_t best = 0;
  for (std::size_t i = 1; i < mu_grid.size(); ++i)
    if (errors[i] < errors[best]) best = i;

  cell.mu_used = mu_grid[best];
  cell.error_prob = static_cast<double>(errors[best]) / config.trials;
  cell.std_error = std::sqrt(cell.error_prob * (1.0 - cell.error_prob) /
                             config.trials);
  long md = 0, fa = 0;
  for (const TrialSummary& s : summaries) {
    if (s.md_stat <= cell.mu_used) ++md;
    if (s.fa_stat >= cell.mu_used) ++fa;
  }
  cell.md_rate = static_cast<double>(md) / config.trials;
  cell.fa_rate = static_cast<double>(fa) / config.trials;
  cell.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return cell;
}

SweepReport run_impl(const SweepConfig& config, bool dynamic_mode) {
  config.validate();
  SweepReport report;
  report.config = config;
  report.dynamic_range_mode = dynamic_mode;
  for (int k : config.k_values)
    report.overlays.push_back(
        {k, m_theory(k, config.n), m_tropp_gilbert(k, config.n)});
  const std::uint64_t base = config_base_seed(config, dynamic_mode);
  for (int k : config.k_values) {
    const SignalSpec spec = cell_spec(config, k, dynamic_mode);
    for (int m : config.m_values)
      report.cells.push_back(run_cell(config, spec, k, m, base));
  }
  return report;
}

}  // namespace

SweepReport run_sweep(const SweepConfig& config) {
  return run_impl(config, false);
}

SweepReport run_dynamic_range(const SweepConfig& config) {
  if (std::isfinite(config.snr_db))
    throw ConfigInvalid("dynamic-range sweeps are noiseless");
  const double d = config.dynamic_range_db;
  if (d != 0.0 && d != 10.0 && d != 20.0)
    throw ConfigInvalid("dynamic range must be 0, 10 or 20 dB");
  return run_impl(config, true);
}

std::pair<double, double> estimate_event_probs(const SweepConfig& config,
                                               int k, int m, double mu) {
  config.validate();
  if (!(mu > 0.0)) throw ConfigInvalid("event estimation requires mu > 0");
  const SignalSpec spec = cell_spec(config, k, false);
  const std::uint64_t cell =
      cell_seed_of(config_base_seed(config, false), k, m);
  std::atomic<long> md{0}, fa{0};
  parallel_chunks(config.trials, config.threads, 4,
                  [&](std::int64_t begin, std::int64_t end) {
                    long local_md = 0, local_fa = 0;
                    for (std::int64_t trial = begin; trial < end; ++trial) {
                      const auto seed =
                          derive_seed(cell, static_cast<std::uint64_t>(trial));
                      const GenieResult genie =
                          run_genie(generate_instance(spec, m, seed));
                      const EventFlags events = check_events(genie, mu);
                      if (events.md_event) ++local_md;
                      if (events.fa_event) ++local_fa;
                    }
                    md += local_md;
                    fa += local_fa;
                  });
  return {static_cast<double>(md.load()) / config.trials,
          static_cast<double>(fa.load()) / config.trials};
}

namespace {

std::string meta_path_for(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".meta";
  return path.substr(0, dot) + ".meta";
}

const char* threshold_mode_name(ThresholdMode mode) {
  return mode == ThresholdMode::plan ? "plan" : "oracle_best_over_grid";
}

}  // namespace

void emit_report(const SweepReport& report, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open for writing: " + path);
  std::fprintf(f, "k,m,mu,error_prob,stderr,md_rate,fa_rate,trials,seed\n");
  for (const SweepCell& c : report.cells)
    std::fprintf(f, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%" PRIu64 "\n",
                 c.k, c.m, c.mu_used, c.error_prob, c.std_error, c.md_rate,
                 c.fa_rate, c.trials, c.seed);
  if (std::fclose(f) != 0) throw IoError("write failed: " + path);

  const std::string meta = meta_path_for(path);
  std::FILE* g = std::fopen(meta.c_str(), "wb");
  if (!g) throw IoError("cannot open for writing: " + meta);
  const SweepConfig& cfg = report.config;
  std::fprintf(g, "n = %d\n", cfg.n);
  std::fprintf(g, "snr_db = %.17g\n", cfg.snr_db);
  std::fprintf(g, "dynamic_range_db = %.17g\n",
               report.dynamic_range_mode ? cfg.dynamic_range_db : 0.0);
  std::fprintf(g, "threshold_mode = %s\n",
               threshold_mode_name(cfg.threshold_mode));
  std::fprintf(g, "master_seed = %" PRIu64 "\n", cfg.master_seed);
  std::fprintf(g, "tool_version = %s\n", kVersion);
  std::fprintf(g, "trials = %d\n", cfg.trials);
  std::fprintf(g, "k_values =");
  for (int k : cfg.k_values) std::fprintf(g, " %d", k);
  std::fprintf(g, "\nm_values =");
  for (int m : cfg.m_values) std::fprintf(g, " %d", m);
  std::fprintf(g, "\n");
  for (const OverlayPoint& o : report.overlays) {
    std::fprintf(g, "m_theory_k%d = %.17g\n", o.k, o.m_theory);
    std::fprintf(g, "m_tropp_gilbert_k%d = %.17g\n", o.k, o.m_tropp_gilbert);
  }
  if (std::fclose(g) != 0) throw IoError("write failed: " + meta);
}

}  // namespace omptk
