#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omptk/brownian.hpp"
#include "omptk/harness.hpp"
#include "omptk/lasso.hpp"
#include "omptk/model.hpp"
#include "omptk/omp.hpp"
#include "omptk/rng.hpp"
#include "omptk/threshold.hpp"
#include "omptk/version.hpp"

namespace {

using namespace omptk;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Inclusive integer range "lo:hi:step", or a single value.
std::vector<int> parse_range(const std::string& text) {
  int lo = 0, hi = 0, step = 0;
  if (std::sscanf(text.c_str(), "%d:%d:%d", &lo, &hi, &step) == 3) {
    if (step < 1 || hi < lo)
      throw CLI::ValidationError("range", "need lo <= hi and step >= 1: " + text);
    std::vector<int> values;
    for (int v = lo; v <= hi; v += step) values.push_back(v);
    return values;
  }
  if (std::sscanf(text.c_str(), "%d", &lo) == 1 &&
      text.find(':') == std::string::npos)
    return {lo};
  throw CLI::ValidationError("range", "expected N or lo:hi:step, got: " + text);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    values.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (values.empty())
    throw CLI::ValidationError("list", "expected comma-separated numbers");
  return values;
}

void print_range(const char* name, const std::vector<int>& values) {
  std::printf("%s =", name);
  for (int v : values) std::printf(" %d", v);
  std::printf("\n");
}

/// Resolves "--mu auto" for a single instance: the threshold plan when a
/// sparsity range is given, otherwise the best point of the oracle grid for
/// this instance (lowest winner on ties).
double resolve_mu(const std::string& mu_text, const ProblemInstance& inst,
                  int k_min, int k_max) {
  if (mu_text != "auto") return std::stod(mu_text);
  if (k_min > 0 && k_max > 0)
    return make_plan(inst.m(), inst.n(), k_min, k_max).mu;
  const std::vector<double> grid = oracle_mu_grid(inst.n(), inst.m());
  for (double mu : grid) {
    const RecoveryResult res = run_omp(inst, mu);
    if (res.support == inst.signal.support) return mu;
  }
  return grid.front();
}

void print_cells(const SweepReport& report) {
  std::printf("k,m,mu,error_prob,stderr,md_rate,fa_rate\n");
  for (const SweepCell& c : report.cells)
    std::printf("%d,%d,%.6g,%.4f,%.4f,%.4f,%.4f\n", c.k, c.m, c.mu_used,
                c.error_prob, c.std_error, c.md_rate, c.fa_rate);
}

struct SweepArgs {
  int n = 0;
  std::string k_range, m_range;
  int trials = 1000;
  std::uint64_t seed = 0;
  double snr_db = kInf;
  std::string out;
  std::string mu_mode = "oracle";
  int k_min = 0, k_max = 0;
  int threads = 0;
  bool dry_run = false;
};

SweepConfig to_config(const SweepArgs& args) {
  SweepConfig config;
  config.n = args.n;
  config.k_values = parse_range(args.k_range);
  config.m_values = parse_range(args.m_range);
  config.trials = args.trials;
  config.master_seed = args.seed;
  config.snr_db = args.snr_db;
  config.threshold_mode = args.mu_mode == "plan"
                              ? ThresholdMode::plan
                              : ThresholdMode::oracle_best_over_grid;
  config.plan_k_min = args.k_min;
  config.plan_k_max = args.k_max;
  config.threads = args.threads;
  return config;
}

int cmd_sweep(const SweepArgs& args) {
  const SweepConfig config = to_config(args);
  if (args.dry_run) {
    print_range("k", config.k_values);
    print_range("m", config.m_values);
    std::printf("trials = %d\nsnr_db = %.17g\nmode = %s\n", config.trials,
                config.snr_db,
                config.threshold_mode == ThresholdMode::plan
                    ? "plan"
                    : "oracle_best_over_grid");
    return 0;
  }
  const SweepReport report = run_sweep(config);
  emit_report(report, args.out);
  print_cells(report);
  std::printf("wrote %s\n", args.out.c_str());
  return 0;
}

struct DynRangeArgs {
  int n = 0;
  int k = 0;
  std::string m_range;
  std::string d_list = "0,10,20";
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  bool dry_run = false;
};

std::string with_suffix(const std::string& path, const std::string& tag) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + tag + ".csv";
  return path.substr(0, dot) + tag + path.substr(dot);
}

int cmd_dynrange(const DynRangeArgs& args) {
  SweepConfig config;
  config.n = args.n;
  config.k_values = {args.k};
  config.m_values = parse_range(args.m_range);
  config.trials = args.trials;
  config.master_seed = args.seed;
  config.threads = args.threads;
  const std::vector<double> ranges = parse_double_list(args.d_list);
  if (args.dry_run) {
    print_range("m", config.m_values);
    std::printf("d =");
    for (double d : ranges) std::printf(" %g", d);
    std::printf("\ntrials = %d\n", config.trials);
    return 0;
  }
  for (double d : ranges) {
    config.dynamic_range_db = d;
    const SweepReport report = run_dynamic_range(config);
    const std::string path =
        with_suffix(args.out, "_d" + std::to_string(static_cast<int>(d)));
    emit_report(report, path);
    std::printf("dynamic range %g dB -> %s\n", d, path.c_str());
    int crossing = -1;
    for (const SweepCell& cell : report.cells)
      if (cell.error_prob <= 0.05) {
        crossing = cell.m;
        break;
      }
    if (crossing > 0)
      std::printf("  smallest m with error <= 5%%: %d\n", crossing);
    else
      std::printf("  no m on the grid reaches 5%% error\n");
  }
  return 0;
}

struct RunArgs {
  int n = 0, k = 0, m = 0;
  std::uint64_t seed = 0;
  std::string mu = "auto";
  double snr_db = kInf;
  int k_min = 0, k_max = 0;
  int max_iter = 0;
};

int cmd_run(const RunArgs& args) {
  const bool noisy = std::isfinite(args.snr_db);
  const SignalSpec spec =
      noisy ? SignalSpec::equal_mode_with_snr(
                  args.n, args.k, std::pow(10.0, args.snr_db / 10.0),
                  NoiseKind::gaussian)
            : SignalSpec::equal_mode(args.n, args.k, 1.0, NoiseKind::noiseless);
  const ProblemInstance inst = generate_instance(spec, args.m, args.seed);
  const double mu = resolve_mu(args.mu, inst, args.k_min, args.k_max);
  RecoveryResult res = run_omp(inst, mu, args.max_iter);
  res.x_hat = debias(inst, res.support);
  std::printf("mu = %.17g\n", mu);
  std::printf("t,index,rho_star,residual_norm_sq\n");
  for (const auto& step : res.trace.iterations)
    std::printf("%d,%d,%.6g,%.6g\n", step.t, step.index, step.rho_star,
                step.residual_norm_sq);
  const char* reason = res.trace.stop_reason == StopReason::threshold
                           ? "threshold"
                           : res.trace.stop_reason == StopReason::zero_residual
                                 ? "zero_residual"
                                 : "max_iterations";
  std::printf("stop = %s\n", reason);
  std::printf("support =");
  for (int j : res.support) std::printf(" %d", j);
  std::printf("\ntrue_support =");
  for (int j : inst.signal.support) std::printf(" %d", j);
  std::printf("\nexact_recovery = %s\n",
              res.support == inst.signal.support ? "yes" : "no");
  std::printf("debiased nonzeros:\n");
  for (int j : res.support) std::printf("  x[%d] = %.6g\n", j, (*res.x_hat)(j));
  return 0;
}

struct GenieArgs {
  int n = 0, k = 0, m = 0;
  int trials = 200;
  std::uint64_t seed = 0;
  double snr_db = kInf;
  std::string mu = "auto";
  int threads = 0;
};

int cmd_genie(const GenieArgs& args) {
  SweepConfig config;
  config.n = args.n;
  config.k_values = {args.k};
  config.m_values = {args.m};
  config.trials = args.trials;
  config.master_seed = args.seed;
  config.snr_db = args.snr_db;
  config.threads = args.threads;
  const double mu = args.mu == "auto"
                        ? make_plan(args.m, args.n, args.k, args.k).mu
                        : std::stod(args.mu);
  const auto [md, fa] = estimate_event_probs(config, args.k, args.m, mu);
  std::printf("mu = %.17g\n", mu);
  std::printf("md_rate = %.6g\n", md);
  std::printf("fa_rate = %.6g\n", fa);
  return 0;
}

struct BrownianArgs {
  std::string check = "autocorr";
  long paths = 100000;
  std::uint64_t seed = 0;
  double s = 1.0, t = 4.0;
  double a = 1.0, b = 10.0, mu = 16.0;
  int grid = 512;
  int mu_max = 40;
  int m = 32, chain = 6;
  long samples = 100000;
  int threads = 0;
};

int cmd_brownian(const BrownianArgs& args) {
  if (args.check == "autocorr") {
    const PairCorrelation corr =
        autocorrelation_estimate(args.s, args.t, args.paths, args.seed,
                                 args.threads);
    const double expected = std::sqrt(args.s / args.t);
    std::printf("pairs = (%g, %g)\n", args.s, args.t);
    std::printf("estimate = %.6g\n", corr.mean);
    std::printf("expected = %.6g\n", expected);
    std::printf("abs_deviation = %.6g\n", std::abs(corr.mean - expected));
    std::printf("std_error = %.6g\n", corr.std_error);
    return 0;
  }
  if (args.check == "tail") {
    std::printf("mu,bound,exact\n");
    bool dominated = true;
    for (int mu = 1; mu <= args.mu_max; ++mu) {
      const double bound = gaussian_sq_tail_bound(mu);
      const double exact = gaussian_sq_tail_exact(mu);
      dominated = dominated && bound >= exact;
      std::printf("%d,%.6g,%.6g\n", mu, bound, exact);
    }
    std::printf("bound_dominates = %s\n", dominated ? "yes" : "no");
    return dominated ? 0 : 2;
  }
  if (args.check == "smax") {
    const TailBoundReport report = smax_exceedance(
        args.a, args.b, args.mu, args.paths, args.grid, args.seed, args.threads);
    std::printf("empirical = %.6g\n", report.empirical_prob);
    std::printf("bound = %.6g\n", report.bound_value);
    return 0;
  }
  if (args.check == "projseq") {
    // Chain of complements from a pursuit run on a synthetic instance.
    const SignalSpec spec = SignalSpec::equal_mode(
        2 * args.chain + 4, args.chain + 1, 1.0, NoiseKind::noiseless);
    const ProblemInstance inst = generate_instance(spec, args.m, args.seed);
    const OmpTrace trace = greedy_path(inst, args.chain - 1);
    ProjectionState state(inst.y);
    std::vector<Vector> residuals{inst.y};
    for (const auto& step : trace.iterations) {
      state.append(inst.a.col(step.index), step.index);
      residuals.push_back(state.residual());
    }
    const Matrix cov = projection_sequence_covariance(
        residuals, args.samples, derive_seed(args.seed, 1), args.threads);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
      for (Eigen::Index j = 0; j < cov.cols(); ++j) {
        const double ti = residuals[static_cast<std::size_t>(i)].squaredNorm();
        const double tj = residuals[static_cast<std::size_t>(j)].squaredNorm();
        const double expected = std::sqrt(std::min(ti, tj) / std::max(ti, tj));
        worst = std::max(worst, std::abs(cov(i, j) - expected));
      }
    std::printf("chain_length = %zu\n", residuals.size());
    std::printf("max_abs_deviation = %.6g\n", worst);
    return 0;
  }
  throw CLI::ValidationError("--check",
                             "one of autocorr, tail, smax, projseq");
}

struct LassoCompareArgs {
  int n = 0, k = 0;
  std::string m_range;
  int trials = 200;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  bool dry_run = false;
};

int cmd_lasso_compare(const LassoCompareArgs& args) {
  const std::vector<int> ms = parse_range(args.m_range);
  if (args.dry_run) {
    print_range("m", ms);
    std::printf("trials = %d\n", args.trials);
    return 0;
  }
  SweepConfig config;
  config.n = args.n;
  config.k_values = {args.k};
  config.m_values = ms;
  config.trials = args.trials;
  config.master_seed = args.seed;
  config.threads = args.threads;
  const SweepReport omp_report = run_sweep(config);
  const SignalSpec spec =
      SignalSpec::equal_mode(args.n, args.k, 1.0, NoiseKind::noiseless);
  std::FILE* out = nullptr;
  if (!args.out.empty()) {
    out = std::fopen(args.out.c_str(), "wb");
    if (!out) throw IoError("cannot open for writing: " + args.out);
    std::fprintf(out, "m,omp_success,lasso_success\n");
  }
  std::printf("m,omp_success,lasso_success\n");
  int omp_cross = -1, lasso_cross = -1;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double omp_rate = 1.0 - omp_report.cells[i].error_prob;
    const double lasso_rate = lasso_support_recovery_rate(
        spec, ms[i], PenaltyRule::oracle_grid(), args.trials,
        derive_seed(args.seed, 1000 + static_cast<std::uint64_t>(ms[i])),
        args.threads);
    if (omp_cross < 0 && omp_rate >= 0.9) omp_cross = ms[i];
    if (lasso_cross < 0 && lasso_rate >= 0.9) lasso_cross = ms[i];
    std::printf("%d,%.4f,%.4f\n", ms[i], omp_rate, lasso_rate);
    if (out) std::fprintf(out, "%d,%.17g,%.17g\n", ms[i], omp_rate, lasso_rate);
  }
  if (out && std::fclose(out) != 0) throw IoError("write failed: " + args.out);
  std::printf("omp_m90 = %d\n", omp_cross);
  std::printf("lasso_m90 = %d\n", lasso_cross);
  return 0;
}

struct PlanArgs {
  int n = 0, m = 0, k_min = 0, k_max = 0;
  bool force = false;
};

int cmd_plan(const PlanArgs& args) {
  const ThresholdPlan plan =
      make_plan(args.m, args.n, args.k_min, args.k_max, args.force);
  std::printf("delta = %.17g\n", plan.delta);
  std::printf("epsilon = %.17g\n", plan.epsilon);
  std::printf("mu = %.17g\n", plan.mu);
  std::printf("reliable = %s\n", plan.reliable ? "yes" : "no");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omptk: sparse support recovery via threshold-stopped "
               "orthogonal matching pursuit, with a genie event decomposition, "
               "a lasso baseline, Monte Carlo sweeps and normalized-Brownian-"
               "motion checks",
               "omptk"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", omptk::kVersion);
  app.set_help_all_flag("--help-all", "print help for every subcommand");
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "recover one instance and print the trace");
  run->add_option("--n", run_args.n, "signal dimension")->required();
  run->add_option("--k", run_args.k, "sparsity")->required();
  run->add_option("--m", run_args.m, "measurements")->required();
  run->add_option("--seed", run_args.seed, "instance seed");
  run->add_option("--mu", run_args.mu, "threshold, or 'auto'");
  run->add_option("--snr-db", run_args.snr_db, "SNR in dB (inf = noiseless)");
  run->add_option("--kmin", run_args.k_min, "plan lower sparsity bound for --mu auto");
  run->add_option("--kmax", run_args.k_max, "plan upper sparsity bound for --mu auto");
  run->add_option("--max-iter", run_args.max_iter, "selection cap (0 = m)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo error-probability sweep over (k, m)");
  sweep->add_option("--n", sweep_args.n, "signal dimension")->required();
  sweep->add_option("--k", sweep_args.k_range, "sparsity range lo:hi:step or value")->required();
  sweep->add_option("--m", sweep_args.m_range, "measurement range lo:hi:step or value")->required();
  sweep->add_option("--trials", sweep_args.trials, "trials per cell");
  sweep->add_option("--seed", sweep_args.seed, "master seed");
  sweep->add_option("--snr-db", sweep_args.snr_db, "SNR in dB (inf = noiseless)");
  sweep->add_option("--out", sweep_args.out, "output CSV path")->required();
  sweep->add_option("--mu-mode", sweep_args.mu_mode, "oracle or plan")
      ->check(CLI::IsMember({"oracle", "plan"}));
  sweep->add_option("--kmin", sweep_args.k_min, "plan lower sparsity bound");
  sweep->add_option("--kmax", sweep_args.k_max, "plan upper sparsity bound");
  sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = auto)");
  sweep->add_flag("--dry-run", sweep_args.dry_run, "print the parsed grid and exit");

  DynRangeArgs dyn_args;
  auto* dyn = app.add_subcommand("dynrange", "noiseless sweeps across signal dynamic ranges");
  dyn->add_option("--n", dyn_args.n, "signal dimension")->required();
  dyn->add_option("--k", dyn_args.k, "sparsity")->required();
  dyn->add_option("--m", dyn_args.m_range, "measurement range lo:hi:step or value")->required();
  dyn->add_option("--d", dyn_args.d_list, "dynamic ranges in dB, comma separated");
  dyn->add_option("--trials", dyn_args.trials, "trials per cell");
  dyn->add_option("--seed", dyn_args.seed, "master seed");
  dyn->add_option("--out", dyn_args.out, "output CSV path; _d<D> is inserted")->required();
  dyn->add_option("--threads", dyn_args.threads, "worker threads (0 = auto)");
  dyn->add_flag("--dry-run", dyn_args.dry_run, "print the parsed grid and exit");

  GenieArgs genie_args;
  auto* genie = app.add_subcommand("genie", "estimate missed-detection and false-alarm rates");
  genie->add_option("--n", genie_args.n, "signal dimension")->required();
  genie->add_option("--k", genie_args.k, "sparsity")->required();
  genie->add_option("--m", genie_args.m, "measurements")->required();
  genie->add_option("--trials", genie_args.trials, "trials");
  genie->add_option("--seed", genie_args.seed, "master seed");
  genie->add_option("--snr-db", genie_args.snr_db, "SNR in dB (inf = noiseless)");
  genie->add_option("--mu", genie_args.mu, "threshold, or 'auto' for the plan value");
  genie->add_option("--threads", genie_args.threads, "worker threads (0 = auto)");

  BrownianArgs br_args;
  auto* brownian = app.add_subcommand("brownian", "normalized-Brownian-motion law checks");
  brownian->add_option("--check", br_args.check, "autocorr, tail, smax or projseq")->required();
  brownian->add_option("--paths", br_args.paths, "Monte Carlo paths");
  brownian->add_option("--seed", br_args.seed, "master seed");
  brownian->add_option("--s", br_args.s, "autocorr: earlier time");
  brownian->add_option("--t", br_args.t, "autocorr: later time");
  brownian->add_option("--a", br_args.a, "smax: interval start");
  brownian->add_option("--b", br_args.b, "smax: interval end");
  brownian->add_option("--mu", br_args.mu, "smax: squared level");
  brownian->add_option("--grid", br_args.grid, "smax: grid points");
  brownian->add_option("--mu-max", br_args.mu_max, "tail: largest integer level");
  brownian->add_option("--m", br_args.m, "projseq: ambient dimension");
  brownian->add_option("--chain", br_args.chain, "projseq: chain length");
  brownian->add_option("--samples", br_args.samples, "projseq: Monte Carlo samples");
  brownian->add_option("--threads", br_args.threads, "worker threads (0 = auto)");

  LassoCompareArgs lc_args;
  auto* lc = app.add_subcommand("lasso-compare", "noiseless support recovery: pursuit vs lasso");
  lc->add_option("--n", lc_args.n, "signal dimension")->required();
  lc->add_option("--k", lc_args.k, "sparsity")->required();
  lc->add_option("--m", lc_args.m_range, "measurement range lo:hi:step or value")->required();
  lc->add_option("--trials", lc_args.trials, "trials per point");
  lc->add_option("--seed", lc_args.seed, "master seed");
  lc->add_option("--out", lc_args.out, "optional CSV path");
  lc->add_option("--threads", lc_args.threads, "worker threads (0 = auto)");
  lc->add_flag("--dry-run", lc_args.dry_run, "print the parsed grid and exit");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "print the threshold plan for (m, n, kmin, kmax)");
  plan->add_option("--n", plan_args.n, "signal dimension")->required();
  plan->add_option("--m", plan_args.m, "measurements")->required();
  plan->add_option("--kmin", plan_args.k_min, "lower sparsity bound")->required();
  plan->add_option("--kmax", plan_args.k_max, "upper sparsity bound")->required();
  plan->add_flag("--force", plan_args.force, "allow plans below the scaling law");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (dyn->parsed()) return cmd_dynrange(dyn_args);
    if (genie->parsed()) return cmd_genie(genie_args);
    if (brownian->parsed()) return cmd_brownian(br_args);
    if (lc->parsed()) return cmd_lasso_compare(lc_args);
    if (plan->parsed()) return cmd_plan(plan_args);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const omptk::ConfigInvalid& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
