#include "omptk/brownian.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "omptk/errors.hpp"
#include "omptk/parallel.hpp"
#include "omptk/rng.hpp"

namespace omptk {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("times must be nonempty");
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev))
      throw std::invalid_argument("times must be strictly increasing and positive");
    prev = t;
  }
}

/// Fills values[i] = S(times[i]) for one path drawn from rng.
void sample_into(const std::vector<double>& times, Rng& rng,
                 std::vector<double>& values) {
  double b = 0.0;
  double prev_t = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    b += std::sqrt(times[i] - prev_t) * rng.normal();
    prev_t = times[i];
    values[i] = b / std::sqrt(times[i]);
  }
}

}  // namespace

NormalizedBmPath sample_path(const std::vector<double>& times,
                             std::uint64_t seed) {
  check_times(times);
  NormalizedBmPath path;
  path.times = times;
  path.values.resize(times.size());
  Rng rng(seed);
  sample_into(times, rng, path.values);
  return path;
}

double gaussian_sq_tail_bound(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return std::sqrt(2.0 / (kPi * mu)) * std::exp(-mu / 2.0);
}

double gaussian_sq_tail_exact(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return std::erfc(std::sqrt(mu / 2.0));
}

TailBoundReport smax_exceedance(double a, double b, double mu, long paths,
                                int grid_points, std::uint64_t seed,
                                int threads) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("requires 0 < a < b");
  if (grid_points < 2) throw std::invalid_argument("requires grid_points >= 2");
  if (paths < 1) throw std::invalid_argument("requires paths >= 1");

  // Geometric grid, matching the partition the refined bound uses.
  std::vector<double> times(static_cast<std::size_t>(grid_points));
  const double ratio = b / a;
  for (int i = 0; i < grid_points; ++i)
    times[static_cast<std::size_t>(i)] =
        a * std::pow(ratio, static_cast<double>(i) / (grid_points - 1));
  times.back() = b;

  std::atomic<long> exceed{0};
  parallel_chunks(paths, threads, 256, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> values(times.size());
    long local = 0;
    for (std::int64_t p = begin; p < end; ++p) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
      sample_into(times, rng, values);
      double peak = 0.0;
      for (double v : values) peak = std::max(peak, v * v);
      if (peak > mu) ++local;
    }
    exceed += local;
  });

  TailBoundReport report;
  report.a = a;
  report.b = b;
  report.mu = mu;
  report.paths = paths;
  report.empirical_prob = static_cast<double>(exceed.load()) / paths;
  report.bound_value =
      (2.0 * b / (a * mu * std::sqrt(kPi))) * std::exp(-a * mu / (2.0 * b));
  return report;
}

RefinedBoundConstants smax_refined_constants(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  RefinedBoundConstants c;
  c.c1 = std::exp(delta / 2.0) / (std::sqrt(kPi) * delta);
  c.c2 = 2.0 * c.c1;
  c.c3 = 2.0 * delta;
  return c;
}

double smax_refined_bound(double a, double b, double mu, double delta) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("requires 0 < a < b");
  const RefinedBoundConstants c = smax_refined_constants(delta);
  if (!(mu > c.c3))
    throw std::invalid_argument("refined bound requires mu > c3 = 2*delta");
  return (c.c1 + c.c2 * std::log(b / a)) * std::exp(-mu / 2.0);
}

PairCorrelation autocorrelation_estimate(double s, double t, long paths,
                                         std::uint64_t seed, int threads) {
  if (!(0.0 < s && s < t))
    throw std::invalid_argument("requires 0 < s < t");
  if (paths < 2) throw std::invalid_argument("requires paths >= 2");

  // Per-chunk partials merged in chunk order keep the sum deterministic for
  // any worker count.
  const std::int64_t chunk = 1024;
  const auto chunks = static_cast<std::size_t>((paths + chunk - 1) / chunk);
  std::vector<double> sums(chunks, 0.0), sq_sums(chunks, 0.0);
  const std::vector<double> times{s, t};
  parallel_chunks(paths, threads, chunk, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> values(2);
    double sum = 0.0, sq = 0.0;
    for (std::int64_t p = begin; p < end; ++p) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
      sample_into(times, rng, values);
      const double prod = values[0] * values[1];
      sum += prod;
      sq += prod * prod;
    }
    const auto index = static_cast<std::size_t>(begin / chunk);
    sums[index] = sum;
    sq_sums[index] = sq;
  });
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < chunks; ++i) {
    sum += sums[i];
    sq += sq_sums[i];
  }
  PairCorrelation out;
  out.mean = sum / paths;
  const double var = std::max(0.0, sq / paths - out.mean * out.mean);
  out.std_error = std::sqrt(var / paths);
  return out;
}

Matrix projection_sequence_covariance(const std::vector<Vector>& residuals,
                                      long samples, std::uint64_t seed,
                                      int threads) {
  if (residuals.empty())
    throw std::invalid_argument("requires at least one residual");
  if (samples < 1) throw std::invalid_argument("requires samples >= 1");
  const Eigen::Index m = residuals.front().size();
  const auto count = static_cast<Eigen::Index>(residuals.size());
  Matrix directions(m, count);  // unit vectors r_i / ||r_i||
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vector& r = residuals[static_cast<std::size_t>(i)];
    if (r.size() != m)
      throw std::invalid_argument("residuals must share one dimension");
    const double norm = r.norm();
    if (!(norm > 0.0))
      throw std::invalid_argument("residuals must be nonzero");
    directions.col(i) = r / norm;
  }

  const std::int64_t chunk = 1024;
  const auto chunks = static_cast<std::size_t>((samples + chunk - 1) / chunk);
  std::vector<Matrix> partials(chunks);
  parallel_chunks(samples, threads, chunk, [&](std::int64_t begin, std::int64_t end) {
    Matrix acc = Matrix::Zero(count, count);
    Vector g(m), z(count);
    for (std::int64_t p = begin; p < end; ++p) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
      for (Eigen::Index i = 0; i < m; ++i) g(i) = rng.normal();
      z.noalias() = directions.transpose() * g;
      acc.selfadjointView<Eigen::Lower>().rankUpdate(z);
    }
    partials[static_cast<std::size_t>(begin / chunk)] = std::move(acc);
  });
  Matrix total = Matrix::Zero(count, count);
  for (const Matrix& p : partials) total += p;
  total /= static_cast<double>(samples);
  return total.selfadjointView<Eigen::Lower>();
}

}  // namespace omptk
