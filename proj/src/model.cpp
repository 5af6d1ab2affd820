#include "omptk/model.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "omptk/errors.hpp"
#include "omptk/rng.hpp"

namespace omptk {

SignalSpec SignalSpec::equal_mode(int n, int k, double magnitude,
                                  NoiseKind noise, bool random_signs) {
  SignalSpec spec;
  spec.n = n;
  spec.k = k;
  spec.amplitude = AmplitudeKind::equal;
  spec.magnitude = magnitude;
  spec.random_signs = random_signs;
  spec.noise = noise;
  spec.validate();
  return spec;
}

SignalSpec SignalSpec::equal_mode_with_snr(int n, int k, double snr,
                                           NoiseKind noise) {
  return equal_mode(n, k, std::sqrt(snr / k), noise);
}

SignalSpec SignalSpec::dynamic_mode(int n, int k, double range_db,
                                    double total_power, NoiseKind noise) {
  SignalSpec spec;
  spec.n = n;
  spec.k = k;
  spec.amplitude = AmplitudeKind::dynamic_range;
  spec.dynamic_range_db = range_db;
  spec.total_power = total_power;
  spec.noise = noise;
  spec.validate();
  return spec;
}

void SignalSpec::validate() const {
  if (n <= 0 || k <= 0 || k >= n)
    throw ConfigInvalid("signal spec requires 0 < k < n");
  if (amplitude == AmplitudeKind::equal && magnitude <= 0.0)
    throw ConfigInvalid("equal mode requires magnitude > 0");
  if (amplitude == AmplitudeKind::dynamic_range &&
      (dynamic_range_db < 0.0 || total_power <= 0.0))
    throw ConfigInvalid("dynamic-range mode requires D >= 0 and power > 0");
}

double SparseSignal::min_abs() const {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().minCoeff();
}

Vector SparseSignal::dense() const {
  Vector x = Vector::Zero(n);
  for (std::size_t i = 0; i < support.size(); ++i)
    x(support[i]) = values(static_cast<Eigen::Index>(i));
  return x;
}

namespace {

std::vector<int> draw_support(int n, int k, Rng& rng) {
  // Partial Fisher-Yates over [0, n): the first k slots are a uniform
  // k-subset.
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + rng.uniform_below(n - i);
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  std::vector<int> support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  return support;
}

SparseSignal generate_signal_stream(const SignalSpec& spec, Rng& rng) {
  SparseSignal signal;
  signal.n = spec.n;
  signal.support = draw_support(spec.n, spec.k, rng);
  signal.values.resize(spec.k);
  if (spec.amplitude == AmplitudeKind::equal) {
    for (int i = 0; i < spec.k; ++i) {
      const double sign = spec.random_signs ? rng.rademacher() : 1.0;
      signal.values(i) = sign * spec.magnitude;
    }
    return signal;
  }
  // Dynamic-range mode: draw relative powers, then rescale so the total
  // power is exactly spec.total_power.
  const double lo = std::pow(10.0, -spec.dynamic_range_db / 10.0);
  Vector power(spec.k);
  Vector sign(spec.k);
  for (int i = 0; i < spec.k; ++i) {
    const double u = rng.uniform01();
    power(i) = spec.powers_uniform_in_db
                   ? std::pow(10.0, -spec.dynamic_range_db * u / 10.0)
                   : lo + (1.0 - lo) * u;
    sign(i) = spec.random_signs ? rng.rademacher() : 1.0;
  }
  const double scale = spec.total_power / power.sum();
  for (int i = 0; i < spec.k; ++i)
    signal.values(i) = sign(i) * std::sqrt(scale * power(i));
  return signal;
}

}  // namespace

SparseSignal generate_signal(const SignalSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  return generate_signal_stream(spec, rng);
}

ProblemInstance generate_instance(const SignalSpec& spec, int m,
                                  std::uint64_t seed) {
  spec.validate();
  if (m < 1) throw ConfigInvalid("generate_instance requires m >= 1");
  Rng rng(seed);
  ProblemInstance instance;
  instance.seed = seed;
  instance.signal = generate_signal_stream(spec, rng);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  instance.a.resize(m, spec.n);
  for (int j = 0; j < spec.n; ++j)
    for (int i = 0; i < m; ++i) instance.a(i, j) = scale * rng.normal();
  instance.w = Vector::Zero(m);
  if (spec.noise == NoiseKind::gaussian)
    for (int i = 0; i < m; ++i) instance.w(i) = scale * rng.normal();
  instance.y = instance.a * instance.signal.dense() + instance.w;
  return instance;
}

double snr(const ProblemInstance& instance) { return instance.signal.norm_sq(); }

namespace {

void write_values(std::FILE* f, const double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i)
    std::fprintf(f, i + 1 == count ? "%.17g\n" : "%.17g ", data[i]);
}

}  // namespace

void save_instance(const ProblemInstance& instance, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open for writing: " + path);
  const int m = instance.m();
  const int n = instance.n();
  const int k = instance.k();
  std::fprintf(f, "omptk instance 1\n");
  std::fprintf(f, "m %d n %d k %d seed %" PRIu64 "\n", m, n, k, instance.seed);
  for (int i = 0; i < k; ++i)
    std::fprintf(f, i + 1 == k ? "%d\n" : "%d ", instance.signal.support[i]);
  write_values(f, instance.signal.values.data(), k);
  // Matrix entries row-major, one row per line.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j)
      std::fprintf(f, j + 1 == n ? "%.17g\n" : "%.17g ", instance.a(i, j));
  }
  write_values(f, instance.w.data(), m);
  write_values(f, instance.y.data(), m);
  if (std::fclose(f) != 0) throw IoError("write failed: " + path);
}

ProblemInstance load_instance(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("cannot open for reading: " + path);
  auto fail = [&](const char* what) {
    std::fclose(f);
    throw IoError(std::string(what) + ": " + path);
  };
  char magic[32] = {0};
  int version = 0;
  if (std::fscanf(f, "%31s instance %d", magic, &version) != 2 ||
      std::string(magic) != "omptk" || version != 1)
    fail("not an omptk instance file");
  ProblemInstance instance;
  int m = 0, n = 0, k = 0;
  if (std::fscanf(f, " m %d n %d k %d seed %" SCNu64, &m, &n, &k,
                  &instance.seed) != 4 ||
      m < 1 || n < 1 || k < 0 || k > n)
    fail("bad header");
  instance.signal.n = n;
  instance.signal.support.resize(static_cast<std::size_t>(k));
  instance.signal.values.resize(k);
  for (int i = 0; i < k; ++i)
    if (std::fscanf(f, "%d", &instance.signal.support[i]) != 1) fail("bad support");
  for (int i = 0; i < k; ++i)
    if (std::fscanf(f, "%lg", &instance.signal.values(i)) != 1) fail("bad values");
  instance.a.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (std::fscanf(f, "%lg", &instance.a(i, j)) != 1) fail("bad matrix");
  instance.w.resize(m);
  for (int i = 0; i < m; ++i)
    if (std::fscanf(f, "%lg", &instance.w(i)) != 1) fail("bad noise");
  instance.y.resize(m);
  for (int i = 0; i < m; ++i)
    if (std::fscanf(f, "%lg", &instance.y(i)) != 1) fail("bad measurements");
  std::fclose(f);
  return instance;
}

}  // namespace omptk
