#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omptk/linalg.hpp"

namespace omptk {

enum class AmplitudeKind { equal, dynamic_range };
enum class NoiseKind { noiseless, gaussian };

/// Recipe for a random sparse signal and its measurement noise.
struct SignalSpec {
  int n = 0;
  int k = 0;
  AmplitudeKind amplitude = AmplitudeKind::equal;
  /// equal mode: every nonzero has |x_j| = magnitude.
  double magnitude = 1.0;
  /// dynamic-range mode: max/min nonzero power ratio, in dB.
  double dynamic_range_db = 0.0;
  /// dynamic-range mode: the exact resulting ||x||^2.
  double total_power = 1.0;
  /// dynamic-range mode: powers are uniform in dB by default, which realizes
  /// the stated max/min power ratio; switch off for uniform linear power.
  bool powers_uniform_in_db = true;
  bool random_signs = true;
  NoiseKind noise = NoiseKind::noiseless;

  static SignalSpec equal_mode(int n, int k, double magnitude, NoiseKind noise,
                               bool random_signs = true);
  /// equal mode with magnitude chosen so that ||x||^2 = k*magnitude^2 = snr.
  static SignalSpec equal_mode_with_snr(int n, int k, double snr,
                                        NoiseKind noise);
  static SignalSpec dynamic_mode(int n, int k, double range_db,
                                 double total_power, NoiseKind noise);

  void validate() const;  // throws ConfigInvalid
};

struct SparseSignal {
  int n = 0;
  std::vector<int> support;  // sorted, distinct, in [0, n)
  Vector values;             // aligned with support, all nonzero

  double norm_sq() const { return values.squaredNorm(); }
  double min_abs() const;
  Vector dense() const;
};

/// One realized measurement problem: y = a*x + w.
struct ProblemInstance {
  SparseSignal signal;
  Matrix a;  // m x n
  Vector w;  // m
  Vector y;  // m
  std::uint64_t seed = 0;

  int m() const { return static_cast<int>(a.rows()); }
  int n() const { return static_cast<int>(a.cols()); }
  int k() const { return static_cast<int>(signal.support.size()); }
};

/// Support drawn uniformly without replacement; values per spec.amplitude.
SparseSignal generate_signal(const SignalSpec& spec, std::uint64_t seed);

/// Matrix and noise entries i.i.d. N(0, 1/m); a deterministic function of
/// (spec, m, seed).
ProblemInstance generate_instance(const SignalSpec& spec, int m,
                                  std::uint64_t seed);

/// The definitional SNR under the 1/m-variance ensemble: ||x||^2.
double snr(const ProblemInstance& instance);

/// Plain-text round-trip format for cross-run debugging (see README).
void save_instance(const ProblemInstance& instance, const std::string& path);
ProblemInstance load_instance(const std::string& path);

}  // namespace omptk
