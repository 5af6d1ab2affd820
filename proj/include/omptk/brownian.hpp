#pragma once

#include <cstdint>
#include <vector>

#include "omptk/linalg.hpp"

namespace omptk {

/// Samples of S(t) = B(t)/sqrt(t) at fixed times; unit variance at every t.
struct NormalizedBmPath {
  std::vector<double> times;   // strictly increasing, positive
  std::vector<double> values;  // S(times[i])
};

/// Exact finite-dimensional sampling via independent Brownian increments.
NormalizedBmPath sample_path(const std::vector<double>& times,
                             std::uint64_t seed);

/// Certified upper bound on Pr(X^2 > mu) for standard normal X:
/// sqrt(2/(pi*mu)) * exp(-mu/2).
double gaussian_sq_tail_bound(double mu);

/// Exact tail Pr(X^2 > mu) = erfc(sqrt(mu/2)).
double gaussian_sq_tail_exact(double mu);

/// Monte Carlo exceedance of sup_{t in [a,b]} S(t)^2 over mu, estimated on a
/// geometric grid (a discrete max can only under-count the supremum, so the
/// estimate is conservative when checking upper bounds).
struct TailBoundReport {
  double a = 0.0;
  double b = 0.0;
  double mu = 0.0;
  double empirical_prob = 0.0;
  double bound_value = 0.0;  // (2b/(a*mu*sqrt(pi))) * exp(-a*mu/(2b))
  long paths = 0;
};

TailBoundReport smax_exceedance(double a, double b, double mu, long paths,
                                int grid_points, std::uint64_t seed,
                                int threads = 0);

/// Constants of the refined supremum bound
/// (c1 + c2*ln(b/a)) * exp(-mu/2), valid for mu > c3; the free parameter
/// delta trades c3 against c1, c2.
struct RefinedBoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

RefinedBoundConstants smax_refined_constants(double delta = 1.0);
double smax_refined_bound(double a, double b, double mu, double delta = 1.0);

/// Sample mean and standard error of S(s)*S(t); the law is sqrt(s/t) for
/// s < t.
struct PairCorrelation {
  double mean = 0.0;
  double std_error = 0.0;
};

PairCorrelation autocorrelation_estimate(double s, double t, long paths,
                                         std::uint64_t seed, int threads = 0);

/// Sample second-moment matrix of z_i = <r_i, g> / ||r_i|| over standard
/// normal vectors g, where r_i = P(i) y are the residuals of a nested
/// projection sequence. The law is E[z_i z_j] = sqrt(min(t_i,t_j)/max(t_i,t_j))
/// with t_i = ||r_i||^2.
Matrix projection_sequence_covariance(const std::vector<Vector>& residuals,
                                      long samples, std::uint64_t seed,
                                      int threads = 0);

}  // namespace omptk
