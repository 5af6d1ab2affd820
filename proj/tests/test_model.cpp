#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "omptk/errors.hpp"
#include "omptk/model.hpp"
#include "omptk/rng.hpp"
#include "support/stats.hpp"

using namespace omptk;
using namespace omptk::testing;

TEST_CASE("equal mode hits the requested signal power") {
  const double target = 7.0;
  const SignalSpec spec =
      SignalSpec::equal_mode_with_snr(100, 20, target, NoiseKind::noiseless);
  const SparseSignal signal = generate_signal(spec, 5);
  CHECK(std::abs(signal.norm_sq() - target) <= 1e-12 * target);
  for (Eigen::Index i = 0; i < signal.values.size(); ++i)
    CHECK(std::abs(signal.values(i)) ==
          doctest::Approx(std::sqrt(target / 20)).epsilon(1e-14));
}

TEST_CASE("zero dynamic range degenerates to equal powers") {
  const SignalSpec spec =
      SignalSpec::dynamic_mode(50, 8, 0.0, 4.0, NoiseKind::noiseless);
  const SparseSignal signal = generate_signal(spec, 9);
  for (Eigen::Index i = 0; i < 8; ++i)
    CHECK(signal.values(i) * signal.values(i) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dynamic-range power ratios follow the order statistics") {
  auto ratio_of = [](const SignalSpec& spec, std::uint64_t seed) {
    const SparseSignal signal = generate_signal(spec, seed);
    const Vector power = signal.values.array().square();
    return power.maxCoeff() / power.minCoeff();
  };

  // dB-uniform powers (the default) give max/min = 100 +- 5% at k = 1000.
  const SignalSpec db =
      SignalSpec::dynamic_mode(2000, 1000, 20.0, 1.0, NoiseKind::noiseless);
  const double db_ratio = ratio_of(db, 8);
  CHECK(db_ratio >= 95.0);
  CHECK(db_ratio <= 105.0);

  // Linear-uniform powers on [P/100, P]: at k = 1000 the expected max/min
  // ratio is (1 - 0.99/1001)/(0.01 + 0.99/1001) ~ 90.9, not yet 100.
  SignalSpec linear = db;
  linear.powers_uniform_in_db = false;
  double mean = 0.0;
  for (int rep = 0; rep < 10; ++rep)
    mean += ratio_of(linear, derive_seed(100, rep));
  mean /= 10;
  CHECK(mean >= 83.0);
  CHECK(mean <= 99.0);

  // The large-k limit of the linear mode also reaches 100 +- 5%.
  SignalSpec wide =
      SignalSpec::dynamic_mode(40000, 20000, 20.0, 1.0, NoiseKind::noiseless);
  wide.powers_uniform_in_db = false;
  const double wide_ratio = ratio_of(wide, 7);
  CHECK(wide_ratio >= 95.0);
  CHECK(wide_ratio <= 105.0);
}

TEST_CASE("noiseless measurements are exactly A x") {
  const SignalSpec spec =
      SignalSpec::equal_mode(30, 4, 1.5, NoiseKind::noiseless);
  const ProblemInstance inst = generate_instance(spec, 20, 77);
  CHECK(inst.w.cwiseAbs().maxCoeff() == 0.0);
  const Vector direct = inst.a * inst.signal.dense();
  CHECK((inst.y - direct).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("columns have unit expected energy") {
  const SignalSpec spec =
      SignalSpec::equal_mode(10000, 5, 1.0, NoiseKind::noiseless);
  const ProblemInstance inst = generate_instance(spec, 100, 13);
  double sum = 0.0;
  for (int j = 0; j < inst.n(); ++j) sum += inst.a.col(j).squaredNorm();
  CHECK(std::abs(sum / inst.n() - 1.0) <= 0.02);
}

TEST_CASE("entry variance matches 1/m") {
  const SignalSpec spec =
      SignalSpec::equal_mode(10000, 5, 1.0, NoiseKind::noiseless);
  const ProblemInstance inst = generate_instance(spec, 100, 29);
  const double mean = inst.a.mean();
  const double var =
      (inst.a.array() - mean).square().sum() / (inst.a.size() - 1);
  CHECK(std::abs(var - 0.01) <= 0.0002);
}

TEST_CASE("realized SNR tracks the definitional one") {
  const double target = 25.0;
  const SignalSpec spec =
      SignalSpec::equal_mode_with_snr(50, 10, target, NoiseKind::gaussian);
  double sum = 0.0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    const ProblemInstance inst =
        generate_instance(spec, 100, derive_seed(3, rep));
    sum += (inst.a * inst.signal.dense()).squaredNorm() / inst.w.squaredNorm();
  }
  CHECK(std::abs(sum / reps - target) <= 0.1 * target);
}

TEST_CASE("snr is the exact signal power") {
  SignalSpec spec = SignalSpec::equal_mode(64, 20, 3.0, NoiseKind::gaussian);
  ProblemInstance inst = generate_instance(spec, 10, 1);
  CHECK(snr(inst) == doctest::Approx(20 * 9.0).epsilon(1e-12));

  // A single entry of magnitude 3.
  spec = SignalSpec::equal_mode(64, 1, 3.0, NoiseKind::noiseless);
  inst = generate_instance(spec, 10, 2);
  CHECK(snr(inst) == doctest::Approx(9.0).epsilon(1e-14));

  spec = SignalSpec::dynamic_mode(512, 100, 10.0, 100.0, NoiseKind::noiseless);
  inst = generate_instance(spec, 10, 3);
  CHECK(std::abs(snr(inst) - 100.0) <= 1e-10);
}

TEST_CASE("instances are bit-reproducible") {
  const SignalSpec spec =
      SignalSpec::equal_mode_with_snr(40, 6, 10.0, NoiseKind::gaussian);
  const ProblemInstance first = generate_instance(spec, 30, 999);
  const ProblemInstance second = generate_instance(spec, 30, 999);
  CHECK(first.signal.support == second.signal.support);
  CHECK((first.signal.values - second.signal.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((first.a - second.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((first.w - second.w).cwiseAbs().maxCoeff() == 0.0);
  CHECK((first.y - second.y).cwiseAbs().maxCoeff() == 0.0);
  const ProblemInstance other = generate_instance(spec, 30, 1000);
  CHECK((first.a - other.a).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("support indices are uniform") {
  const int n = 50, k = 5, draws = 100000;
  const SignalSpec spec = SignalSpec::equal_mode(n, k, 1.0, NoiseKind::noiseless);
  std::vector<long> counts(n, 0);
  for (int d = 0; d < draws; ++d) {
    const SparseSignal signal = generate_signal(spec, derive_seed(17, d));
    for (int j : signal.support) ++counts[static_cast<std::size_t>(j)];
  }
  const double expected = static_cast<double>(draws) * k / n;
  double stat = 0.0;
  for (long c : counts) {
    const double diff = c - expected;
    stat += diff * diff / expected;
  }
  // p > 0.001 against chi-square with n - 1 dof.
  CHECK(stat < chi2_quantile(n - 1, kZ999));
}

TEST_CASE("signal spec validation") {
  SignalSpec bad;
  bad.n = 10;
  bad.k = 10;
  CHECK_THROWS_AS(bad.validate(), ConfigInvalid);
  CHECK_THROWS_AS(SignalSpec::equal_mode(10, 2, -1.0, NoiseKind::noiseless),
                  ConfigInvalid);
  CHECK_THROWS_AS(generate_instance(
                      SignalSpec::equal_mode(10, 2, 1.0, NoiseKind::noiseless),
                      0, 1),
                  ConfigInvalid);
}

TEST_CASE("instances round-trip through the debug format") {
  const SignalSpec spec =
      SignalSpec::equal_mode_with_snr(25, 4, 12.5, NoiseKind::gaussian);
  const ProblemInstance inst = generate_instance(spec, 18, 4242);
  const std::string path = "/tmp/omptk_instance_test.txt";
  save_instance(inst, path);
  const ProblemInstance loaded = load_instance(path);
  std::remove(path.c_str());
  CHECK(loaded.seed == inst.seed);
  CHECK(loaded.signal.n == inst.signal.n);
  CHECK(loaded.signal.support == inst.signal.support);
  CHECK((loaded.signal.values - inst.signal.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.a - inst.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.w - inst.w).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.y - inst.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(load_instance("/tmp/omptk_missing_file.txt"), IoError);
}
