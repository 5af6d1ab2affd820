#include <doctest.h>

#include <cmath>

#include "omptk/errors.hpp"
#include "omptk/threshold.hpp"

using namespace omptk;

TEST_CASE("measurement curve values") {
  CHECK(m_theory(10, 100) == doctest::Approx(89.9961934066053).epsilon(1e-12));
  CHECK(m_theory(20, 100) ==
        doctest::Approx(175.28106538695525).epsilon(1e-12));
  CHECK(m_theory(7, 8) == 0.0);  // ln(1)
  CHECK_THROWS_AS(m_theory(0, 10), std::invalid_argument);
}

TEST_CASE("reference curve values") {
  CHECK(m_tropp_gilbert(10, 100) ==
        doctest::Approx(184.2068074395237).epsilon(1e-12));
  CHECK(m_tropp_gilbert(1, 100) ==
        doctest::Approx(4.0 * std::log(100.0)).epsilon(1e-14));
}

TEST_CASE("curve ratio approaches two") {
  const double ratio = m_tropp_gilbert(10, 1000000) / m_theory(10, 1000000);
  CHECK(std::abs(ratio - 2.0) <= 0.01);
}

TEST_CASE("self-referential curve behaves") {
  CHECK(m_donoho_tanner(5, 100.0, 100) == 0.0);  // n/m = 1
  // Monotone decreasing in the current measurement count.
  CHECK(m_donoho_tanner(10, 50.0, 10000) > m_donoho_tanner(10, 80.0, 10000));
  const double fp = m_donoho_tanner_fixed_point(10, 10000);
  CHECK(std::abs(fp - m_donoho_tanner(10, fp, 10000)) <= 1e-6);
}

TEST_CASE("plan for the headline cell") {
  const ThresholdPlan plan = make_plan(200, 100, 20, 20);
  CHECK(plan.delta == doctest::Approx(0.1410245570933435).epsilon(1e-12));
  CHECK(plan.epsilon == doctest::Approx(0.068187510268372).epsilon(1e-11));
  CHECK(plan.mu == doctest::Approx(0.04680826120821986).epsilon(1e-12));
  CHECK(plan.reliable);
  // Largest threshold the construction allows at k = k_max.
  CHECK(plan.mu <= 1.0 / ((1.0 + plan.epsilon) * 20) + 1e-9);
}

TEST_CASE("below the scaling law") {
  // 2 * 20 * ln(80) = 175.28..., so 175 measurements sit below the law.
  CHECK_THROWS_AS(make_plan(175, 100, 20, 20), BelowScaling);
  const ThresholdPlan forced = make_plan(175, 100, 20, 20, true);
  CHECK_FALSE(forced.reliable);
  CHECK(forced.epsilon == doctest::Approx(0.01));
  CHECK(forced.mu > 0.0);
}

TEST_CASE("plan consistency across a parameter grid") {
  const int cases[][4] = {
      {200, 100, 20, 20}, {120, 100, 10, 12}, {400, 256, 16, 32},
      {100, 100, 5, 10},  {2000, 1000, 50, 80},
  };
  for (const auto& c : cases) {
    const ThresholdPlan plan = make_plan(c[0], c[1], c[2], c[3]);
    const double lhs = (1.0 + plan.delta) / (1.0 + plan.epsilon);
    CHECK(std::abs(lhs - (1.0 + plan.epsilon)) <= 1e-12 * lhs);
    CHECK(std::abs(plan.mu * plan.m -
                   2.0 * (1.0 + plan.epsilon) * std::log(plan.n - plan.k_min)) <=
          1e-12 * plan.mu * plan.m);
    for (int k = plan.k_min; k <= plan.k_max; ++k) {
      CHECK(plan.mu >=
            (2.0 * (1.0 + plan.epsilon) / plan.m) * std::log(plan.n - k) -
                1e-9);
      CHECK(plan.mu <= 1.0 / ((1.0 + plan.epsilon) * k) + 1e-9);
    }
  }
}

TEST_CASE("theory curve increases in k where the formula says so") {
  for (int n : {50, 200, 1000, 10000}) {
    for (int k = 1; k + 1 < n / 2; ++k) {
      const double lhs = 2.0 * (k + 1) * std::log(static_cast<double>(n - k - 1));
      const double rhs = 2.0 * k * std::log(static_cast<double>(n - k));
      if (lhs > rhs) CHECK(m_theory(k + 1, n) > m_theory(k, n));
    }
  }
}
