#include <doctest.h>

#include <cmath>
#include <sstream>

#include "opeflow/observables.hpp"

using namespace opeflow::obs;

TEST_SUITE_BEGIN("observables");

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("query geometry") {
  const ConductanceQuery q(1.0, 1.0, 4);
  CHECK(q.tau() == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(ConductanceQuery::from_tau(kPi / 2, 4).tau() == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK_THROWS_AS(ConductanceQuery(-1.0, 1.0, 4), NonPositiveTau);
  CHECK_THROWS_AS(ConductanceQuery::from_tau(0.0, 4), NonPositiveTau);
}

TEST_CASE("the two series forms agree across the whole range") {
  for (int i = 0; i < 41; ++i) {
    const double tau = 0.05 * std::pow(20.0 / 0.05, i / 40.0);
    const auto q = ConductanceQuery::from_tau(tau, 4);
    CHECK(std::fabs(g_star_half_integer(q) - g_star_dual(q)) < 1e-12);
  }
}

TEST_CASE("square geometry value, frozen from the dual series") {
  // (2/pi)(1 - 2 e^{-2 pi} + 2 e^{-8 pi} - ...) evaluated independently
  const double expected =
      (2.0 / kPi) * (1.0 - 2.0 * std::exp(-2.0 * kPi) + 2.0 * std::exp(-8.0 * kPi) -
                     2.0 * std::exp(-18.0 * kPi));
  const auto q = ConductanceQuery(1.0, 1.0, 4);
  CHECK(g_star_dual(q) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(g_star_half_integer(q) == doctest::Approx(0.634242070449527).epsilon(1e-13));
}

TEST_CASE("long-cylinder limit is dominated by the leading half-integer term") {
  const auto q = ConductanceQuery::from_tau(4.0 * kPi, 4);
  const double lead = std::exp(-kPi) / kPi; // (pi tau)^{-1/2} * 2 e^{-tau/4}
  CHECK(g_star_half_integer(q) == doctest::Approx(lead).epsilon(2e-5));
  // insulating decay: strictly positive, strictly decreasing
  double prev = g_star(1.0);
  for (double tau = 2.0; tau < 40.0; tau *= 1.5) {
    const double g = g_star(tau);
    CHECK(g > 0.0);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("ohmic limit") {
  const auto q = ConductanceQuery::from_tau(0.01, 4);
  CHECK(std::fabs(0.01 * g_star_dual(q) - 1.0) < 1e-8);
  CHECK(std::fabs(0.01 * g_star_half_integer(q) - 1.0) < 1e-8);
  CHECK(sigma_xx_star(4) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(sigma_xx_star(1) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
}

TEST_CASE("truncation is sound: tighter tolerance moves nothing above tol") {
  for (const double tau : {0.07, 0.5, 3.0, 15.0}) {
    const double loose = g_star_half_integer(ConductanceQuery::from_tau(tau, 4, 1e-10));
    const double tight = g_star_half_integer(ConductanceQuery::from_tau(tau, 4, 1e-16));
    CHECK(std::fabs(loose - tight) < 1e-10 * std::max(1.0, std::fabs(tight)));
  }
}

TEST_CASE("square deviation report reproduces the published comparison") {
  const auto rep = square_deviation_check();
  CHECK(rep.g_square == doctest::Approx(0.634242).epsilon(1e-6));
  CHECK(rep.leading_correction == doctest::Approx(0.99626511).epsilon(1e-8));
  CHECK(rep.gap == doctest::Approx(0.0642).epsilon(1e-3));
  CHECK(rep.exceeds_band);
  CHECK(rep.gap_over_band > 3.0);
}

TEST_CASE("vortex free energy") {
  CHECK(kt_free_energy(4, 2.0) == 0.0);
  CHECK(kt_free_energy(4, 1e6) == 0.0);
  CHECK(kt_free_energy(6, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kt_free_energy(2, std::exp(2.0)) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(kt_vortex_energy(4, std::exp(1.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(kt_free_energy(4, 1.0), RatioNotGreaterThanOne);
  CHECK_THROWS_AS(kt_free_energy(4, 0.5), RatioNotGreaterThanOne);
}

TEST_CASE("vortex counting is the algebraic charge sum and is additive") {
  CHECK(vortex_count_action(VortexConfiguration{}, 0.7) == 0.0);
  VortexConfiguration one({{0.1, 0.2, +1}}, 1.0, 10.0);
  CHECK(vortex_count_action(one, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  VortexConfiguration pair({{0.1, 0.2, +1}, {0.5, 0.5, -1}}, 1.0, 10.0);
  CHECK(vortex_count_action(pair, 123.0) == 0.0);
  // additivity over disjoint unions
  VortexConfiguration a({{0.0, 0.0, +1}, {0.3, 0.0, +1}}, 1.0, 10.0);
  VortexConfiguration b({{0.7, 0.1, -1}}, 1.0, 10.0);
  VortexConfiguration both({{0.0, 0.0, +1}, {0.3, 0.0, +1}, {0.7, 0.1, -1}}, 1.0, 10.0);
  const double dp = 0.42;
  CHECK(vortex_count_action(both, dp) ==
        doctest::Approx(vortex_count_action(a, dp) + vortex_count_action(b, dp)).epsilon(1e-15));
  CHECK_THROWS_AS(VortexConfiguration({{0.0, 0.0, 0}}, 1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(VortexConfiguration({}, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("conductance curve csv schema") {
  const std::string csv = conductance_curve_csv(0.1, 10.0, 5, 4);
  CHECK(csv.rfind("tau,g_half,g_dual,abs_diff\n", 0) == 0);
  std::size_t rows = 0;
  for (const char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 6);
}

TEST_SUITE_END();
