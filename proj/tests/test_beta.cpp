#include <doctest.h>

#include <cmath>

#include "opeflow/beta.hpp"

using namespace opeflow::ope;

TEST_SUITE_BEGIN("beta");

TEST_CASE("the full system lands on the closed forms") {
  const BetaSystem b = beta_system();

  const CoeffPoly expected_dgamma =
      -CoeffPoly::sym(Sym::Delta, 2) * CoeffPoly::sym(Sym::Level, -2) *
      (CoeffPoly(1) - CoeffPoly::sym(Sym::Gamma));
  CHECK(b.dgamma == expected_dgamma);

  const CoeffPoly expected_ddelta =
      CoeffPoly::mono(Rational(1, 3), Monomial::of(Sym::Delta, 3) * Monomial::of(Sym::Level, -2));
  CHECK(b.ddelta == expected_ddelta);

  const CoeffPoly expected_lambda = CoeffPoly::mono(
      Rational(4),
      Monomial::of(Sym::Pi, 1) * Monomial::of(Sym::Level, 1) * Monomial::of(Sym::Lambda, 1));
  CHECK(b.dgamma_lambda == expected_lambda);

  CHECK(b.two_trace_self_finite);
  CHECK(b.lambda_flow_gamma_blind);
  CHECK(b.radial_order_symmetric);
  CHECK_FALSE(b.quartic_feeds_single_trace);
  CHECK(b.quartic_max_level_degree < 6);
}

TEST_CASE("level four values") {
  const BetaSystem b = beta_system();
  const CoeffPoly d4 = b.ddelta.substituted(Sym::Level, Rational(4));
  CHECK(d4 == CoeffPoly::mono(Rational(1, 48), Monomial::of(Sym::Delta, 3)));
  // gamma = 1, delta = 0 is a fixed point
  const CoeffPoly g = b.dgamma.substituted(Sym::Gamma, Rational(1));
  CHECK(g.is_zero());
  const CoeffPoly d0 = b.ddelta.substituted(Sym::Delta, Rational(0));
  CHECK(d0.is_zero());
  // the lambda flow is independent of gamma
  CHECK(b.dgamma_lambda.max_exponent(Sym::Gamma) == 0);
}

TEST_CASE("scaling dimension of M from the engine") {
  for (int n = 1; n <= 10; ++n) {
    const auto undeformed = scaling_dimension_M(Rational(0), n);
    CHECK(undeformed.first == Rational(1, 2 * static_cast<std::int64_t>(n) * n));
    CHECK(undeformed.first == undeformed.second);
    const auto critical = scaling_dimension_M(Rational(1), n);
    CHECK(critical.first == Rational(0));
  }
  CHECK(scaling_dimension_M(Rational(1, 2), 4).first == Rational(1, 64));

  // symbolic form: (1 - gamma)/(2 n^2)
  const CoeffPoly h = scaling_dimension_M_symbolic();
  const CoeffPoly expected =
      CoeffPoly::mono(Rational(1, 2), Monomial::of(Sym::Level, -2)) *
      (CoeffPoly(1) - CoeffPoly::sym(Sym::Gamma));
  CHECK(h == expected);
}

TEST_CASE("multifractal parabola") {
  CHECK(delta_q(0.0, 4) == 0.0);
  CHECK(delta_q(1.0, 4) == 0.0);
  CHECK(delta_q(2.0, 4) == doctest::Approx(-0.5).epsilon(1e-15));
  for (double q = -3.0; q <= 4.0; q += 0.37)
    CHECK(std::fabs(delta_q(q, 4) - delta_q(1.0 - q, 4)) < 1e-15);
  CHECK_THROWS_AS(delta_q(1.0, 0), std::invalid_argument);
}

TEST_SUITE_END();
