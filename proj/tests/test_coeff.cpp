#include <doctest.h>

#include "opeflow/coeff.hpp"

using namespace opeflow::ope;

TEST_SUITE_BEGIN("coeff");

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
  CHECK(Rational(1, 3) / Rational(1, 6) == Rational(2));
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational::parse("-7/21") == Rational(-1, 3));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational overflow guard trips instead of wrapping") {
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, RationalOverflow);
}

TEST_CASE("polynomial ring operations") {
  const CoeffPoly n = CoeffPoly::sym(Sym::Level);
  const CoeffPoly d = CoeffPoly::sym(Sym::Delta);
  const CoeffPoly p = CoeffPoly(2) * n * d - d;
  CHECK(p.str() == "2*n*delta - 1*delta");
  CHECK((p - p).is_zero());
  CHECK(p * CoeffPoly(0) == CoeffPoly());
  CHECK(CoeffPoly::sym(Sym::Level, -2) * CoeffPoly::sym(Sym::Level, 2) == CoeffPoly(1));
}

TEST_CASE("substitution and coefficient extraction") {
  // -(delta^2/n^2)(1-gamma)
  const CoeffPoly beta = -CoeffPoly::sym(Sym::Delta, 2) * CoeffPoly::sym(Sym::Level, -2) *
                         (CoeffPoly(1) - CoeffPoly::sym(Sym::Gamma));
  const CoeffPoly at4 = beta.substituted(Sym::Level, Rational(4));
  CHECK(at4.coefficient_of(Sym::Gamma, 0) ==
        CoeffPoly::mono(Rational(-1, 16), Monomial::of(Sym::Delta, 2)));
  CHECK(beta.substituted(Sym::Gamma, Rational(1)).is_zero());
  CHECK(beta.max_exponent(Sym::Delta) == 2);
}

TEST_CASE("numeric evaluation binds pi automatically") {
  const CoeffPoly p = CoeffPoly::mono(Rational(4), Monomial::of(Sym::Pi, 1) *
                                                       Monomial::of(Sym::Level, 1));
  const double v = p.value({{Sym::Level, 4.0}});
  CHECK(v == doctest::Approx(16.0 * 3.14159265358979));
  CHECK_THROWS_AS(p.value({}), std::invalid_argument);
}

TEST_CASE("text form round-trips") {
  const CoeffPoly p = CoeffPoly::mono(Rational(-1, 16), Monomial::of(Sym::Delta, 2)) +
                      CoeffPoly::mono(Rational(1, 3), Monomial::of(Sym::Level, -2) *
                                                          Monomial::of(Sym::Gamma, 1));
  CHECK(CoeffPoly::parse(p.str()) == p);
  CHECK(CoeffPoly::parse("0").is_zero());
  CHECK(CoeffPoly::parse("2*pi*n^2") ==
        CoeffPoly::mono(Rational(2), Monomial::of(Sym::Pi, 1) * Monomial::of(Sym::Level, 2)));
}

TEST_SUITE_END();
