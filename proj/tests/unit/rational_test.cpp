#include <stdexcept>

#include "doctest.h"
#include "mnl/rational.hpp"
#include "mnl/space_params.hpp"

using mnl::PositiveExtended;
using mnl::Rational;
using mnl::SpaceParams;

TEST_CASE("rationals normalize and compare exactly") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("3/2") == Rational(3, 2));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3) == Rational(1));
  CHECK(Rational(1, 3) < Rational(334, 1000));
  CHECK(Rational(1, 3) > Rational(333, 1000));
  CHECK(Rational(2, 4).str() == "1/2");
}

TEST_CASE("decimal and malformed input is rejected") {
  CHECK_THROWS_AS(Rational::parse("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational overflow throws instead of wrapping") {
  const Rational big(INT64_MAX / 2 + 1);
  CHECK_THROWS_AS(big + big, std::overflow_error);
}

TEST_CASE("infinity is the maximal exponent and 1/inf is zero") {
  const auto inf = PositiveExtended::parse("inf");
  CHECK(inf.is_infinite());
  CHECK(inf.reciprocal() == Rational(0));
  CHECK(PositiveExtended(1000000) < inf);
  CHECK(PositiveExtended::parse("oo") == inf);
  CHECK_THROWS_AS(PositiveExtended(Rational(0)), std::domain_error);
  CHECK_THROWS(inf.value());
}

TEST_CASE("space parameters parse exactly") {
  const auto s = SpaceParams::parse("3/2,inf,1/3");
  CHECK(s.p == PositiveExtended(Rational(3, 2)));
  CHECK(s.q.is_infinite());
  CHECK(s.alpha == Rational(1, 3));
  CHECK(s.critical_order() == Rational(1));
  CHECK(s.str() == "(3/2,inf,1/3)");
  CHECK_THROWS(SpaceParams::parse("2,2,inf"));
  CHECK_THROWS(SpaceParams::parse("2,2,0"));
  CHECK_THROWS(SpaceParams::parse("2,2"));
  CHECK_THROWS(SpaceParams::parse("0.5,2,1"));
}
