#include <cmath>
#include <complex>

#include "doctest.h"
#include "mnl/function_json.hpp"
#include "mnl/function_model.hpp"
#include "mnl/format.hpp"

using namespace mnl;

namespace {

std::vector<AnalyticFunction> coefficient_families() {
  LacunaryRule growing;
  growing.geometric = Rational(1, 2);
  return {AnalyticFunction::power(Rational(3, 2)),
          AnalyticFunction::power(Rational(-2)),
          AnalyticFunction::lacunary(growing),
          AnalyticFunction::kernel({0.3, -0.4}, Rational(1), Rational(5, 2)),
          AnalyticFunction::monomial(5).scaled({0.0, 2.0}),
          AnalyticFunction::series({1.0, {0.0, 1.0}, -0.5})};
}

}  // namespace

TEST_CASE("eval agrees with partial sums of the Taylor coefficients") {
  for (const auto& f : coefficient_families()) {
    const auto c = taylor_coefficients(f, 6000);
    for (double r : {0.0, 0.3, 0.7, 0.99}) {
      for (double theta : {0.0, 1.0, 2.5, -2.0}) {
        const Complex z = std::polar(r, theta);
        Complex sum = 0.0, zn = 1.0;
        for (const auto& cn : c) {
          sum += cn * zn;
          zn *= z;
        }
        const Complex direct = eval(f, z);
        CAPTURE(f.describe());
        CAPTURE(r);
        CHECK(std::abs(sum - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
      }
    }
  }
}

TEST_CASE("log_modulus matches eval away from the boundary") {
  const auto f = AnalyticFunction::log_power(Rational(1, 2), Rational(1));
  for (double t : {0.5, 0.1, 1e-3}) {
    for (double theta : {0.0, 0.7, 3.0}) {
      const Complex v = eval(f, std::polar(1.0 - t, theta));
      CHECK(log_modulus(f, t, theta) == doctest::Approx(std::log(std::abs(v))).epsilon(1e-12));
    }
  }
  // (1 - z)^-1 at z = 1 - t is 1/t exactly, even far below double epsilon.
  CHECK(log_modulus(AnalyticFunction::power(Rational(1)), 1e-200, 0.0) == doctest::Approx(200 * std::log(10.0)));
}

TEST_CASE("power membership flips exactly at alpha + 1/p") {
  for (const char* text : {"1,2,1", "2,1,1/2", "1/2,3,2", "4,inf,3/4", "inf,1,1", "1,inf,1"}) {
    const auto s = SpaceParams::parse(text);
    const Rational critical = s.critical_order();
    for (int k = -40; k <= 40; ++k) {
      const Rational gamma = critical + Rational(k, 16);
      const bool member = known_membership(AnalyticFunction::power(gamma), s).is_member();
      const bool expected = s.q.is_infinite() ? k <= 0 : k < 0;
      CAPTURE(text);
      CAPTURE(gamma.str());
      CHECK(member == expected);
    }
  }
}

TEST_CASE("membership is monotone in alpha for power and lacunary families") {
  LacunaryRule rule;
  rule.geometric = Rational(1);
  rule.poly_decay = Rational(1, 2);
  const std::vector<AnalyticFunction> fs{AnalyticFunction::power(Rational(3, 2)), AnalyticFunction::power(Rational(2)),
                                         AnalyticFunction::lacunary(rule)};
  for (const auto& f : fs) {
    for (const char* p : {"1", "2", "inf"}) {
      for (const char* q : {"1", "2", "inf"}) {
        bool seen_member = false;
        for (int k = 1; k <= 24; ++k) {
          const SpaceParams s(PositiveExtended::parse(p), PositiveExtended::parse(q), Rational(k, 8));
          const bool member = known_membership(f, s).is_member();
          CHECK(!(seen_member && !member));
          seen_member = seen_member || member;
        }
      }
    }
  }
}

TEST_CASE("log-power and lacunary criteria at the critical exponent") {
  const auto s = SpaceParams::parse("1,2,1");
  CHECK(known_membership(AnalyticFunction::log_power(Rational(2), Rational(1)), s).is_member());
  CHECK(known_membership(AnalyticFunction::log_power(Rational(2), Rational(1, 2)), s).is_not_member());
  const auto s_inf = SpaceParams::parse("1,inf,1");
  CHECK(known_membership(AnalyticFunction::log_power(Rational(2), Rational(0)), s_inf).is_member());

  // 2^(-n alpha) a_n with a_n = 2^(n alpha) n^(-c) is in l^q iff c q > 1.
  LacunaryRule rule;
  rule.geometric = Rational(1);
  rule.poly_decay = Rational(1, 2);
  const auto f = AnalyticFunction::lacunary(rule);
  CHECK(known_membership(f, SpaceParams::parse("2,3,1")).is_member());
  CHECK(known_membership(f, SpaceParams::parse("2,2,1")).is_not_member());
  CHECK(known_membership(f, SpaceParams::parse("3,inf,1")).is_member());
  CHECK(known_membership(f, SpaceParams::parse("2,1,2")).is_member());
}

TEST_CASE("lacunary expansion drops terms below the requested tolerance") {
  const auto f = AnalyticFunction::lacunary(LacunaryRule{});
  const double t = std::ldexp(1.0, -10);
  const auto e = lacunary_expansion(f, t, 1e-15);
  double kept = 0.0;
  for (const auto& term : e.terms) kept += std::exp(term.log_radius_power);
  double full = 0.0;
  for (int n = 1; n <= 62; ++n) full += std::pow(1.0 - t, std::ldexp(1.0, n - 1));
  CHECK(std::abs(full - kept) <= e.tail_bound + 1e-15 * full);
  CHECK(e.tail_bound <= 1e-15 * kept);
  CHECK(lacunary_expansion(f, 1.0).terms.empty());
}

TEST_CASE("function specs round-trip through JSON and shorthand") {
  for (const char* spec : {"power:3/2", "logpower:1/2,1", "lacunary:ones", "lacunary:1,1/2,1/3", "kernel:0.5,0,1,2",
                           "monomial:4", "series:1,0.5,0,-0.25", "const:2"}) {
    const auto f = parse_function_spec(spec);
    const auto g = function_from_json(function_to_json(f));
    CHECK(g.describe() == f.describe());
    const Complex z{0.3, 0.2};
    CHECK(std::abs(eval(f, z) - eval(g, z)) == 0.0);
  }
  CHECK(parse_function_spec(R"({"family": "power", "params": {"gamma": "3/2"}})").describe() == "power:3/2");
  CHECK_THROWS(parse_function_spec("power:1.5"));
  CHECK_THROWS(parse_function_spec("bogus:1"));
}

TEST_CASE("format_double is the shortest round-trip form") {
  for (double x : {1.0, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}
