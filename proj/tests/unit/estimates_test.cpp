#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "mnl/estimates.hpp"
#include "mnl/special_functions.hpp"

using namespace mnl;

namespace {

SpaceParams space(const char* text) { return SpaceParams::parse(text); }

}  // namespace

TEST_CASE("log_gamma and beta against the standard library") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 10.0, 170.0}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
  for (double a : {0.25, 1.0, 3.5}) {
    for (double b : {0.25, 2.0, 40.0}) {
      CHECK(mnl::beta(a, b) == doctest::Approx(std::beta(a, b)).epsilon(1e-13));
      CHECK(log_beta(a, b) == doctest::Approx(std::log(std::beta(a, b))).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(mnl::beta(0.0, 1.0), std::domain_error);
}

TEST_CASE("the Beta identity holds under an independent quadrature") {
  // int_x^1 (1-rho)^(a-1) (rho-x)^b drho = B(a, b+1) (1-x)^(a+b), with smooth
  // exponents so plain Gauss-Kronrod converges.
  for (double a : {2.0, 3.5}) {
    for (double b : {1.0, 2.0}) {
      for (double x : {0.0, 0.5, 0.9}) {
        const double numeric = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double rho) { return std::pow(1.0 - rho, a - 1.0) * std::pow(rho - x, b); }, x, 1.0, 0, 1e-14);
        CHECK(numeric == doctest::Approx(std::beta(a, b + 1.0) * std::pow(1.0 - x, a + b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("check_beta_identity passes on the 75-point grid") {
  const auto reports = run_checks("beta_identity", {});
  CHECK(reports.size() == 75);
  for (const auto& r : reports) {
    CHECK(r.pass);
    CHECK(r.max_violation <= 1e-8);
    CHECK(r.metadata["closed_form"].get<double>() > 0.0);
  }
}

TEST_CASE("decay and pointwise checks on members") {
  const auto f = AnalyticFunction::power(Rational(1, 2));
  const auto radii = dyadic_radii(2, 20);
  CHECK(radii.size() == 19);
  CHECK(radii.back() == 1.0 - std::ldexp(1.0, -20));
  CHECK(check_little_oh_mean(f, space("2,2,1"), radii).pass);
  CHECK(check_little_oh_mean(f, space("1,1,1"), radii).pass);
  const auto pointwise = check_pointwise_bound(f, space("2,2,1"));
  CHECK(pointwise.pass);
  CHECK(pointwise.metadata.contains("decay_form"));
}

TEST_CASE("the q = inf sharpness examples fail their checks") {
  const auto s = space("1,inf,1");
  const auto f = AnalyticFunction::power(s.critical_order());
  CHECK_FALSE(check_little_oh_mean(f, s, dyadic_radii(2, 20)).pass);
  CHECK_FALSE(check_pointwise_bound(f, s).pass);
  const auto reports = run_checks("littleoh*", standard_battery());
  int expected = 0;
  for (const auto& r : reports) {
    CHECK_FALSE(r.unexpected());
    if (r.expected_fail) {
      ++expected;
      CHECK(r.instance.find("power:2") != std::string::npos);
      CHECK(r.metadata.contains("citation"));
    }
  }
  CHECK(expected == 1);
}

TEST_CASE("integral mean comparisons") {
  const auto radii = dyadic_radii(1, 20);
  const auto one = AnalyticFunction::constant(1.0);
  CHECK(check_lemma_F(one, 1, 2, radii).pass);
  CHECK(check_lemma_F(AnalyticFunction::power(Rational(1)), 1, PositiveExtended::infinity(), radii).pass);
  CHECK(check_lemma_D(AnalyticFunction::power(Rational(1, 4)), space("2,2,1"), Rational(4), radii).pass);
  CHECK(check_lemma_E(AnalyticFunction::power(Rational(1, 4)), space("2,2,1"), 4, radii).pass);
  CHECK(check_lemma_E(AnalyticFunction::power(Rational(1, 4)), space("2,2,1"), PositiveExtended::infinity(), radii).pass);
  CHECK(check_subharmonic_bound(AnalyticFunction::power(Rational(3, 4)), 1).pass);
}

TEST_CASE("extremal kernels") {
  const std::vector<double> z_mods{0.0, 0.5, 0.9, 0.99, 0.999};
  for (const char* text : {"2,2,1", "1,1,1/2", "inf,inf,1/2"}) {
    const auto r = check_extremal_kernel(space(text), Rational(1), z_mods);
    CAPTURE(text);
    CHECK(r.pass);
  }
}

TEST_CASE("glob matching and check selection") {
  CHECK(glob_match("*", "lemma_D"));
  CHECK(glob_match("lemma_?", "lemma_F"));
  CHECK(glob_match("beta*", "beta_identity"));
  CHECK_FALSE(glob_match("beta", "beta_identity"));
  CHECK_FALSE(glob_match("lemma_?", "lemma_DD"));
  CHECK(run_checks("no_such_check", standard_battery()).empty());
  CHECK(check_names().size() == 8);
}

TEST_CASE("reports sort deterministically and render as a table") {
  const auto reports = run_checks("lemma_F", standard_battery());
  REQUIRE(reports.size() == 50);
  for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
    CHECK(std::tie(reports[i].name, reports[i].instance) <= std::tie(reports[i + 1].name, reports[i + 1].instance));
  }
  const auto again = run_checks("lemma_F", standard_battery());
  CHECK(format_table(reports) == format_table(again));
  CHECK(format_table(reports).starts_with("check"));
  const auto j = reports.front().to_json();
  CHECK(j["check"] == "lemma_F");
  CHECK(j.contains("max_violation"));
}
