#include <cmath>

#include "doctest.h"
#include "grid.hpp"
#include "mnl/estimates.hpp"
#include "mnl/inclusion.hpp"

using namespace mnl;

namespace {

SpaceParams space(const char* text) { return SpaceParams::parse(text); }

}  // namespace

TEST_CASE("branches of the characterization") {
  CHECK(classify_inclusion(space("4,2,1"), space("2,3,1")) == Branch::T1Equal);
  CHECK(classify_inclusion(space("2,2,1"), space("2,1,1")) == Branch::T1FailQ);
  CHECK(classify_inclusion(space("2,2,1"), space("1,2,2")) == Branch::T1Strict);
  CHECK(classify_inclusion(space("2,2,2"), space("1,2,1")) == Branch::T1FailAlpha);
  CHECK(classify_inclusion(space("1,2,1"), space("2,2,2")) == Branch::T2Strict);
  CHECK(classify_inclusion(space("1,1,1"), space("2,2,3/2")) == Branch::T2Equal);
  CHECK(classify_inclusion(space("1,2,1"), space("2,1,3/2")) == Branch::T2FailEqual);
  CHECK(classify_inclusion(space("1,2,1"), space("2,1,1/2")) == Branch::T2FailStrict);
  CHECK(classify_inclusion(space("1,2,1"), space("inf,2,1")) == Branch::T2FailStrict);
}

TEST_CASE("embedding constants") {
  auto constant = [](const char* a, const char* b) { return *decide_inclusion(space(a), space(b)).constant; };
  CHECK(constant("4,2,1", "2,3,1").value == doctest::Approx(std::cbrt(1.5)).epsilon(1e-15));
  CHECK(constant("2,2,1", "2,2,3").value == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(constant("2,2,1", "2,inf,3").value == 1.0);
  CHECK(constant("2,2,1", "2,inf,1").value == 1.0);
  // m = 4 for (1,1,1); u = inf leaves m^1.
  CHECK(constant("1,1,1", "inf,inf,5/2").value == doctest::Approx(4.0).epsilon(1e-14));
  // m^(1/2) (beta / (beta - alpha + 1/u - 1/p))^(1/v) with m = 4.
  CHECK(constant("1,1,1", "2,1,2").value == doctest::Approx(8.0).epsilon(1e-14));
  const auto t2_equal = constant("1,1,1", "2,2,3/2");
  CHECK_FALSE(t2_equal.is_explicit());
  CHECK(t2_equal.value == doctest::Approx(std::sqrt(1.5 * 2.0)).epsilon(1e-15));
  CHECK(t2_equal.to_json()["value"] == "C-dependent");
  CHECK(constant("1,1,1", "2,inf,3/2").formula == "C");
}

TEST_CASE("reflexive inclusions have constant one") {
  for (const auto& s : testing::space_pool()) {
    const auto v = decide_inclusion(s, s);
    REQUIRE(v.included);
    CHECK(v.branch == Branch::T1Equal);
    CHECK(v.constant->is_explicit());
    CHECK(v.constant->value == 1.0);
  }
}

TEST_CASE("witnesses lie in the source and outside the target") {
  const auto grid = testing::inclusion_grid();
  CHECK(grid.size() == 200);
  std::map<Branch, int> counts;
  for (const auto& g : grid) {
    ++counts[g.branch];
    if (is_included_branch(g.branch)) continue;
    const auto w = witness(g.src, g.dst, g.branch);
    CAPTURE(g.src.str());
    CAPTURE(g.dst.str());
    CHECK(known_membership(w, g.src).is_member());
    CHECK(known_membership(w, g.dst).is_not_member());
  }
  CHECK(counts.size() == 8);
  for (const auto& [branch, n] : counts) CHECK(n == 25);
}

TEST_CASE("spec witness shapes") {
  const auto v = decide_inclusion(space("2,2,1"), space("2,1,1"));
  REQUIRE_FALSE(v.included);
  CHECK(v.witness->as<Lacunary>() != nullptr);
  CHECK(v.to_json()["verdict"] == "not_included");
  const auto w = witness(space("1,2,1"), space("2,1,3/2"), Branch::T2FailEqual);
  REQUIRE(w.as<LogPower>() != nullptr);
  CHECK(w.as<LogPower>()->gamma == Rational(2));
  CHECK(w.as<LogPower>()->c == Rational(1));
}

TEST_CASE("mismatched branches are rejected") {
  CHECK_THROWS_AS(embedding_constant(space("2,2,1"), space("2,1,1"), Branch::T1Equal), BranchMismatch);
  CHECK_THROWS_AS(embedding_constant(space("2,2,1"), space("2,1,1"), Branch::T1FailQ), BranchMismatch);
  CHECK_THROWS_AS(witness(space("2,2,1"), space("2,2,1"), Branch::T1Equal), BranchMismatch);
  CHECK_THROWS_AS(witness(space("2,2,1"), space("2,1,1"), Branch::T1FailAlpha), BranchMismatch);
  CHECK_THROWS_AS(verify_embedding(space("2,2,1"), space("2,1,1"), {}), BranchMismatch);
}

TEST_CASE("inclusion is monotone in the target weight and transitive") {
  const auto pool = testing::space_pool();
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      if (!decide_inclusion(a, b).included) continue;
      const SpaceParams raised(b.p, b.q, b.alpha + Rational(1, 3));
      CHECK(decide_inclusion(a, raised).included);
      for (const auto& c : pool) {
        if (is_included_branch(classify_inclusion(b, c))) CHECK(is_included_branch(classify_inclusion(a, c)));
      }
    }
  }
}

TEST_CASE("verify_embedding over the standard battery") {
  const auto battery = standard_battery();
  REQUIRE(battery.size() == 10);
  for (auto [a, b] : {std::pair{"4,2,1", "2,3,1"}, std::pair{"2,2,1", "1,2,3/2"}, std::pair{"1,1,1", "2,2,3/2"},
                      std::pair{"1,2,1", "2,2,2"}}) {
    const auto src = space(a), dst = space(b);
    if (!decide_inclusion(src, dst).constant->is_explicit()) {
      CHECK_THROWS_AS(verify_embedding(src, dst, battery), BranchMismatch);
      continue;
    }
    const auto report = verify_embedding(src, dst, battery, 1e-6);
    CAPTURE(report.to_json().dump());
    CHECK(report.pass);
    CHECK(report.max_ratio <= report.constant.value * (1.0 + 4e-6));
    int evaluated = 0;
    for (const auto& s : report.samples) evaluated += s.status == EmbeddingSample::Status::Pass;
    CHECK(evaluated >= 8);
  }
}

TEST_CASE("a false constant is caught") {
  // Scaling the norm on the target side by 10 must break the bound.
  const auto report = verify_embedding(space("2,2,1"), space("2,2,2"), standard_battery(), 1e-6,
                                       [](const AnalyticFunction& f, const SpaceParams& s, double tol) {
                                         auto r = mixed_norm(f, s, tol);
                                         if (s == SpaceParams::parse("2,2,2")) r.value *= 10.0;
                                         return r;
                                       });
  CHECK_FALSE(report.pass);
}
