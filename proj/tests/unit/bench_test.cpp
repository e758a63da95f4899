#include <doctest.h>

#include <algorithm>

#include "bench.hpp"
#include "error.hpp"
#include "parser.hpp"
#include "support/oracles.hpp"

using namespace moep;

namespace {

std::vector<std::vector<double>> sorted_ys(const std::vector<OutcomePoint>& pts) {
  std::vector<std::vector<double>> out;
  for (const auto& p : pts) out.push_back(p.y);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("generate") {
  GenSpec spec;
  spec.d = 3;
  spec.n = 10;
  spec.seed = 7;

  SUBCASE("deterministic per seed") {
    CHECK(serialize_problem(generate(spec), FileFormat::Lp) == serialize_problem(generate(spec), FileFormat::Lp));
    GenSpec other = spec;
    other.seed = 8;
    CHECK_FALSE(generate(spec) == generate(other));
  }

  SUBCASE("general family is pure integer within the coefficient ranges") {
    Problem p = generate(spec);
    CHECK(p.num_integer() == 10);
    CHECK(p.num_objectives() == 3);
    CHECK(validate(p).empty());
    for (const auto& o : p.objectives)
      for (double c : o.coeffs) CHECK((c >= -10 && c <= 10));
    for (const auto& c : p.constraints) {
      CHECK(c.sense == RowSense::Ge);
      for (double a : c.coeffs) CHECK((a >= 1 && a <= 10));
    }
  }

  SUBCASE("integer ratio") {
    spec.family = Family::MomilpMixed;
    spec.integer_ratio = 0.0;
    CHECK(generate(spec).num_integer() == 0);
    spec.integer_ratio = 1.0;
    CHECK(generate(spec).num_integer() == 10);
  }

  SUBCASE("invalid specs") {
    spec.d = 1;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.d = 11;
    CHECK_THROWS_AS(generate(spec), Error);
  }

  SUBCASE("family names") {
    CHECK(parse_family("momilp_mixed") == Family::MomilpMixed);
    CHECK(family_name(Family::MoilpGeneral) == "moilp_general");
    CHECK_THROWS_AS(parse_family("nope"), Error);
  }
}

TEST_CASE("brute force") {
  SUBCASE("E2 skips the midpoint") {
    BruteForceResult r = brute_force_extreme_points(testing::e2());
    CHECK(sorted_ys(r.extreme_points) == std::vector<std::vector<double>>{{0, 2}, {2, 0}});
    CHECK(r.nondominated.size() == 3);
  }

  SUBCASE("E1 polygon vertices") {
    BruteForceResult r = brute_force_extreme_points(testing::e1());
    auto ys = sorted_ys(r.extreme_points);
    REQUIRE(ys.size() == 2);
    CHECK(ys[0][0] == doctest::Approx(0.0));
    CHECK(ys[1][0] == doctest::Approx(1.0));
  }

  SUBCASE("infeasible") {
    Problem p = testing::e2();
    p.constraints[0].rhs = 100.0;
    BruteForceResult r = brute_force_extreme_points(p);
    CHECK(r.infeasible);
    CHECK(r.extreme_points.empty());
  }

  SUBCASE("caps") {
    GenSpec spec;
    spec.n = 10;
    CHECK_THROWS_AS(brute_force_extreme_points(generate(spec)), Error);
  }

  SUBCASE("extreme points are nondominated and separable") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      GenSpec spec;
      spec.family = Family::MomilpMixed;
      spec.d = 2 + seed % 3;
      spec.n = 4;
      spec.m = 3;
      spec.seed = seed;
      Problem p = generate(spec);
      BruteForceResult r = brute_force_extreme_points(p);
      CHECK(compare_point_sets(r.extreme_points, r.nondominated, 1e-9).missing.empty());
      std::vector<std::vector<double>> all;
      for (const auto& x : testing::enumerate_solutions(p)) all.push_back(evaluate(p, x));
      for (const auto& pt : r.extreme_points) {
        for (const auto& y : all) CHECK_FALSE(testing::weakly_dominates(y, pt.y, 1e-9));
      }
      auto ys = sorted_ys(r.extreme_points);
      for (std::size_t k = 0; k < ys.size(); ++k) CHECK(testing::admits_separating_weight(ys, k, 1e-9));
    }
  }
}

TEST_CASE("compare point sets") {
  std::vector<OutcomePoint> a{{{0, 1}, {}, {}}, {{1, 0}, {}, {}}};
  std::vector<OutcomePoint> b{{{1, 0.000001}, {}, {}}, {{0, 1}, {}, {}}};
  CHECK(compare_point_sets(a, b, 1e-5).equal);
  SetComparison c = compare_point_sets(a, b, 1e-9);
  CHECK_FALSE(c.equal);
  CHECK(c.missing.size() == 1);
  CHECK(c.extra.size() == 1);
}
