#include <doctest.h>

#include <numeric>
#include <random>

#include "bench.hpp"
#include "error.hpp"
#include "oracle.hpp"
#include "simplex.hpp"
#include "support/oracles.hpp"

using namespace moep;

namespace {

LinearProgram one_var(double c, double lo, double hi) {
  LinearProgram lp;
  lp.objective = {c};
  lp.lower = {lo};
  lp.upper = {hi};
  return lp;
}

std::vector<double> y_of(const OracleResult& r) { return r.point->y; }

// A small mixed instance whose integer part spans at most 5 values per variable.
Problem small_instance(std::uint64_t seed, std::size_t d, std::size_t ints, std::size_t conts) {
  GenSpec spec;
  spec.family = Family::MomilpMixed;
  spec.d = d;
  spec.n = ints + conts;
  spec.m = 2 + seed % 3;
  spec.integer_ratio = static_cast<double>(ints) / static_cast<double>(spec.n);
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST_CASE("simplex") {
  SUBCASE("bounded below by a row") {
    LinearProgram lp = one_var(1.0, -kInf, kInf);
    lp.add_row({1.0}, RowSense::Ge, 3.0);
    LpResult r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(3.0));
  }

  SUBCASE("unbounded") {
    LinearProgram lp = one_var(-1.0, -kInf, kInf);
    lp.add_row({1.0}, RowSense::Ge, 0.0);
    CHECK(simplex_solve(lp).status == LpStatus::Unbounded);
  }

  SUBCASE("infeasible") {
    LinearProgram lp = one_var(0.0, -kInf, kInf);
    lp.add_row({1.0}, RowSense::Le, -1.0);
    lp.add_row({1.0}, RowSense::Ge, 0.0);
    CHECK(simplex_solve(lp).status == LpStatus::Infeasible);
  }

  SUBCASE("a small violation is not hidden by a row with a large right-hand side") {
    LinearProgram lp;
    lp.objective = {0.0, 0.0};
    lp.lower = {0.0, 0.0};
    lp.upper = {kInf, kInf};
    lp.add_row({1.0, 0.0}, RowSense::Le, 1.0);
    lp.add_row({1.0, 0.0}, RowSense::Ge, 1.0001);
    lp.add_row({0.0, 1.0}, RowSense::Ge, 1e5);
    CHECK(simplex_solve(lp).status == LpStatus::Infeasible);
  }

  SUBCASE("equality rows and free variables") {
    LinearProgram lp;
    lp.objective = {1.0, 2.0, -1.0};
    lp.lower = {-kInf, 0.0, -2.0};
    lp.upper = {kInf, kInf, 2.0};
    lp.add_row({1.0, 1.0, 0.0}, RowSense::Eq, 4.0);
    lp.add_row({1.0, -1.0, 0.0}, RowSense::Le, 1.0);
    LpResult r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(2.5));
    CHECK(r.x[1] == doctest::Approx(1.5));
    CHECK(r.x[2] == doctest::Approx(2.0));
  }

  SUBCASE("matches vertex enumeration on random polytopes") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int t = 0; t < 50; ++t) {
      Problem p;
      for (int k = 0; k < 3; ++k) p.variables.push_back({"x" + std::to_string(k), -3.0, 3.0, false});
      std::vector<double> c(3);
      for (double& v : c) v = coef(rng);
      p.objectives = {{"f", ObjSense::Min, c, std::nullopt, 0.0}, {"g", ObjSense::Min, {0, 0, 0}, std::nullopt, 0.0}};
      for (int j = 0; j < 3; ++j)
        p.constraints.push_back({"r" + std::to_string(j),
                                 {double(coef(rng)), double(coef(rng)), double(coef(rng))},
                                 std::nullopt,
                                 j == 2 ? RowSense::Ge : RowSense::Le,
                                 double(coef(rng))});
      double expected = testing::enumerated_weighted_min(p, std::vector<double>{1.0, 0.0});
      LpResult r = simplex_solve(relaxation(p, c));
      if (expected == kInf) {
        CHECK(r.status == LpStatus::Infeasible);
      } else {
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("weighted-sum oracle on E1") {
  BuiltinOracle oracle;
  Problem p = testing::e1();

  SUBCASE("uniform weight") {
    OracleResult r = oracle.solve_weighted_sum(p, WeightVector::uniform(2));
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(r.value == doctest::Approx(0.5));
    CHECK(r.value == doctest::Approx(testing::enumerated_weighted_min(p, std::vector<double>{0.5, 0.5})));
  }

  SUBCASE("zero weight component needs the lexicographic stage") {
    OracleResult r = oracle.solve_weighted_sum_lex(p, WeightVector::unit(2, 0));
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(r.value == doctest::Approx(0.0));
    CHECK(y_of(r)[0] == doctest::Approx(0.0));
    CHECK(y_of(r)[1] == doctest::Approx(1.0));
  }

  SUBCASE("unique optimum: lexicographic equals plain") {
    WeightVector w({0.3, 0.7});
    OracleResult a = oracle.solve_weighted_sum(p, w), b = oracle.solve_weighted_sum_lex(p, w);
    CHECK(y_of(a)[0] == doctest::Approx(y_of(b)[0]));
    CHECK(y_of(a)[1] == doctest::Approx(y_of(b)[1]));
  }

  SUBCASE("calls are counted") {
    std::size_t before = oracle.stats().calls;
    oracle.solve_weighted_sum(p, WeightVector::uniform(2));
    oracle.solve_weighted_sum_lex(p, WeightVector::uniform(2));
    CHECK(oracle.stats().calls == before + 2);
  }
}

TEST_CASE("weighted-sum oracle edge cases") {
  BuiltinOracle oracle;

  SUBCASE("unbounded") {
    Problem p = testing::e1();
    p.constraints.clear();
    for (auto& v : p.variables) v.upper = kInf;
    for (auto& o : p.objectives)
      for (double& c : o.coeffs) c = -c;
    CHECK(oracle.solve_weighted_sum(p, WeightVector::uniform(2)).status == OracleStatus::Unbounded);
  }

  SUBCASE("E2 lexicographic at a unit weight") {
    OracleResult r = oracle.solve_weighted_sum_lex(testing::e2(), WeightVector::unit(2, 0));
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(y_of(r) == std::vector<double>{0.0, 2.0});
  }

  SUBCASE("quadratic problems are unsupported") { CHECK_FALSE(oracle.supports(testing::disk_problem())); }
}

TEST_CASE("branch and bound") {
  SUBCASE("E2 relaxation is fractional, the optimum is integral") {
    Problem p = testing::e2();
    std::vector<double> obj{1.0, 1.0};
    LpResult relaxed = simplex_solve(relaxation(p, obj));
    CHECK(relaxed.value == doctest::Approx(4.0 / 3.0));
    OracleStats stats;
    OracleResult r = branch_and_bound(p, obj, {}, {}, &stats);
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(r.value == doctest::Approx(testing::enumerated_weighted_min(p, obj)));
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(stats.nodes > 1);
  }

  SUBCASE("continuous problem matches the simplex") {
    Problem p = testing::e1();
    std::vector<double> obj{0.2, 0.8};
    CHECK(branch_and_bound(p, obj).value == doctest::Approx(simplex_solve(relaxation(p, obj)).value));
  }

  SUBCASE("no integer point in a fractional box") {
    Problem p = testing::e2();
    p.constraints.push_back({"c3", {1, 0}, std::nullopt, RowSense::Ge, 0.2});
    p.constraints.push_back({"c4", {1, 0}, std::nullopt, RowSense::Le, 0.8});
    CHECK(branch_and_bound(p, std::vector<double>{1, 1}).status == OracleStatus::Infeasible);
  }

  SUBCASE("node limit") {
    GenSpec spec;
    spec.n = 12;
    spec.m = 6;
    spec.seed = 4;
    Problem p = generate(spec);
    BranchAndBoundOptions opts;
    opts.node_limit = 2;
    CHECK_THROWS_AS(branch_and_bound(p, p.objectives[0].coeffs, {}, opts), Error);
  }
}

TEST_CASE("oracle optimality, soundness and lexicographic guarantee on small instances") {
  BuiltinOracle oracle;
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::size_t d = 2 + seed % 3;
    std::size_t ints = 1 + seed % 3, conts = seed % 5;
    if (ints + conts < d) conts = d - ints;
    Problem p = small_instance(seed, d, ints, conts);
    std::vector<std::vector<double>> outcomes;
    for (const auto& x : testing::enumerate_solutions(p)) outcomes.push_back(evaluate(p, x));

    for (int t = 0; t < 4; ++t) {
      std::vector<double> w(d);
      if (t == 0) {
        w.assign(d, 0.0);
        w[seed % d] = 1.0;
      } else {
        std::exponential_distribution<double> e(1.0);
        for (double& v : w) v = e(rng);
        double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& v : w) v /= s;
      }
      WeightVector wv(w);
      OracleResult r = oracle.solve_weighted_sum_lex(p, wv);
      double expected = testing::enumerated_weighted_min(p, w);
      if (expected == kInf) {
        CHECK(r.status == OracleStatus::Infeasible);
        continue;
      }
      REQUIRE(r.status == OracleStatus::Optimal);
      CHECK(r.value == doctest::Approx(expected).epsilon(1e-6));
      CHECK(r.value == doctest::Approx(wv.dot(y_of(r))).epsilon(1e-6));
      CHECK(is_feasible(p, r.point->x));
      auto fy = evaluate(p, r.point->x);
      for (std::size_t i = 0; i < d; ++i) CHECK(fy[i] == doctest::Approx(y_of(r)[i]).epsilon(1e-6));
      for (const auto& y : outcomes) {
        CHECK(wv.dot(y) >= r.value - 1e-6);
        CHECK_FALSE(testing::weakly_dominates(y, y_of(r), 1e-6));
      }
    }
  }
}

TEST_CASE("weight vector") {
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), Error);
  CHECK_THROWS_AS(WeightVector({-0.1, 1.1}), Error);
  CHECK(WeightVector::unit(3, 2)[2] == 1.0);
  CHECK(WeightVector::uniform(4)[1] == doctest::Approx(0.25));
}
