#include <doctest.h>

#include <algorithm>
#include <random>

#include "model.hpp"
#include "support/oracles.hpp"

using namespace moep;

namespace {

bool has_diagnostic(const std::vector<std::string>& diags, const std::string& needle) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("validate") {
  SUBCASE("well-formed problem has no diagnostics") { CHECK(validate(testing::e1()).empty()); }

  SUBCASE("single objective") {
    Problem p = testing::e1();
    p.objectives.pop_back();
    CHECK(has_diagnostic(validate(p), "2 objectives"));
  }

  SUBCASE("short coefficient vector") {
    Problem p = testing::e1();
    p.objectives[0].coeffs.pop_back();
    auto diags = validate(p);
    CHECK(diags.size() == 1);
    CHECK(has_diagnostic(diags, "f1"));
  }

  SUBCASE("one diagnostic per violation") {
    Problem p = testing::e1();
    p.objectives[0].coeffs.pop_back();
    p.constraints[0].coeffs.push_back(1.0);
    p.variables[0].lower = 2.0;
    CHECK(validate(p).size() == 3);
  }
}

TEST_CASE("to_minimization") {
  Problem p = testing::e1();

  SUBCASE("all-min problem is unchanged") {
    MinimizationForm m = to_minimization(p);
    CHECK(m.problem == p);
    CHECK(m.signs.flipped.empty());
  }

  SUBCASE("max objective is negated and recorded") {
    p.objectives[0].sense = ObjSense::Max;
    p.objectives[0].constant = 2.0;
    MinimizationForm m = to_minimization(p);
    CHECK(m.signs.flipped == std::vector<std::size_t>{0});
    CHECK(m.problem.objectives[0].sense == ObjSense::Min);
    CHECK(m.problem.objectives[0].coeffs == std::vector<double>{-1.0, 0.0});
    CHECK(m.problem.objectives[0].constant == -2.0);
    CHECK(m.problem.objectives[1] == p.objectives[1]);
    CHECK(m.signs.restore(std::vector<double>{-3.0, 4.0}) == std::vector<double>{3.0, 4.0});
  }

  SUBCASE("quadratic terms flip too") {
    p.objectives[1].sense = ObjSense::Max;
    SquareMatrix q(2);
    q(0, 1) = 0.5;
    p.objectives[1].quad = q;
    MinimizationForm m = to_minimization(p);
    CHECK((*m.problem.objectives[1].quad)(0, 1) == -0.5);
  }

  SUBCASE("applying the flips undoes them exactly") {
    p.objectives[0].sense = ObjSense::Max;
    p.objectives[0].coeffs = {0.1, -0.3};
    MinimizationForm m = to_minimization(p);
    CHECK(apply_signs(m.problem, m.signs) == p);
  }
}

TEST_CASE("evaluate") {
  SUBCASE("linear") {
    Problem p = testing::e1();
    CHECK(evaluate(p, std::vector<double>{3, 4}) == std::vector<double>{3, 4});
  }

  SUBCASE("quadratic") {
    Problem p = testing::e1();
    SquareMatrix q(2);
    q(0, 0) = q(1, 1) = 1.0;
    p.objectives[0].coeffs = {0, 0};
    p.objectives[0].quad = q;
    CHECK(evaluate(p, std::vector<double>{1, 2})[0] == doctest::Approx(5.0));
  }

  SUBCASE("linear in x without quadratic terms") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    Problem p = testing::e2();
    p.objectives[0].coeffs = {u(rng), u(rng)};
    p.objectives[1].coeffs = {u(rng), u(rng)};
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x{u(rng), u(rng)};
      double a = u(rng);
      std::vector<double> ax{a * x[0], a * x[1]};
      auto y = evaluate(p, x), ay = evaluate(p, ax);
      for (int i = 0; i < 2; ++i) CHECK(ay[i] == doctest::Approx(a * y[i]));
    }
  }
}

TEST_CASE("feasibility check") {
  Problem p = testing::e2();
  CHECK(is_feasible(p, std::vector<double>{1, 1}));
  CHECK_FALSE(is_feasible(p, std::vector<double>{0, 0}));
  CHECK_FALSE(is_feasible(p, std::vector<double>{0.5, 1.5}));
  CHECK(max_violation(p, std::vector<double>{3, 0}) == doctest::Approx(1.0));
}
