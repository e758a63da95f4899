#include <doctest.h>

#include "bench.hpp"
#include "error.hpp"
#include "pipeline.hpp"
#include "preprocess.hpp"
#include "support/oracles.hpp"

using namespace moep;

TEST_CASE("ideal point") {
  BuiltinOracle oracle;
  for (const Problem& p : {testing::e1(), testing::e2()}) {
    auto ideal = compute_ideal_point(p, oracle).values;
    CHECK(ideal[0] == doctest::Approx(0.0));
    CHECK(ideal[1] == doctest::Approx(0.0));
  }

  Problem p = testing::e1();
  p.constraints.clear();
  p.variables[1].lower = -kInf;
  try {
    compute_ideal_point(p, oracle);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoIdealPoint);
    CHECK(std::string(e.what()).find("f2") != std::string::npos);
  }
}

TEST_CASE("normalize") {
  BuiltinOracle oracle;

  SUBCASE("ranges 1 and 1000") {
    Problem p = testing::e1();
    p.objectives[1].coeffs[1] = 1000.0;
    Normalized n = normalize(p, oracle);
    CHECK(n.scaling.multipliers[0] == doctest::Approx(1.0));
    CHECK(n.scaling.multipliers[1] == doctest::Approx(1e-3));
    IdealPoint scaled = compute_ideal_point(n.problem, oracle);
    for (std::size_t i = 0; i < 2; ++i) {
      double worst = 0.0;
      for (const auto& m : scaled.minimizers) worst = std::max(worst, m.y[i]);
      CHECK(worst - scaled.values[i] == doctest::Approx(1.0));
    }
  }

  SUBCASE("equal ranges share a common factor") {
    Problem p = testing::e2();
    Normalized n = normalize(p, oracle);
    CHECK(n.scaling.multipliers[0] == doctest::Approx(n.scaling.multipliers[1]));
  }

  SUBCASE("zero range keeps the objective unscaled") {
    Problem p = testing::e1();
    p.objectives[1].coeffs = {0.0, 0.0};
    p.objectives[1].constant = 5.0;
    Normalized n = normalize(p, oracle);
    CHECK(n.scaling.multipliers[1] == 1.0);
    CHECK(n.scaling.ideal_point[1] == 5.0);
  }

  SUBCASE("scaling round trips") {
    Scaling s;
    s.multipliers = {0.25, 3.0};
    s.offsets = s.ideal_point = {0.0, 0.0};
    std::vector<double> y{1.7, -2.2};
    auto back = s.unapply(s.apply(y));
    CHECK(back[0] == doctest::Approx(y[0]).epsilon(1e-12));
    CHECK(back[1] == doctest::Approx(y[1]).epsilon(1e-12));
    auto w = s.unapply_weight(std::vector<double>{0.5, 0.5});
    CHECK(w[0] + w[1] == doctest::Approx(1.0));
    CHECK(w[0] / w[1] == doctest::Approx(0.25 / 3.0));
  }
}

TEST_CASE("pipeline with and without normalization agree") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenSpec spec;
    spec.family = Family::MomilpMixed;
    spec.d = 2 + seed % 3;
    spec.n = 4;
    spec.m = 3;
    spec.seed = seed;
    Problem p = generate(spec);
    for (double& c : p.objectives[0].coeffs) c *= 1000.0;
    p.objectives[1].sense = ObjSense::Max;
    BuiltinOracle a, b;
    SolverConfig on, off;
    off.normalize = false;
    PipelineResult ra = run_pipeline(p, on, a), rb = run_pipeline(p, off, b);
    CHECK(compare_point_sets(ra.extreme_points.points, rb.extreme_points.points, 1e-5).equal);
    auto sound = testing::check_soundness(p, ra.extreme_points.points);
    CHECK_MESSAGE(sound.ok, sound.detail);
  }
}

TEST_CASE("pipeline rejects invalid problems with every diagnostic") {
  Problem p = testing::e1();
  p.objectives[0].coeffs.pop_back();
  p.constraints[0].coeffs.push_back(0.0);
  BuiltinOracle oracle;
  try {
    run_pipeline(p, {}, oracle);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
    CHECK(std::string(e.what()).find("f1") != std::string::npos);
    CHECK(std::string(e.what()).find("c1") != std::string::npos);
  }
}
