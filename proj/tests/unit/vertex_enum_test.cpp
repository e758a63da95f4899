#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "error.hpp"
#include "support/oracles.hpp"
#include "vertex_enum.hpp"

using namespace moep;

namespace {

std::vector<std::vector<double>> coords_of(const DualPolyhedron& poly) {
  std::vector<std::vector<double>> out;
  for (const auto& [id, v] : poly.vertices()) out.push_back(v.coords);
  return out;
}

bool contains(const std::vector<std::vector<double>>& set, const std::vector<double>& v, double tol) {
  return std::any_of(set.begin(), set.end(), [&](const std::vector<double>& u) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::abs(u[i] - v[i]) > tol) return false;
    return true;
  });
}

bool same_set(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& v : a)
    if (!contains(b, v, tol)) return false;
  return true;
}

// Every vertex satisfies all halfspaces and is reproduced by its incident system.
void check_consistency(const DualPolyhedron& poly) {
  const std::size_t d = poly.dimension();
  const auto& hs = poly.halfspaces();
  for (const auto& [id, v] : poly.vertices()) {
    for (const auto& h : hs) CHECK(h.slack(v.coords) <= poly.tol_geom());
    REQUIRE(v.incident.size() >= d);
    Eigen::MatrixXd A(v.incident.size(), d);
    Eigen::VectorXd b(v.incident.size());
    for (std::size_t r = 0; r < v.incident.size(); ++r) {
      const DualHalfspace& h = hs[v.incident[r]];
      for (std::size_t c = 0; c + 1 < d; ++c) A(r, c) = h.g[c];
      A(r, d - 1) = h.h;
      b(r) = h.rhs;
    }
    Eigen::VectorXd z = A.colPivHouseholderQr().solve(b);
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(z(i) - v.coords[i]) <= poly.tol_geom());
    for (std::size_t q : v.neighbors) {
      const DualVertex& u = poly.vertex(q);
      std::vector<std::size_t> common;
      std::set_intersection(v.incident.begin(), v.incident.end(), u.incident.begin(), u.incident.end(),
                            std::back_inserter(common));
      CHECK(common.size() >= d - 1);
    }
  }
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> y(d);
  for (double& v : y) v = std::round(u(rng) * 4.0) / 4.0;
  return y;
}

}  // namespace

TEST_CASE("init") {
  SUBCASE("d = 2") {
    DualPolyhedron poly = DualPolyhedron::init(2, supporting_inequality(std::vector<double>{1, 0}));
    CHECK(same_set(coords_of(poly), {{0, 0}, {1, 1}}, 1e-12));
    CHECK(poly.halfspaces().size() == 3);
    for (const auto& [id, v] : poly.vertices()) {
      CHECK_FALSE(v.visited);
      CHECK(v.ray_edge);
    }
    check_consistency(poly);
  }

  SUBCASE("d = 3") {
    DualPolyhedron poly = DualPolyhedron::init(3, supporting_inequality(std::vector<double>{1, 0, 0}));
    CHECK(same_set(coords_of(poly), {{0, 0, 0}, {1, 0, 1}, {0, 1, 0}}, 1e-12));
    check_consistency(poly);
  }

  SUBCASE("support without an a term") {
    DualHalfspace hs = supporting_inequality(std::vector<double>{1, 0});
    hs.h = 0.0;
    CHECK_THROWS_AS(DualPolyhedron::init(2, hs), Error);
  }
}

TEST_CASE("cut") {
  DualPolyhedron poly = DualPolyhedron::init(2, supporting_inequality(std::vector<double>{1, 0}));

  SUBCASE("second support removes the top vertex") {
    CutResult r = poly.cut(supporting_inequality(std::vector<double>{0, 1}));
    CHECK(r.removed.size() == 1);
    // One vertex on the cut segment, one where the cut meets the downward ray.
    REQUIRE(r.new_vertices.size() == 2);
    std::vector<std::vector<double>> fresh;
    for (std::size_t id : r.new_vertices) fresh.push_back(poly.vertex(id).coords);
    CHECK(same_set(fresh, {{0.5, 0.5}, {1, 0}}, 1e-12));
    CHECK(same_set(coords_of(poly), {{0, 0}, {0.5, 0.5}, {1, 0}}, 1e-12));
    check_consistency(poly);
  }

  SUBCASE("repeating an existing halfspace") {
    CHECK_THROWS_AS(poly.cut(supporting_inequality(std::vector<double>{1, 0})), Error);
    try {
      poly.cut(supporting_inequality(std::vector<double>{1, 0}));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CutIsRedundant);
    }
  }

  SUBCASE("a d = 3 cut creates one vertex per strictly crossed edge") {
    DualPolyhedron p3 = DualPolyhedron::init(3, supporting_inequality(std::vector<double>{4, 4, 4}));
    p3.cut(supporting_inequality(std::vector<double>{1, 5, 6}));
    p3.cut(supporting_inequality(std::vector<double>{6, 1, 5}));
    DualHalfspace hs = supporting_inequality(std::vector<double>{5, 6, 1});
    // This cut also passes through an existing vertex; edges ending there
    // are not crossed.
    auto side = [&](std::size_t id) {
      double s = hs.slack(p3.vertex(id).coords);
      return s > 1e-9 ? 1 : s < -1e-9 ? -1 : 0;
    };
    std::size_t cut_edges = 0;
    for (auto [a, b] : p3.edges())
      if (side(a) * side(b) < 0) ++cut_edges;
    for (const auto& [id, v] : p3.vertices())
      if (v.ray_edge && side(id) > 0) ++cut_edges;
    CutResult r = p3.cut(hs);
    CHECK(r.new_vertices.size() == cut_edges);
    auto expected = testing::subset_vertices(p3.halfspaces(), 3);
    CHECK(same_set(coords_of(p3), expected, 1e-7));
    check_consistency(p3);
  }
}

TEST_CASE("unvisited selection") {
  DualPolyhedron poly = DualPolyhedron::init(2, supporting_inequality(std::vector<double>{1, 0}));
  auto first = poly.unvisited();
  REQUIRE(first);
  CHECK(poly.vertex(*first).coords == std::vector<double>{1, 1});

  SUBCASE("ties go to the lexicographically smaller weight") {
    DualPolyhedron flat = DualPolyhedron::init(2, supporting_inequality(std::vector<double>{3, 3}));
    auto v = flat.unvisited();
    REQUIRE(v);
    CHECK(flat.vertex(*v).coords[0] == 0.0);
  }

  SUBCASE("none when all are visited") {
    for (const auto& [id, v] : std::map(poly.vertices())) poly.mark_visited(id);
    CHECK_FALSE(poly.unvisited());
  }
}

TEST_CASE("random cut sequences match subset enumeration") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = 2 + t % 3;
    DualPolyhedron poly = DualPolyhedron::init(d, supporting_inequality(random_point(rng, d)));
    std::size_t budget = 25 - d - 1;
    for (std::size_t k = 0; k < 200 && budget > 0; ++k) {
      DualHalfspace hs = supporting_inequality(random_point(rng, d));
      bool violated = false;
      for (const auto& [id, v] : poly.vertices()) violated |= hs.slack(v.coords) > poly.tol_geom();
      if (!violated) continue;
      poly.cut(hs);
      --budget;
      // The region only shrinks: every vertex satisfies every halfspace so far.
      for (const auto& v : coords_of(poly))
        for (const auto& h : poly.halfspaces()) CHECK(h.slack(v) <= poly.tol_geom());
    }
    auto expected = testing::subset_vertices(poly.halfspaces(), d);
    CHECK(same_set(coords_of(poly), expected, 1e-7));
    check_consistency(poly);
    CHECK(poly.facets().size() <= poly.halfspaces().size() - d);
  }
}

TEST_CASE("dump lists both representations") {
  DualPolyhedron poly = DualPolyhedron::init(2, supporting_inequality(std::vector<double>{1, 0}));
  std::string text = poly.dump();
  CHECK(std::count(text.begin(), text.end(), '\n') >= 5);
}
