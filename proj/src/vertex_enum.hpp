#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace moep {

/// On-plane tolerance for incidence and violation tests.
inline constexpr double kTolGeom = 1e-7;
/// Vertices closer than this (infinity norm) are merged.
inline constexpr double kTolMerge = 1e-9;

enum class HalfspaceOrigin { SimplexBound, SupportFromPoint };

/// g·w̄ + h·a <= rhs over the dual space (w̄ ∈ ℝ^{d-1}, a ∈ ℝ).
struct DualHalfspace {
  std::vector<double> g;
  double h = 0.0;
  double rhs = 0.0;
  HalfspaceOrigin origin = HalfspaceOrigin::SimplexBound;
  /// Outcome vector y this inequality was built from (SupportFromPoint only).
  std::vector<double> point;
  /// Caller-defined tag, e.g. an index into a table of witnesses.
  std::size_t tag = 0;

  /// Positive when coords violate the inequality.
  double slack(std::span<const double> coords) const;
};

/// The support inequality a <= Σ_{i<d} w̄_i y_i + (1 - Σ w̄_i) y_d.
DualHalfspace supporting_inequality(std::span<const double> y, std::size_t tag = 0);

struct DualVertex {
  std::size_t id = 0;
  /// (w̄_1, …, w̄_{d-1}, a)
  std::vector<double> coords;
  bool visited = false;
  /// Sorted halfspace indices tight at this vertex.
  std::vector<std::size_t> incident;
  /// Sorted ids of adjacent vertices.
  std::vector<std::size_t> neighbors;
  /// True when the downward ray from this vertex is an edge.
  bool ray_edge = false;

  double a() const { return coords.back(); }
};

struct CutResult {
  std::vector<std::size_t> new_vertices;
  std::vector<std::size_t> removed;
};

/// Outer approximation of the lower image, kept in both H- and V-representation.
///
/// The polyhedron lives in ℝ^d and recedes only in the direction (0,…,0,-1).
/// That direction is kept as an explicit generator so that cutting an
/// unbounded edge yields its finite endpoint like any other edge. Adjacency
/// uses the combinatorial test of the double-description method: two
/// generators span an edge iff no third generator is tight on every
/// inequality the pair shares.
class DualPolyhedron {
 public:
  /// Simplex bounds w̄ >= 0, Σw̄ <= 1 plus one support inequality.
  static DualPolyhedron init(std::size_t d, DualHalfspace first_support, double tol_geom = kTolGeom);

  /// Intersects with hs (h > 0). Throws CutIsRedundant when no vertex is
  /// violated by more than tol_geom and NumericalDegeneracy when a new
  /// vertex cannot be certified.
  CutResult cut(DualHalfspace hs);

  /// Unvisited vertex with the largest a; ties go to the lexicographically
  /// smallest w̄.
  std::optional<std::size_t> unvisited() const;
  void mark_visited(std::size_t vertex_id);

  std::size_t dimension() const { return d_; }
  double tol_geom() const { return tol_geom_; }
  const std::vector<DualHalfspace>& halfspaces() const { return halfspaces_; }
  const std::map<std::size_t, DualVertex>& vertices() const { return vertices_; }
  const DualVertex& vertex(std::size_t id) const { return vertices_.at(id); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  /// Indices of SupportFromPoint halfspaces whose tight vertices span a
  /// (d-1)-dimensional face.
  std::vector<std::size_t> facets() const;
  /// Live vertices tight at halfspace k.
  std::vector<std::size_t> tight_vertices(std::size_t k) const;

  /// Number of new vertices whose interpolated coordinates failed
  /// certification and had to be re-solved from their incident system.
  std::size_t degeneracy_events() const { return degeneracy_events_; }

  /// Plain-text H-rep followed by V-rep, one item per line.
  std::string dump() const;

 private:
  explicit DualPolyhedron(std::size_t d) : d_(d) {}

  bool ray_incident(std::size_t k) const { return halfspaces_[k].h == 0.0; }
  bool ray_blocks(const std::vector<std::size_t>& common) const;
  void connect(std::size_t p, std::size_t q);
  bool certify(const DualVertex& v) const;
  bool resolve_from_incident(DualVertex& v) const;
  void rebuild_all_adjacency();

  std::size_t d_;
  double tol_geom_ = kTolGeom;
  std::vector<DualHalfspace> halfspaces_;
  std::map<std::size_t, DualVertex> vertices_;
  std::size_t next_id_ = 0;
  std::size_t degeneracy_events_ = 0;
};

}  // namespace moep
