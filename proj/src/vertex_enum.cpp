#include "vertex_enum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>

#include "error.hpp"

namespace moep {

double DualHalfspace::slack(std::span<const double> coords) const {
  double s = h * coords.back() - rhs;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * coords[i];
  return s;
}

DualHalfspace supporting_inequality(std::span<const double> y, std::size_t tag) {
  const std::size_t d = y.size();
  DualHalfspace hs;
  hs.g.resize(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) hs.g[i] = -(y[i] - y[d - 1]);
  hs.h = 1.0;
  hs.rhs = y[d - 1];
  hs.origin = HalfspaceOrigin::SupportFromPoint;
  hs.point.assign(y.begin(), y.end());
  hs.tag = tag;
  return hs;
}

namespace {

using IndexSet = std::vector<std::size_t>;

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet unite(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const IndexSet& super, const IndexSet& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

void insert_sorted(IndexSet& s, std::size_t v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
}

void erase_sorted(IndexSet& s, std::size_t v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it != s.end() && *it == v) s.erase(it);
}

double inf_dist(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double cert_tol(std::span<const double> coords, double tol_geom) {
  return tol_geom * std::max(1.0, std::abs(coords.back()));
}

// Row rank of the given vectors via Gaussian elimination with partial pivoting.
std::size_t rank_of(std::vector<std::vector<double>> rows, double tol) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t best = rank;
    for (std::size_t r = rank + 1; r < rows.size(); ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[best][c])) best = r;
    if (std::abs(rows[best][c]) <= tol) continue;
    std::swap(rows[rank], rows[best]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const double f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

DualPolyhedron DualPolyhedron::init(std::size_t d, DualHalfspace first_support, double tol_geom) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "dual polyhedron needs d >= 2");
  if (first_support.origin != HalfspaceOrigin::SupportFromPoint)
    throw Error(ErrorCode::InvalidArgument, "initial halfspace must be a support inequality");
  if (first_support.g.size() != d - 1)
    throw Error(ErrorCode::InvalidArgument, "initial halfspace has wrong dimension");
  if (!(first_support.h > 0.0))
    throw Error(ErrorCode::InvalidArgument, "degenerate initial support inequality (h <= 0)");
  if (!(tol_geom > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_geom must be positive");
  const double h = first_support.h;
  for (double& v : first_support.g) v /= h;
  first_support.rhs /= h;
  first_support.h = 1.0;

  DualPolyhedron poly(d);
  poly.tol_geom_ = tol_geom;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    DualHalfspace lb;
    lb.g.assign(d - 1, 0.0);
    lb.g[i] = -1.0;
    poly.halfspaces_.push_back(std::move(lb));
  }
  DualHalfspace sum;
  sum.g.assign(d - 1, 1.0);
  sum.rhs = 1.0;
  poly.halfspaces_.push_back(std::move(sum));
  poly.halfspaces_.push_back(std::move(first_support));
  const DualHalfspace& support = poly.halfspaces_.back();

  // Corners of the weight simplex: the origin and the unit vectors.
  for (std::size_t corner = 0; corner < d; ++corner) {
    DualVertex v;
    v.id = poly.next_id_++;
    v.coords.assign(d, 0.0);
    if (corner > 0) v.coords[corner - 1] = 1.0;
    double gw = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) gw += support.g[i] * v.coords[i];
    v.coords[d - 1] = support.rhs - gw;
    for (std::size_t k = 0; k < poly.halfspaces_.size(); ++k)
      if (std::abs(poly.halfspaces_[k].slack(v.coords)) <= tol_geom) v.incident.push_back(k);
    poly.vertices_.emplace(v.id, std::move(v));
  }
  poly.rebuild_all_adjacency();
  return poly;
}

bool DualPolyhedron::ray_blocks(const IndexSet& common) const {
  return std::all_of(common.begin(), common.end(), [&](std::size_t k) { return ray_incident(k); });
}

void DualPolyhedron::connect(std::size_t p, std::size_t q) {
  insert_sorted(vertices_.at(p).neighbors, q);
  insert_sorted(vertices_.at(q).neighbors, p);
}

void DualPolyhedron::rebuild_all_adjacency() {
  for (auto& [id, v] : vertices_) {
    v.neighbors.clear();
    v.ray_edge = false;
  }
  for (auto it = vertices_.begin(); it != vertices_.end(); ++it) {
    auto& p = it->second;
    for (auto jt = std::next(it); jt != vertices_.end(); ++jt) {
      const auto& q = jt->second;
      const IndexSet common = intersect(p.incident, q.incident);
      if (common.size() + 1 < d_) continue;
      if (ray_blocks(common)) continue;
      const bool blocked = std::any_of(vertices_.begin(), vertices_.end(), [&](const auto& r) {
        return r.first != p.id && r.first != q.id && contains(r.second.incident, common);
      });
      if (!blocked) connect(p.id, q.id);
    }
    IndexSet ray_common;
    for (std::size_t k : p.incident)
      if (ray_incident(k)) ray_common.push_back(k);
    if (ray_common.size() + 1 < d_) continue;
    const bool blocked = std::any_of(vertices_.begin(), vertices_.end(), [&](const auto& r) {
      return r.first != p.id && contains(r.second.incident, ray_common);
    });
    p.ray_edge = !blocked;
  }
}

bool DualPolyhedron::certify(const DualVertex& v) const {
  const double tol = cert_tol(v.coords, tol_geom_);
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) {
    const double s = halfspaces_[k].slack(v.coords);
    if (s > tol) return false;
    if (std::binary_search(v.incident.begin(), v.incident.end(), k) && s < -tol) return false;
  }
  return true;
}

bool DualPolyhedron::resolve_from_incident(DualVertex& v) const {
  std::vector<std::vector<double>> rows;
  for (std::size_t k : v.incident) {
    const auto& hs = halfspaces_[k];
    std::vector<double> row(hs.g.begin(), hs.g.end());
    row.push_back(hs.h);
    row.push_back(hs.rhs);
    rows.push_back(std::move(row));
  }
  if (rows.size() < d_) return false;
  // Eliminate with row pivoting; only the first d pivot rows are used.
  for (std::size_t c = 0; c < d_; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < rows.size(); ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[best][c])) best = r;
    if (std::abs(rows[best][c]) < 1e-12) return false;
    std::swap(rows[c], rows[best]);
    for (std::size_t r = c + 1; r < rows.size(); ++r) {
      const double f = rows[r][c] / rows[c][c];
      for (std::size_t k = c; k <= d_; ++k) rows[r][k] -= f * rows[c][k];
    }
  }
  std::vector<double> x(d_);
  for (std::size_t c = d_; c-- > 0;) {
    double s = rows[c][d_];
    for (std::size_t k = c + 1; k < d_; ++k) s -= rows[c][k] * x[k];
    x[c] = s / rows[c][c];
  }
  v.coords = std::move(x);
  return true;
}

CutResult DualPolyhedron::cut(DualHalfspace hs) {
  if (hs.g.size() != d_ - 1) throw Error(ErrorCode::InvalidArgument, "cut: halfspace has wrong dimension");
  if (!(hs.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "cut: halfspace must bound a from above (h > 0)");
  const double h = hs.h;
  for (double& v : hs.g) v /= h;
  hs.rhs /= h;
  hs.h = 1.0;

  std::vector<std::size_t> violating, tight;
  std::map<std::size_t, double> slack;
  for (const auto& [id, v] : vertices_) {
    const double s = hs.slack(v.coords);
    slack[id] = s;
    if (s > tol_geom_)
      violating.push_back(id);
    else if (s >= -tol_geom_)
      tight.push_back(id);
  }
  if (violating.empty()) throw Error(ErrorCode::CutIsRedundant, "cut: no vertex violates the halfspace");

  const std::size_t knew = halfspaces_.size();
  halfspaces_.push_back(hs);
  for (std::size_t id : tight) insert_sorted(vertices_.at(id).incident, knew);

  struct Created {
    DualVertex vertex;
    std::vector<std::size_t> creators;  // kept endpoints of the cut edges
  };
  std::vector<Created> created;
  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> tight_links;

  auto add_candidate = [&](std::vector<double> coords, IndexSet incident, std::optional<std::size_t> creator) {
    for (auto& c : created) {
      if (inf_dist(c.vertex.coords, coords) <= kTolMerge) {
        c.vertex.incident = unite(c.vertex.incident, incident);
        if (creator)
          c.creators.push_back(*creator);
        else
          c.vertex.ray_edge = true;
        return;
      }
    }
    for (std::size_t id : tight) {
      auto& t = vertices_.at(id);
      if (inf_dist(t.coords, coords) <= kTolMerge) {
        t.incident = unite(t.incident, incident);
        tight_links.emplace_back(id, creator);
        return;
      }
    }
    Created c;
    c.vertex.coords = std::move(coords);
    c.vertex.incident = std::move(incident);
    if (creator)
      c.creators.push_back(*creator);
    else
      c.vertex.ray_edge = true;
    created.push_back(std::move(c));
  };

  const std::set<std::size_t> violating_set(violating.begin(), violating.end());
  for (std::size_t vid : violating) {
    const auto& v = vertices_.at(vid);
    const double sv = slack[vid];
    for (std::size_t uid : v.neighbors) {
      if (violating_set.count(uid)) continue;
      const double su = slack[uid];
      if (su >= -tol_geom_) continue;
      const auto& u = vertices_.at(uid);
      const double t = sv / (sv - su);
      std::vector<double> coords(d_);
      for (std::size_t i = 0; i < d_; ++i) coords[i] = v.coords[i] + t * (u.coords[i] - v.coords[i]);
      IndexSet inc = intersect(v.incident, u.incident);
      insert_sorted(inc, knew);
      add_candidate(std::move(coords), std::move(inc), uid);
    }
    if (v.ray_edge) {
      std::vector<double> coords = v.coords;
      coords.back() -= sv;
      IndexSet inc;
      for (std::size_t k : v.incident)
        if (ray_incident(k)) inc.push_back(k);
      insert_sorted(inc, knew);
      add_candidate(std::move(coords), std::move(inc), std::nullopt);
    }
  }

  for (auto& c : created) {
    if (certify(c.vertex)) continue;
    DualVertex repaired = c.vertex;
    if (!resolve_from_incident(repaired) || !certify(repaired)) {
      halfspaces_.pop_back();
      throw Error(ErrorCode::NumericalDegeneracy, "cut: new vertex could not be certified within tolerance");
    }
    ++degeneracy_events_;
    c.vertex = std::move(repaired);
  }

  CutResult result;
  for (std::size_t vid : violating) {
    for (std::size_t uid : vertices_.at(vid).neighbors)
      if (!violating_set.count(uid)) erase_sorted(vertices_.at(uid).neighbors, vid);
    vertices_.erase(vid);
    result.removed.push_back(vid);
  }

  for (auto [tid, creator] : tight_links) {
    if (creator)
      connect(tid, *creator);
    else
      vertices_.at(tid).ray_edge = true;
  }

  std::vector<std::size_t> face = tight;
  for (auto& c : created) {
    c.vertex.id = next_id_++;
    const std::size_t id = c.vertex.id;
    vertices_.emplace(id, std::move(c.vertex));
    for (std::size_t uid : c.creators) connect(id, uid);
    face.push_back(id);
    result.new_vertices.push_back(id);
  }

  // Edges inside the new facet: combinatorial test among vertices on it.
  for (std::size_t id : tight) {
    auto& nb = vertices_.at(id).neighbors;
    std::erase_if(nb, [&](std::size_t o) { return std::find(tight.begin(), tight.end(), o) != tight.end(); });
  }
  for (std::size_t i = 0; i < face.size(); ++i) {
    for (std::size_t j = i + 1; j < face.size(); ++j) {
      const IndexSet common = intersect(vertices_.at(face[i]).incident, vertices_.at(face[j]).incident);
      if (common.size() + 1 < d_) continue;
      bool blocked = false;
      for (std::size_t r : face) {
        if (r == face[i] || r == face[j]) continue;
        if (contains(vertices_.at(r).incident, common)) {
          blocked = true;
          break;
        }
      }
      if (!blocked) connect(face[i], face[j]);
    }
  }
  return result;
}

std::optional<std::size_t> DualPolyhedron::unvisited() const {
  const DualVertex* best = nullptr;
  for (const auto& [id, v] : vertices_) {
    if (v.visited) continue;
    if (!best || v.a() > best->a() ||
        (v.a() == best->a() &&
         std::lexicographical_compare(v.coords.begin(), v.coords.end() - 1, best->coords.begin(),
                                      best->coords.end() - 1)))
      best = &v;
  }
  if (!best) return std::nullopt;
  return best->id;
}

void DualPolyhedron::mark_visited(std::size_t vertex_id) { vertices_.at(vertex_id).visited = true; }

std::vector<std::pair<std::size_t, std::size_t>> DualPolyhedron::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [id, v] : vertices_)
    for (std::size_t o : v.neighbors)
      if (id < o) out.emplace_back(id, o);
  return out;
}

std::vector<std::size_t> DualPolyhedron::tight_vertices(std::size_t k) const {
  std::vector<std::size_t> out;
  for (const auto& [id, v] : vertices_)
    if (std::binary_search(v.incident.begin(), v.incident.end(), k) ||
        std::abs(halfspaces_[k].slack(v.coords)) <= cert_tol(v.coords, tol_geom_))
      out.push_back(id);
  return out;
}

std::vector<std::size_t> DualPolyhedron::facets() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) {
    if (halfspaces_[k].origin != HalfspaceOrigin::SupportFromPoint) continue;
    const auto tight = tight_vertices(k);
    if (tight.size() < d_) continue;
    const auto& base = vertices_.at(tight.front()).coords;
    std::vector<std::vector<double>> diffs;
    for (std::size_t i = 1; i < tight.size(); ++i) {
      const auto& c = vertices_.at(tight[i]).coords;
      std::vector<double> diff(d_);
      for (std::size_t j = 0; j < d_; ++j) diff[j] = c[j] - base[j];
      diffs.push_back(std::move(diff));
    }
    if (rank_of(std::move(diffs), 1e-9) + 1 >= d_) out.push_back(k);
  }
  return out;
}

std::string DualPolyhedron::dump() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# H-representation: g_1..g_{d-1} h rhs origin  (g.w + h*a <= rhs)\n";
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) {
    const auto& hs = halfspaces_[k];
    os << "H " << k;
    for (double g : hs.g) os << ' ' << g;
    os << ' ' << hs.h << ' ' << hs.rhs;
    if (hs.origin == HalfspaceOrigin::SimplexBound) {
      os << " bound\n";
    } else {
      os << " support y=(";
      for (std::size_t i = 0; i < hs.point.size(); ++i) os << (i ? "," : "") << hs.point[i];
      os << ")\n";
    }
  }
  os << "# V-representation: id w_1..w_{d-1} a visited incident neighbors ray\n";
  for (const auto& [id, v] : vertices_) {
    os << "V " << id;
    for (double c : v.coords) os << ' ' << c;
    os << ' ' << (v.visited ? 1 : 0) << " {";
    for (std::size_t i = 0; i < v.incident.size(); ++i) os << (i ? "," : "") << v.incident[i];
    os << "} {";
    for (std::size_t i = 0; i < v.neighbors.size(); ++i) os << (i ? "," : "") << v.neighbors[i];
    os << "} " << (v.ray_edge ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace moep
