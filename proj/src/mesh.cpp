#include "meshrep/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "meshrep/error.hpp"

namespace meshrep {

int TriMesh::add_vertex(Point p, double value, bool boundary) {
  vertices_.push_back({p, value, boundary});
  vertex_alive_.push_back(1);
  incident_.emplace_back();
  ++live_vertices_;
  return static_cast<int>(vertices_.size()) - 1;
}

int TriMesh::add_triangle(int a, int b, int c) {
  if (orient2d(point(a), point(b), point(c)) <= 0) {
    std::ostringstream os;
    os << "triangle (" << a << ", " << b << ", " << c << ") is not counterclockwise";
    throw DegeneracyError(os.str());
  }
  int t;
  if (!free_triangles_.empty()) {
    t = free_triangles_.back();
    free_triangles_.pop_back();
    triangles_[t] = {a, b, c};
    triangle_alive_[t] = 1;
  } else {
    t = static_cast<int>(triangles_.size());
    triangles_.push_back({a, b, c});
    triangle_alive_.push_back(1);
  }
  for (int v : triangles_[t]) incident_[v].push_back(t);
  ++live_triangles_;
  return t;
}

void TriMesh::remove_triangle(int t) {
  for (int v : triangles_[t]) {
    auto& inc = incident_[v];
    inc.erase(std::find(inc.begin(), inc.end(), t));
  }
  triangle_alive_[t] = 0;
  free_triangles_.push_back(t);
  --live_triangles_;
}

void TriMesh::remove_vertex(int v) {
  if (!incident_[v].empty()) {
    throw TopologyError("cannot remove vertex " + std::to_string(v) +
                        ": triangles still reference it");
  }
  if (vertex_alive_[v]) {
    vertex_alive_[v] = 0;
    --live_vertices_;
  }
}

void TriMesh::set_triangle(int t, int a, int b, int c) {
  for (int v : triangles_[t]) {
    auto& inc = incident_[v];
    inc.erase(std::find(inc.begin(), inc.end(), t));
  }
  triangles_[t] = {a, b, c};
  for (int v : triangles_[t]) incident_[v].push_back(t);
}

std::vector<int> TriMesh::active_vertices() const {
  std::vector<int> out;
  out.reserve(live_vertices_);
  for (int v = 0; v < vertex_slots(); ++v)
    if (vertex_alive_[v]) out.push_back(v);
  return out;
}

std::vector<int> TriMesh::active_triangles() const {
  std::vector<int> out;
  out.reserve(live_triangles_);
  for (int t = 0; t < triangle_slots(); ++t)
    if (triangle_alive_[t]) out.push_back(t);
  return out;
}

std::vector<int> TriMesh::neighbors(int v) const {
  std::vector<int> out;
  out.reserve(2 * incident_[v].size());
  for (int t : incident_[v])
    for (int w : triangles_[t])
      if (w != v) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> TriMesh::triangles_of_edge(int a, int b) const {
  std::vector<int> out;
  for (int t : incident_[a]) {
    const auto& tri = triangles_[t];
    if (tri[0] == b || tri[1] == b || tri[2] == b) out.push_back(t);
  }
  return out;
}

double TriMesh::triangle_area(int t) const {
  const auto& tri = triangles_[t];
  return signed_area(point(tri[0]), point(tri[1]), point(tri[2]));
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < triangle_slots(); ++t)
    if (triangle_alive_[t]) sum += triangle_area(t);
  return sum;
}

bool TriMesh::on_domain_boundary(int v) const {
  const Point p = point(v);
  return p.x == domain_.x0 || p.x == domain_.x1 || p.y == domain_.y0 || p.y == domain_.y1;
}

bool TriMesh::is_corner(int v) const {
  const Point p = point(v);
  return (p.x == domain_.x0 || p.x == domain_.x1) && (p.y == domain_.y0 || p.y == domain_.y1);
}

std::vector<int> TriMesh::compact() {
  std::vector<int> remap(vertices_.size(), -1);
  std::vector<Vertex> verts;
  verts.reserve(live_vertices_);
  for (int v = 0; v < vertex_slots(); ++v) {
    if (!vertex_alive_[v]) continue;
    remap[v] = static_cast<int>(verts.size());
    verts.push_back(vertices_[v]);
  }
  std::vector<Triangle> tris;
  tris.reserve(live_triangles_);
  for (int t = 0; t < triangle_slots(); ++t) {
    if (!triangle_alive_[t]) continue;
    const auto& tri = triangles_[t];
    tris.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});
  }

  vertices_ = std::move(verts);
  vertex_alive_.assign(vertices_.size(), 1);
  triangles_ = std::move(tris);
  triangle_alive_.assign(triangles_.size(), 1);
  free_triangles_.clear();
  incident_.assign(vertices_.size(), {});
  for (int t = 0; t < triangle_slots(); ++t)
    for (int v : triangles_[t]) incident_[v].push_back(t);
  live_vertices_ = static_cast<int>(vertices_.size());
  live_triangles_ = static_cast<int>(triangles_.size());
  return remap;
}

std::optional<std::string> TriMesh::check(bool cover_domain) const {
  std::ostringstream os;
  std::vector<std::vector<int>> rebuilt(vertices_.size());
  std::map<std::pair<int, int>, int> directed;

  for (int t = 0; t < triangle_slots(); ++t) {
    if (!triangle_alive_[t]) continue;
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= vertex_slots() || !vertex_alive_[v]) {
        os << "triangle " << t << " references dead vertex " << v;
        return os.str();
      }
      rebuilt[v].push_back(t);
    }
    if (orient2d(point(tri[0]), point(tri[1]), point(tri[2])) <= 0) {
      os << "triangle " << t << " is not strictly counterclockwise";
      return os.str();
    }
    for (int i = 0; i < 3; ++i) {
      const auto e = std::make_pair(tri[i], tri[(i + 1) % 3]);
      if (!directed.emplace(e, t).second) {
        os << "directed edge (" << e.first << ", " << e.second << ") used twice";
        return os.str();
      }
    }
  }

  for (int v = 0; v < vertex_slots(); ++v) {
    auto a = rebuilt[v];
    auto b = incident_[v];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      os << "adjacency of vertex " << v << " is stale";
      return os.str();
    }
    if (vertex_alive_[v] && incident_[v].empty() && cover_domain) {
      os << "vertex " << v << " is dangling";
      return os.str();
    }
  }

  if (!cover_domain) return std::nullopt;

  auto same_side = [&](int a, int b) {
    const Point p = point(a), q = point(b);
    return (p.x == domain_.x0 && q.x == domain_.x0) || (p.x == domain_.x1 && q.x == domain_.x1) ||
           (p.y == domain_.y0 && q.y == domain_.y0) || (p.y == domain_.y1 && q.y == domain_.y1);
  };
  for (const auto& [e, t] : directed) {
    if (directed.count({e.second, e.first})) continue;
    if (!same_side(e.first, e.second)) {
      os << "open edge (" << e.first << ", " << e.second << ") is not on the domain boundary";
      return os.str();
    }
  }

  for (int v = 0; v < vertex_slots(); ++v) {
    if (!vertex_alive_[v]) continue;
    if (vertices_[v].boundary != on_domain_boundary(v)) {
      os << "boundary flag of vertex " << v << " disagrees with its position";
      return os.str();
    }
  }

  const std::array<Point, 4> corners{Point{domain_.x0, domain_.y0}, Point{domain_.x1, domain_.y0},
                                     Point{domain_.x1, domain_.y1}, Point{domain_.x0, domain_.y1}};
  for (const Point& c : corners) {
    bool found = false;
    for (int v = 0; v < vertex_slots() && !found; ++v)
      found = vertex_alive_[v] && point(v) == c;
    if (!found) {
      os << "domain corner (" << c.x << ", " << c.y << ") is not a vertex";
      return os.str();
    }
  }

  const double area = total_area();
  if (std::fabs(area - domain_.area()) > 1e-9 * domain_.area()) {
    os << "triangles cover area " << area << " instead of " << domain_.area();
    return os.str();
  }
  return std::nullopt;
}

Patch patch_of(const TriMesh& mesh, int v) {
  const auto tris = mesh.triangles_of(v);
  if (tris.empty()) throw TopologyError("vertex " + std::to_string(v) + " has no triangles");

  // Each star triangle, rotated so that v comes first, contributes the link
  // edge (a -> b), directed counterclockwise around v.
  std::map<int, std::pair<int, int>> next;  // a -> (b, triangle)
  std::map<int, int> incoming;
  for (int t : tris) {
    const auto& tri = mesh.triangle(t);
    int k = 0;
    while (tri[k] != v) ++k;
    const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
    if (!next.emplace(a, std::make_pair(b, t)).second || !incoming.emplace(b, a).second)
      throw TopologyError("star of vertex " + std::to_string(v) + " is not a manifold fan");
  }

  Patch patch;
  patch.center = v;
  int start = -1;
  for (const auto& [a, bt] : next)
    if (!incoming.count(a)) {
      if (start != -1) throw TopologyError("star of vertex " + std::to_string(v) + " is split");
      start = a;
    }
  patch.is_boundary = start != -1;
  if (!patch.is_boundary) start = next.begin()->first;  // lowest id

  int cur = start;
  for (std::size_t guard = 0; guard <= tris.size(); ++guard) {
    patch.ring.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end()) break;
    patch.triangle_ids.push_back(it->second.second);
    cur = it->second.first;
    if (cur == start) break;
  }
  if (patch.triangle_ids.size() != tris.size())
    throw TopologyError("star of vertex " + std::to_string(v) + " is not a single fan");

  if (patch.is_boundary) {
    const Point first = mesh.point(patch.ring.front());
    const Point last = mesh.point(patch.ring.back());
    const Point c = mesh.point(v);
    patch.removable = patch.ring.size() >= 3 && !mesh.is_corner(v) &&
                      orient2d(last, c, first) == 0 &&
                      ((c.x - last.x) * (first.x - c.x) + (c.y - last.y) * (first.y - c.y)) > 0.0;
  } else {
    patch.removable = patch.ring.size() >= 3;
  }
  return patch;
}

void replace_patch(TriMesh& mesh, const Patch& patch, std::span<const Triangle> new_triangles) {
  const int n = static_cast<int>(patch.ring.size());
  if (n < 3 || !patch.removable)
    throw SurgeryError("patch of vertex " + std::to_string(patch.center) + " is not removable");
  if (static_cast<int>(new_triangles.size()) != n - 2)
    throw SurgeryError("patch triangulation must have ring size - 2 triangles");

  // The new triangles must be counterclockwise, use every ring edge once in
  // ring direction and pair up every other edge with its reverse.
  std::map<std::pair<int, int>, int> edges;
  for (const auto& tri : new_triangles) {
    for (int k : tri)
      if (k < 0 || k >= n) throw SurgeryError("patch triangle index out of range");
    const Point a = mesh.point(patch.ring[tri[0]]);
    const Point b = mesh.point(patch.ring[tri[1]]);
    const Point c = mesh.point(patch.ring[tri[2]]);
    if (orient2d(a, b, c) <= 0) throw SurgeryError("patch triangle is inverted or degenerate");
    for (int i = 0; i < 3; ++i) ++edges[{tri[i], tri[(i + 1) % 3]}];
  }
  for (int i = 0; i < n; ++i) {
    auto it = edges.find({i, (i + 1) % n});
    if (it == edges.end() || it->second != 1) throw SurgeryError("patch triangulation leaves a gap");
    edges.erase(it);
  }
  for (const auto& [e, count] : edges) {
    if (count != 1 || !edges.count({e.second, e.first}) || edges.at({e.second, e.first}) != 1)
      throw SurgeryError("patch triangulation overlaps itself");
  }

  for (int t : patch.triangle_ids) mesh.remove_triangle(t);
  for (const auto& tri : new_triangles)
    mesh.add_triangle(patch.ring[tri[0]], patch.ring[tri[1]], patch.ring[tri[2]]);
  mesh.remove_vertex(patch.center);
}

}  // namespace meshrep
