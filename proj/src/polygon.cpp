#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "meshrep/error.hpp"
#include "meshrep/triangulate.hpp"

namespace meshrep {
namespace {

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

std::vector<int> ids_of(const Polygon& poly) {
  if (!poly.ids.empty()) return poly.ids;
  std::vector<int> ids(poly.points.size());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

double min_angle(const Point& a, const Point& b, const Point& c) {
  const double ab = std::hypot(b.x - a.x, b.y - a.y);
  const double bc = std::hypot(c.x - b.x, c.y - b.y);
  const double ca = std::hypot(a.x - c.x, a.y - c.y);
  const double area2 = std::fabs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  // sin of each angle = 2|K| / (product of adjacent edges); the smallest
  // angle faces the shortest edge and is acute, so comparing sines is enough.
  const double s = std::min({area2 / (ab * ca), area2 / (ab * bc), area2 / (bc * ca)});
  return std::asin(std::min(1.0, s));
}

void require_simple(const Polygon& poly) {
  if (poly.points.size() < 3) throw TopologyError("polygon needs at least three vertices");
  if (!poly.ids.empty() && poly.ids.size() != poly.points.size())
    throw TopologyError("polygon ids do not match its points");
  if (!is_simple(poly.points)) throw TopologyError("polygon is not simple");
}

}  // namespace

bool is_simple(std::span<const Point> ring) {
  const int n = static_cast<int>(ring.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (ring[i] == ring[j]) return false;
  for (int i = 0; i < n; ++i) {
    const Point &a = ring[i], &b = ring[(i + 1) % n];
    for (int j = i + 1; j < n; ++j) {
      const Point &c = ring[j], &d = ring[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (!adjacent) {
        if (segments_touch(a, b, c, d)) return false;
        continue;
      }
      // Adjacent edges may only fold back onto each other when collinear.
      const Point& shared = (j == i + 1) ? b : a;
      const Point& p = (j == i + 1) ? a : b;
      const Point& q = (j == i + 1) ? d : c;
      if (orient2d(p, shared, q) == 0 &&
          (shared.x - p.x) * (q.x - shared.x) + (shared.y - p.y) * (q.y - shared.y) < 0.0)
        return false;
    }
  }
  return true;
}

std::vector<Triangle> ear_clip_unchecked(const Polygon& poly) {
  const auto& P = poly.points;
  const std::vector<int> ids = ids_of(poly);
  std::vector<int> rest(P.size());
  std::iota(rest.begin(), rest.end(), 0);
  std::vector<Triangle> out;
  out.reserve(P.size() - 2);

  while (rest.size() > 3) {
    const int m = static_cast<int>(rest.size());
    int best = -1;
    double best_angle = -1.0;
    for (int k = 0; k < m; ++k) {
      const int ip = rest[(k + m - 1) % m], i = rest[k], in = rest[(k + 1) % m];
      if (orient2d(P[ip], P[i], P[in]) <= 0) continue;
      bool blocked = false;
      for (int j : rest) {
        if (j == ip || j == i || j == in) continue;
        if (orient2d(P[ip], P[i], P[j]) >= 0 && orient2d(P[i], P[in], P[j]) >= 0 &&
            orient2d(P[in], P[ip], P[j]) >= 0) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      const double ang = min_angle(P[ip], P[i], P[in]);
      if (best < 0 || ang > best_angle || (ang == best_angle && ids[i] < ids[rest[best]])) {
        best = k;
        best_angle = ang;
      }
    }
    if (best < 0) throw TopologyError("ear clipping found no ear; polygon is not simple");
    out.push_back({rest[(best + m - 1) % m], rest[best], rest[(best + 1) % m]});
    rest.erase(rest.begin() + best);
  }
  if (orient2d(P[rest[0]], P[rest[1]], P[rest[2]]) <= 0)
    throw TopologyError("ear clipping left a degenerate triangle");
  out.push_back({rest[0], rest[1], rest[2]});
  return out;
}

std::vector<Triangle> cdt_polygon_unchecked(const Polygon& poly) {
  std::vector<Triangle> tris = ear_clip_unchecked(poly);
  const auto& P = poly.points;
  const std::vector<int> ids = ids_of(poly);
  const int n = static_cast<int>(P.size());

  // Lawson flips on interior diagonals; ring edges never appear twice and so
  // are never flipped.
  const std::size_t max_flips = static_cast<std::size_t>(n) * n * 4 + 16;
  std::size_t flips = 0;
  std::map<std::pair<int, int>, std::pair<int, int>> edge;  // directed edge -> (tri, apex slot)
  auto link = [&](int t) {
    for (int s = 0; s < 3; ++s) edge[{tris[t][(s + 1) % 3], tris[t][(s + 2) % 3]}] = {t, s};
  };
  auto unlink = [&](int t) {
    for (int s = 0; s < 3; ++s) edge.erase({tris[t][(s + 1) % 3], tris[t][(s + 2) % 3]});
  };
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) link(t);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      for (int s = 0; s < 3; ++s) {
        const int a = tris[t][(s + 1) % 3], b = tris[t][(s + 2) % 3];
        if (a > b) continue;
        const auto other = edge.find({b, a});
        if (other == edge.end()) continue;
        const int u = other->second.first;
        const int c = tris[t][s], d = tris[u][other->second.second];
        if (!should_flip(P[a], P[b], P[c], P[d], ids[a], ids[b], ids[c], ids[d])) continue;
        if (orient2d(P[a], P[d], P[c]) <= 0 || orient2d(P[d], P[b], P[c]) <= 0) continue;
        unlink(t);
        unlink(u);
        tris[t] = {a, d, c};
        tris[u] = {d, b, c};
        link(t);
        link(u);
        if (++flips > max_flips) throw TopologyError("constrained Delaunay flips did not converge");
        changed = true;
        s = -1;  // triangle t changed; rescan its edges
      }
    }
  }
  return tris;
}

std::vector<Triangle> ear_clip(const Polygon& poly) {
  require_simple(poly);
  return ear_clip_unchecked(poly);
}

std::vector<Triangle> cdt_polygon(const Polygon& poly) {
  require_simple(poly);
  return cdt_polygon_unchecked(poly);
}

}  // namespace meshrep
