#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "meshrep/error.hpp"
#include "meshrep/triangulate.hpp"

namespace meshrep {

bool should_flip(const Point& a, const Point& b, const Point& c, const Point& d, int ida, int idb,
                 int idc, int idd) {
  const int s = incircle(a, b, c, d);
  if (s != 0) return s > 0;
  // Cocircular: keep the diagonal through the lowest id.
  return std::min(idc, idd) < std::min(ida, idb);
}

namespace {

// Sweep-line incremental Delaunay: points are inserted in lexicographic
// order, so each new point lies outside the current hull and is joined to
// the hull edges it sees; Lawson flips restore the Delaunay property.
class SweepDelaunay {
 public:
  explicit SweepDelaunay(std::span<const Point> pts) : pts_(pts) {
    const int n = static_cast<int>(pts.size());
    hull_next_.assign(n, -1);
    hull_prev_.assign(n, -1);
    hull_tri_.assign(n, -1);
  }

  void run() {
    const int n = static_cast<int>(pts_.size());
    if (n < 3) throw DegeneracyError("delaunay needs at least three points");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Point &p = pts_[a], &q = pts_[b];
      return p.x < q.x || (p.x == q.x && (p.y < q.y || (p.y == q.y && a < b)));
    });
    for (int i = 1; i < n; ++i)
      if (pts_[order[i]] == pts_[order[i - 1]])
        throw DegeneracyError("delaunay input contains duplicate points");

    int k = 2;
    while (k < n && orient2d(pts_[order[0]], pts_[order[1]], pts_[order[k]]) == 0) ++k;
    if (k == n) throw DegeneracyError("delaunay input points are all collinear");

    seed(order, k);
    int last = order[k];
    for (int i = k + 1; i < n; ++i) {
      insert(order[i], last);
      last = order[i];
    }
  }

  std::vector<Triangle> triangles() const { return tv_; }
  bool on_hull(int v) const { return hull_next_[v] != -1; }

 private:
  std::span<const Point> pts_;
  std::vector<Triangle> tv_;
  std::vector<std::array<int, 3>> tn_;  // neighbour opposite vertex slot i
  std::vector<int> hull_next_, hull_prev_, hull_tri_;

  const Point& P(int v) const { return pts_[v]; }

  static int slot(const Triangle& t, int v) { return t[0] == v ? 0 : (t[1] == v ? 1 : 2); }

  void replace_neighbor(int t, int from, int to) {
    if (t < 0) return;
    for (int& x : tn_[t])
      if (x == from) x = to;
  }

  void seed(const std::vector<int>& order, int k) {
    const int c = order[k];
    const int side = orient2d(P(order[0]), P(order[1]), P(c));
    for (int i = 0; i + 1 < k; ++i) {
      const int a = order[i], b = order[i + 1];
      if (side > 0)
        tv_.push_back({a, b, c});
      else
        tv_.push_back({b, a, c});
      tn_.push_back({-1, -1, -1});
    }
    // Consecutive fan triangles share the edge (order[i+1], c).
    for (int i = 0; i + 2 < k; ++i) {
      const int shared = order[i + 1];
      const int t0 = i, t1 = i + 1;
      // The slot opposite edge (shared, c) holds the vertex that is neither.
      for (int s = 0; s < 3; ++s) {
        if (tv_[t0][s] != shared && tv_[t0][s] != c) tn_[t0][s] = t1;
        if (tv_[t1][s] != shared && tv_[t1][s] != c) tn_[t1][s] = t0;
      }
    }
    if (side > 0) {
      for (int i = 0; i + 1 < k; ++i) link_hull(order[i], order[i + 1]);
      link_hull(order[k - 1], c);
      link_hull(c, order[0]);
    } else {
      link_hull(order[0], c);
      link_hull(c, order[k - 1]);
      for (int i = k - 1; i > 0; --i) link_hull(order[i], order[i - 1]);
    }
    for (int t = 0; t < static_cast<int>(tv_.size()); ++t)
      for (int s = 0; s < 3; ++s)
        if (tn_[t][s] == -1) hull_tri_[tv_[t][(s + 1) % 3]] = t;
  }

  void link_hull(int a, int b) {
    hull_next_[a] = b;
    hull_prev_[b] = a;
  }

  bool visible(int u, int p) const { return orient2d(P(u), P(hull_next_[u]), P(p)) < 0; }

  void insert(int p, int last) {
    int e = -1;
    if (visible(last, p))
      e = last;
    else if (visible(hull_prev_[last], p))
      e = hull_prev_[last];
    else {
      int u = hull_next_[last];
      while (u != last) {
        if (visible(u, p)) {
          e = u;
          break;
        }
        u = hull_next_[u];
      }
    }
    if (e == -1) throw DegeneracyError("delaunay: inserted point sees no hull edge");

    int left = e;
    while (hull_prev_[left] != e && visible(hull_prev_[left], p)) left = hull_prev_[left];
    std::vector<int> chain{left};
    int u = left;
    do {
      u = hull_next_[u];
      chain.push_back(u);
    } while (visible(u, p) && u != left);

    const int m = static_cast<int>(chain.size()) - 1;
    const int base = static_cast<int>(tv_.size());
    for (int j = 0; j < m; ++j) {
      const int a = chain[j], b = chain[j + 1];
      const int t = base + j;
      const int old = hull_tri_[a];
      tv_.push_back({b, a, p});
      tn_.push_back({j > 0 ? t - 1 : -1, j + 1 < m ? t + 1 : -1, old});
      // The old triangle held a -> b; its slot opposite that edge now points here.
      const Triangle& ot = tv_[old];
      tn_[old][(slot(ot, a) + 2) % 3] = t;
    }
    const int left_v = chain.front(), right_v = chain.back();
    for (int j = 1; j < m; ++j) {
      hull_next_[chain[j]] = -1;
      hull_prev_[chain[j]] = -1;
    }
    link_hull(left_v, p);
    link_hull(p, right_v);
    hull_tri_[left_v] = base;
    hull_tri_[p] = base + m - 1;

    std::vector<int> stack;
    for (int j = 0; j < m; ++j) stack.push_back(base + j);
    legalize(p, stack);
  }

  void legalize(int p, std::vector<int>& stack) {
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      const int ip = slot(tv_[t], p);
      const int a = tv_[t][(ip + 1) % 3], b = tv_[t][(ip + 2) % 3];
      const int n = tn_[t][ip];
      if (n < 0) continue;
      const int ia_n = slot(tv_[n], a), ib_n = slot(tv_[n], b);
      const int id = 3 - ia_n - ib_n;
      const int d = tv_[n][id];
      if (!should_flip(P(a), P(b), P(p), P(d), a, b, p, d)) continue;

      const int x1 = tn_[t][slot(tv_[t], b)];  // edge (p, a)
      const int x2 = tn_[t][slot(tv_[t], a)];  // edge (b, p)
      const int y1 = tn_[n][ib_n];             // edge (a, d)
      const int y2 = tn_[n][ia_n];             // edge (d, b)

      tv_[t] = {p, a, d};
      tn_[t] = {y1, n, x1};
      tv_[n] = {p, d, b};
      tn_[n] = {y2, x2, t};
      replace_neighbor(y1, n, t);
      replace_neighbor(x2, t, n);
      if (y1 < 0) hull_tri_[a] = t;
      if (x2 < 0) hull_tri_[b] = n;
      if (x1 < 0) hull_tri_[p] = t;
      if (y2 < 0) hull_tri_[d] = n;
      stack.push_back(t);
      stack.push_back(n);
    }
  }
};

}  // namespace

TriMesh delaunay(std::span<const Point> points) {
  SweepDelaunay sweep(points);
  sweep.run();

  Rect box{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const Point& p : points) {
    box.x0 = std::min(box.x0, p.x);
    box.y0 = std::min(box.y0, p.y);
    box.x1 = std::max(box.x1, p.x);
    box.y1 = std::max(box.y1, p.y);
  }
  TriMesh mesh(box);
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    mesh.add_vertex(points[i], 0.0, sweep.on_hull(i));
  for (const auto& t : sweep.triangles()) mesh.add_triangle(t[0], t[1], t[2]);
  return mesh;
}

}  // namespace meshrep
