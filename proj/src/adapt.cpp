#include "meshrep/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

#include "meshrep/error.hpp"

namespace meshrep {

void AdaptParams::validate() const {
  if (!(collapse_threshold < 1.0 && split_threshold > 1.0))
    throw ParameterError("adapt thresholds must satisfy collapse < 1 < split");
  if (collapse_threshold * split_threshold > 1.01)
    throw ParameterError("adapt thresholds must satisfy collapse * split <= 1.01");
  if (max_sweeps < 0 || smoothing_passes < 0 || target_vertices < 0)
    throw ParameterError("adapt counts must be non-negative");
}

TriMesh initial_mesh(const DomainMap& map, int n_vertices) {
  if (n_vertices < 4) throw ParameterError("initial mesh needs at least 4 vertices");
  const Rect& d = map.domain();
  const double aspect = (d.x1 - d.x0) / (d.y1 - d.y0);
  const int cols = std::max(2, static_cast<int>(std::lround(std::sqrt(n_vertices * aspect))));
  const int rows = std::max(2, static_cast<int>(std::lround(static_cast<double>(n_vertices) / cols)));

  TriMesh mesh(d);
  auto coord = [](double lo, double hi, int i, int n) {
    return i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Point p{coord(d.x0, d.x1, c, cols), coord(d.y0, d.y1, r, rows)};
      const bool boundary = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
      mesh.add_vertex(p, 0.0, boundary);
    }
  }
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      const int v00 = id(r, c), v01 = id(r, c + 1), v10 = id(r + 1, c), v11 = id(r + 1, c + 1);
      if ((r + c) % 2 == 0) {
        mesh.add_triangle(v00, v01, v11);
        mesh.add_triangle(v00, v11, v10);
      } else {
        mesh.add_triangle(v00, v01, v10);
        mesh.add_triangle(v01, v11, v10);
      }
    }
  }
  return mesh;
}

void assign_values(TriMesh& mesh, const PixelGrid& grid, const DomainMap& map) {
  for (int v = 0; v < mesh.vertex_slots(); ++v)
    if (mesh.vertex_alive(v)) mesh.vertex(v).value = sample_bilinear(grid, map, mesh.point(v));
}

namespace {

constexpr double kLengthScale = 0.65803700647624620;  // 3^(1/4) / 2 = 1 / kReferenceEdge

}  // namespace

double metric_edge_length(const Point& a, const Point& b, const Spd2& m, double n_elements,
                          double sigma_h) {
  return std::sqrt(m.quad(b.x - a.x, b.y - a.y)) * std::sqrt(n_elements / sigma_h) * kLengthScale;
}

double metric_edge_length(const TriMesh& mesh, int a, int b, const MetricField& field) {
  const auto tris = mesh.triangles_of_edge(a, b);
  if (tris.empty()) throw TopologyError("metric_edge_length: not an edge of the mesh");
  Spd2 sum = Spd2::zero();
  for (int t : tris) sum = sum + field.element[t];
  const Spd2 mean = sum * (1.0 / static_cast<double>(tris.size()));
  return metric_edge_length(mesh.point(a), mesh.point(b), mean, mesh.num_triangles(),
                            field.sigma_h);
}

namespace {

// Piecewise-linear metric over a frozen copy of the mesh, with a bucket grid
// for point location.
class MetricSampler {
 public:
  MetricSampler(const TriMesh& mesh, const MetricField& field) : domain_(mesh.domain()) {
    std::vector<int> remap(mesh.vertex_slots(), -1);
    for (int v = 0; v < mesh.vertex_slots(); ++v) {
      if (!mesh.vertex_alive(v)) continue;
      remap[v] = static_cast<int>(points_.size());
      points_.push_back(mesh.point(v));
    }
    std::vector<Spd2> acc(points_.size(), Spd2::zero());
    std::vector<double> weight(points_.size(), 0.0);
    for (int t = 0; t < mesh.triangle_slots(); ++t) {
      if (!mesh.triangle_alive(t)) continue;
      const auto& tri = mesh.triangle(t);
      const double area = mesh.triangle_area(t);
      tris_.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});
      for (int v : tris_.back()) {
        acc[v] = acc[v] + field.element[t] * area;
        weight[v] += area;
      }
    }
    vertex_metric_.resize(points_.size(), Spd2::identity());
    for (std::size_t v = 0; v < points_.size(); ++v)
      if (weight[v] > 0.0) vertex_metric_[v] = acc[v] * (1.0 / weight[v]);

    cells_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(tris_.size()) / 2.0)));
    buckets_.assign(static_cast<std::size_t>(cells_) * cells_, {});
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      const Point &a = points_[tris_[t][0]], &b = points_[tris_[t][1]], &c = points_[tris_[t][2]];
      const int i0 = cell_x(std::min({a.x, b.x, c.x})), i1 = cell_x(std::max({a.x, b.x, c.x}));
      const int j0 = cell_y(std::min({a.y, b.y, c.y})), j1 = cell_y(std::max({a.y, b.y, c.y}));
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * cells_ + i].push_back(t);
    }
  }

  const Spd2& at_vertex(int compact_id) const { return vertex_metric_[compact_id]; }

  Spd2 operator()(const Point& p) const {
    const auto& bucket = buckets_[static_cast<std::size_t>(cell_y(p.y)) * cells_ + cell_x(p.x)];
    int best = -1;
    double best_min = -std::numeric_limits<double>::infinity();
    double bl[3] = {0, 0, 0};
    for (int t : bucket) {
      const Point &a = points_[tris_[t][0]], &b = points_[tris_[t][1]], &c = points_[tris_[t][2]];
      const double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
      const double l1 = ((p.x - a.x) * (c.y - a.y) - (p.y - a.y) * (c.x - a.x)) / det;
      const double l2 = ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / det;
      const double l0 = 1.0 - l1 - l2;
      const double mn = std::min({l0, l1, l2});
      if (mn > best_min) {
        best_min = mn;
        best = t;
        bl[0] = l0;
        bl[1] = l1;
        bl[2] = l2;
        if (mn >= 0.0) break;
      }
    }
    if (best < 0) return Spd2::identity();
    // Outside every candidate (numerical slack): clamp to the closest triangle.
    double s = 0.0;
    for (double& l : bl) s += (l = std::max(l, 0.0));
    Spd2 m = Spd2::zero();
    for (int k = 0; k < 3; ++k) m = m + vertex_metric_[tris_[best][k]] * (bl[k] / s);
    return m;
  }

 private:
  int cell_x(double x) const {
    const double u = (x - domain_.x0) / (domain_.x1 - domain_.x0);
    return std::clamp(static_cast<int>(u * cells_), 0, cells_ - 1);
  }
  int cell_y(double y) const {
    const double u = (y - domain_.y0) / (domain_.y1 - domain_.y0);
    return std::clamp(static_cast<int>(u * cells_), 0, cells_ - 1);
  }

  Rect domain_;
  std::vector<Point> points_;
  std::vector<Triangle> tris_;
  std::vector<Spd2> vertex_metric_;
  int cells_ = 1;
  std::vector<std::vector<int>> buckets_;
};

class Adapter {
 public:
  Adapter(TriMesh& mesh, const MetricField& field, const AdaptParams& params)
      : mesh_(mesh), sampler_(mesh, field), params_(params) {
    split_ = params.split_threshold;
    collapse_ = params.collapse_threshold;
    target_ = params.target_vertices > 0 ? params.target_vertices : mesh.num_vertices();
    scale2_ = mesh.num_triangles() / field.sigma_h * kLengthScale * kLengthScale;
    vm_.resize(mesh.vertex_slots(), Spd2::identity());
    int compact = 0;
    for (int v = 0; v < mesh.vertex_slots(); ++v)
      if (mesh.vertex_alive(v)) vm_[v] = sampler_.at_vertex(compact++);
  }

  AdaptStats run() {
    for (int sweep = 0; sweep < params_.max_sweeps; ++sweep) {
      const int before = stats_.fired();
      split_pass();
      collapse_pass();
      flip_pass();
      for (int s = 0; s < params_.smoothing_passes; ++s) smooth_pass();
      ++stats_.sweeps;
      if (stats_.fired() == before) break;
      const double ratio = static_cast<double>(mesh_.num_vertices()) / target_;
      const double f = std::clamp(std::sqrt(ratio), 0.9, 1.1);
      split_ *= f;
      collapse_ *= f;
    }
    if (params_.target_vertices > 0) correct_count();
    return stats_;
  }

 private:
  TriMesh& mesh_;
  MetricSampler sampler_;
  const AdaptParams& params_;
  std::vector<Spd2> vm_;
  double split_ = 0.0, collapse_ = 0.0, scale2_ = 1.0;
  int target_ = 0;
  AdaptStats stats_;

  double length(int a, int b) const { return length_with(a, mesh_.point(a), b); }

  double length_with(int a, const Point& pa, int b) const {
    const Point pb = mesh_.point(b);
    const Spd2 m = (vm_[a] + vm_[b]) * 0.5;
    return std::sqrt(m.quad(pb.x - pa.x, pb.y - pa.y) * scale2_);
  }

  double tri_quality(int a, int b, int c) const {
    const Spd2 m = (vm_[a] + vm_[b] + vm_[c]) * (1.0 / 3.0);
    return alignment_quality(mesh_.point(a), mesh_.point(b), mesh_.point(c), m);
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(mesh_.num_triangles()) * 2);
    std::vector<int> higher;
    for (int v = 0; v < mesh_.vertex_slots(); ++v) {
      if (!mesh_.vertex_alive(v)) continue;
      higher.clear();
      for (int t : mesh_.triangles_of(v))
        for (int w : mesh_.triangle(t))
          if (w > v) higher.push_back(w);
      std::sort(higher.begin(), higher.end());
      higher.erase(std::unique(higher.begin(), higher.end()), higher.end());
      for (int w : higher) out.emplace_back(v, w);
    }
    return out;
  }

  // Triangle holding the directed edge a -> b, or -1; apex returned in c.
  int directed(int a, int b, int& c) const {
    for (int t : mesh_.triangles_of(a)) {
      const auto& tri = mesh_.triangle(t);
      for (int i = 0; i < 3; ++i)
        if (tri[i] == a && tri[(i + 1) % 3] == b) {
          c = tri[(i + 2) % 3];
          return t;
        }
    }
    return -1;
  }

  void set_metric(int v, const Spd2& m) {
    if (static_cast<int>(vm_.size()) <= v) vm_.resize(v + 1, Spd2::identity());
    vm_[v] = m;
  }

  // --- vertex addition -----------------------------------------------------

  bool split(int a, int b) {
    int c = -1, d = -1;
    const int t1 = directed(a, b, c);
    const int t2 = directed(b, a, d);
    if (t1 < 0 && t2 < 0) return false;
    const Point pa = mesh_.point(a), pb = mesh_.point(b);
    const Point pm{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    if (pm == pa || pm == pb) return false;
    const bool boundary_edge = (t1 < 0 || t2 < 0);
    const int m = mesh_.add_vertex(pm, 0.5 * (mesh_.vertex(a).value + mesh_.vertex(b).value),
                                   boundary_edge && mesh_.on_domain_boundary(a) &&
                                       mesh_.on_domain_boundary(b));
    mesh_.vertex(m).boundary = mesh_.on_domain_boundary(m);
    set_metric(m, sampler_(pm));
    if (t1 >= 0) {
      mesh_.set_triangle(t1, a, m, c);
      mesh_.add_triangle(m, b, c);
    }
    if (t2 >= 0) {
      mesh_.set_triangle(t2, b, m, d);
      mesh_.add_triangle(m, a, d);
    }
    ++stats_.splits;
    return true;
  }

  void split_pass() {
    std::vector<std::tuple<double, int, int>> cand;
    for (auto [a, b] : edges()) {
      const double l = length(a, b);
      if (l > split_) cand.emplace_back(-l, a, b);
    }
    std::sort(cand.begin(), cand.end());
    for (auto [negl, a, b] : cand) {
      if (mesh_.triangles_of_edge(a, b).empty()) continue;
      split(a, b);
    }
  }

  // --- edge and vertex suppression ---------------------------------------

  bool can_collapse(int a, int b) const {
    if (mesh_.is_corner(a)) return false;
    const auto shared = mesh_.triangles_of_edge(a, b);
    if (shared.empty()) return false;
    const bool boundary_edge = shared.size() == 1;
    if (mesh_.vertex(a).boundary && !boundary_edge) return false;
    if (!mesh_.vertex(a).boundary && boundary_edge) return false;

    // Link condition: a and b share exactly the apexes of their common triangles.
    const auto na = mesh_.neighbors(a), nb = mesh_.neighbors(b);
    std::vector<int> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    if (common.size() != shared.size()) return false;

    const Point pb = mesh_.point(b);
    double old_worst = 1.0, new_worst = 1.0;
    for (int t : mesh_.triangles_of(a)) {
      const auto& tri = mesh_.triangle(t);
      old_worst = std::max(old_worst, tri_quality(tri[0], tri[1], tri[2]));
      if (tri[0] == b || tri[1] == b || tri[2] == b) continue;
      Point p[3];
      for (int i = 0; i < 3; ++i) p[i] = tri[i] == a ? pb : mesh_.point(tri[i]);
      if (orient2d(p[0], p[1], p[2]) <= 0) return false;
      const Spd2 m = (vm_[tri[0] == a ? b : tri[0]] + vm_[tri[1] == a ? b : tri[1]] +
                      vm_[tri[2] == a ? b : tri[2]]) *
                     (1.0 / 3.0);
      new_worst = std::max(new_worst, alignment_quality(p[0], p[1], p[2], m));
    }
    for (int x : na)
      if (x != b && length_with(b, pb, x) > split_) return false;
    return new_worst <= std::max(old_worst, 4.0);
  }

  void collapse(int a, int b) {
    const auto tris = std::vector<int>(mesh_.triangles_of(a).begin(), mesh_.triangles_of(a).end());
    for (int t : tris) {
      const auto tri = mesh_.triangle(t);
      if (tri[0] == b || tri[1] == b || tri[2] == b)
        mesh_.remove_triangle(t);
      else
        mesh_.set_triangle(t, tri[0] == a ? b : tri[0], tri[1] == a ? b : tri[1],
                           tri[2] == a ? b : tri[2]);
    }
    mesh_.remove_vertex(a);
    ++stats_.collapses;
  }

  bool try_collapse(int a, int b) {
    // Prefer removing the interior endpoint.
    if (mesh_.vertex(a).boundary && !mesh_.vertex(b).boundary) std::swap(a, b);
    if (can_collapse(a, b)) {
      collapse(a, b);
      return true;
    }
    if (can_collapse(b, a)) {
      collapse(b, a);
      return true;
    }
    return false;
  }

  void collapse_pass() {
    std::vector<std::tuple<double, int, int>> cand;
    for (auto [a, b] : edges()) {
      const double l = length(a, b);
      if (l < collapse_) cand.emplace_back(l, a, b);
    }
    std::sort(cand.begin(), cand.end());
    for (auto [l, a, b] : cand) {
      if (!mesh_.vertex_alive(a) || !mesh_.vertex_alive(b)) continue;
      if (length(a, b) >= collapse_) continue;
      try_collapse(a, b);
    }
  }

  // --- edge swapping -------------------------------------------------------

  bool try_flip(int a, int b) {
    int c = -1, d = -1;
    const int t1 = directed(a, b, c);
    const int t2 = directed(b, a, d);
    if (t1 < 0 || t2 < 0) return false;
    const Point pa = mesh_.point(a), pb = mesh_.point(b), pc = mesh_.point(c), pd = mesh_.point(d);
    if (orient2d(pa, pd, pc) <= 0 || orient2d(pd, pb, pc) <= 0) return false;
    if (!mesh_.triangles_of_edge(c, d).empty()) return false;
    const double before = tri_quality(a, b, c) + tri_quality(b, a, d);
    const double after = tri_quality(a, d, c) + tri_quality(d, b, c);
    if (!(after < before * (1.0 - 1e-9))) return false;
    mesh_.set_triangle(t1, a, d, c);
    mesh_.set_triangle(t2, d, b, c);
    ++stats_.flips;
    return true;
  }

  void flip_pass() {
    for (int pass = 0; pass < 4; ++pass) {
      int flipped = 0;
      for (auto [a, b] : edges())
        if (try_flip(a, b)) ++flipped;
      if (flipped == 0) break;
    }
  }

  // --- vertex reallocation ---------------------------------------------------

  bool on_same_side(int v, int w) const {
    const Point p = mesh_.point(v), q = mesh_.point(w);
    const Rect& d = mesh_.domain();
    return (p.x == d.x0 && q.x == d.x0) || (p.x == d.x1 && q.x == d.x1) ||
           (p.y == d.y0 && q.y == d.y0) || (p.y == d.y1 && q.y == d.y1);
  }

  bool try_move(int v) {
    if (mesh_.is_corner(v)) return false;
    const Point p = mesh_.point(v);
    const bool boundary = mesh_.vertex(v).boundary;
    double sx = 0.0, sy = 0.0, extent = 0.0;
    int count = 0;
    for (int w : mesh_.neighbors(v)) {
      if (boundary && !(mesh_.vertex(w).boundary && on_same_side(v, w) &&
                        mesh_.triangles_of_edge(v, w).size() == 1))
        continue;
      const Point q = mesh_.point(w);
      const double l = length(v, w);
      if (!(l > 0.0)) continue;
      sx += q.x + (p.x - q.x) / l;
      sy += q.y + (p.y - q.y) / l;
      extent = std::max(extent, std::hypot(p.x - q.x, p.y - q.y));
      ++count;
    }
    if (count == 0) return false;
    Point target{p.x + 0.5 * (sx / count - p.x), p.y + 0.5 * (sy / count - p.y)};
    if (boundary) {
      const Rect& d = mesh_.domain();
      if (p.x == d.x0 || p.x == d.x1) target.x = p.x;
      if (p.y == d.y0 || p.y == d.y1) target.y = p.y;
    }
    if (std::hypot(target.x - p.x, target.y - p.y) < 1e-6 * extent) return false;

    double old_worst = 1.0;
    for (int t : mesh_.triangles_of(v)) {
      const auto& tri = mesh_.triangle(t);
      old_worst = std::max(old_worst, tri_quality(tri[0], tri[1], tri[2]));
    }
    const Spd2 old_metric = vm_[v];
    for (double step = 1.0; step > 0.2; step *= 0.5) {
      const Point q{p.x + step * (target.x - p.x), p.y + step * (target.y - p.y)};
      mesh_.move_vertex(v, q);
      vm_[v] = sampler_(q);
      bool ok = true;
      double new_worst = 1.0;
      for (int t : mesh_.triangles_of(v)) {
        const auto& tri = mesh_.triangle(t);
        if (orient2d(mesh_.point(tri[0]), mesh_.point(tri[1]), mesh_.point(tri[2])) <= 0) {
          ok = false;
          break;
        }
        new_worst = std::max(new_worst, tri_quality(tri[0], tri[1], tri[2]));
      }
      if (ok && new_worst <= std::max(old_worst, 4.0)) {
        ++stats_.moves;
        return true;
      }
    }
    mesh_.move_vertex(v, p);
    vm_[v] = old_metric;
    return false;
  }

  void smooth_pass() {
    for (int v = 0; v < mesh_.vertex_slots(); ++v)
      if (mesh_.vertex_alive(v)) try_move(v);
  }

  // --- final vertex budget -------------------------------------------------

  void correct_count() {
    const int tol = std::max(1, target_ / 100);
    for (int round = 0; round < 40; ++round) {
      const int n = mesh_.num_vertices();
      if (std::abs(n - target_) <= tol) break;
      auto all = edges();
      std::vector<std::tuple<double, int, int>> cand;
      for (auto [a, b] : all) cand.emplace_back(length(a, b), a, b);
      int changed = 0;
      if (n > target_) {
        std::sort(cand.begin(), cand.end());
        int excess = n - target_;
        for (auto [l, a, b] : cand) {
          if (excess <= 0) break;
          if (!mesh_.vertex_alive(a) || !mesh_.vertex_alive(b)) continue;
          if (try_collapse_budget(a, b)) {
            --excess;
            ++changed;
          }
        }
      } else {
        std::sort(cand.begin(), cand.end(), std::greater<>());
        int missing = target_ - n;
        for (auto [l, a, b] : cand) {
          if (missing <= 0) break;
          if (mesh_.triangles_of_edge(a, b).empty()) continue;
          if (split(a, b)) {
            --missing;
            ++changed;
          }
        }
      }
      flip_pass();
      if (changed == 0) break;
    }
  }

  bool try_collapse_budget(int a, int b) {
    // Budget collapses ignore the split-length guard but keep validity.
    const double saved = split_;
    split_ = std::numeric_limits<double>::infinity();
    const bool ok = try_collapse(a, b);
    split_ = saved;
    return ok;
  }
};

}  // namespace

AdaptStats adapt_to_metric(TriMesh& mesh, const MetricField& field, const AdaptParams& params) {
  params.validate();
  if (static_cast<int>(field.element.size()) != mesh.triangle_slots())
    throw DimensionError("metric field does not match the mesh");
  Adapter adapter(mesh, field, params);
  const AdaptStats stats = adapter.run();
  mesh.compact();
  return stats;
}

TriMesh ama_pipeline(const PixelGrid& grid, double sd, const AmaOptions& opts) {
  if (opts.iterations < 1 || opts.iterations > 10)
    throw ParameterError("ama iterations must be in [1, 10]");
  const int target = static_cast<int>(std::lround(sd * static_cast<double>(grid.size())));
  if (target < 4) throw ParameterError("sample density too low: fewer than 4 vertices");
  const DomainMap map(grid);
  AdaptParams params = opts.adapt;
  params.target_vertices = target;

  TriMesh mesh = initial_mesh(map, target);
  for (int k = 0; k < opts.iterations; ++k) {
    assign_values(mesh, grid, map);
    const MetricField field = compute_metric(mesh, opts.metric);
    adapt_to_metric(mesh, field, params);
  }
  assign_values(mesh, grid, map);
  return mesh;
}

}  // namespace meshrep
