#include "meshrep/gpr.hpp"

#include <algorithm>
#include <cmath>

#include "meshrep/edsample.hpp"
#include "meshrep/error.hpp"
#include "meshrep/parallel.hpp"
#include "meshrep/triangulate.hpp"

namespace meshrep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LocalRaster {
  int r0 = 0, c0 = 0, rows = 0, cols = 0;
  std::vector<double> before, after;
  std::vector<char> hit_before, hit_after;

  void reset(const DomainMap& map, std::span<const Point> pts) {
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const Point& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    c0 = std::max(0, static_cast<int>(std::floor(map.col_of(xmin))) - 1);
    r0 = std::max(0, static_cast<int>(std::floor(map.row_of(ymin))) - 1);
    const int c1 = std::min(map.width() - 1, static_cast<int>(std::ceil(map.col_of(xmax))) + 1);
    const int r1 = std::min(map.height() - 1, static_cast<int>(std::ceil(map.row_of(ymax))) + 1);
    cols = std::max(0, c1 - c0 + 1);
    rows = std::max(0, r1 - r0 + 1);
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    before.assign(n, 0.0);
    after.assign(n, 0.0);
    hit_before.assign(n, 0);
    hit_after.assign(n, 0);
  }

  void paint(const DomainMap& map, const Vertex& a, const Vertex& b, const Vertex& c,
             std::vector<double>& vals, std::vector<char>& hit) {
    for_each_pixel_in_triangle(
        map, a.pos, b.pos, c.pos,
        [&](int r, int col, double, double l1, double l2) {
          const std::size_t i = static_cast<std::size_t>(r - r0) * cols + (col - c0);
          if (hit[i]) return;
          hit[i] = 1;
          vals[i] = a.value + l1 * (b.value - a.value) + l2 * (c.value - a.value);
        },
        r0, r0 + rows);
  }
};

}  // namespace

std::vector<Triangle> triangulate_patch(const TriMesh& mesh, const Patch& patch,
                                        PatchMethod method) {
  Polygon poly;
  poly.ids = patch.ring;
  poly.points.reserve(patch.ring.size());
  for (int v : patch.ring) poly.points.push_back(mesh.point(v));
  return method == PatchMethod::CDT ? cdt_polygon(poly) : ear_clip(poly);
}

double significance(const TriMesh& mesh, int v, const PixelGrid& grid, const DomainMap& map,
                    PatchMethod method) {
  if (grid.width() != map.width() || grid.height() != map.height())
    throw DimensionError("significance: grid and domain map sizes differ");
  const Patch patch = patch_of(mesh, v);
  if (!patch.removable) return kInf;
  std::vector<Triangle> tris;
  try {
    tris = triangulate_patch(mesh, patch, method);
  } catch (const TopologyError&) {
    return kInf;
  }

  std::vector<Point> pts;
  pts.reserve(patch.ring.size() + 1);
  for (int u : patch.ring) pts.push_back(mesh.point(u));
  pts.push_back(mesh.point(v));

  thread_local LocalRaster lr;
  lr.reset(map, pts);
  for (int t : patch.triangle_ids) {
    const auto& tri = mesh.triangle(t);
    lr.paint(map, mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]), lr.before,
             lr.hit_before);
  }
  for (const auto& tri : tris) {
    lr.paint(map, mesh.vertex(patch.ring[tri[0]]), mesh.vertex(patch.ring[tri[1]]),
             mesh.vertex(patch.ring[tri[2]]), lr.after, lr.hit_after);
  }

  double delta = 0.0;
  for (int r = 0; r < lr.rows; ++r)
    for (int c = 0; c < lr.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * lr.cols + c;
      if (!lr.hit_before[i]) continue;
      const double f = grid(lr.r0 + r, lr.c0 + c);
      const double old_err = lr.before[i] - f;
      const double new_err = (lr.hit_after[i] ? lr.after[i] : lr.before[i]) - f;
      delta += new_err * new_err - old_err * old_err;
    }
  return delta;
}

void RemovalQueue::resize(int slots) {
  value_.resize(slots, kInf);
  version_.resize(slots, 0);
  live_.resize(slots, 0);
}

void RemovalQueue::set(int v, double value) {
  if (v >= static_cast<int>(value_.size())) resize(v + 1);
  value_[v] = value;
  live_[v] = 1;
  ++version_[v];
  if (std::isfinite(value)) heap_.push({value, v, version_[v]});
}

void RemovalQueue::erase(int v) {
  if (!contains(v)) return;
  live_[v] = 0;
  value_[v] = kInf;
  ++version_[v];
}

void RemovalQueue::drop_stale() {
  while (!heap_.empty()) {
    const Entry& e = heap_.top();
    if (live_[e.vertex] && version_[e.vertex] == e.version) return;
    heap_.pop();
  }
}

std::optional<std::pair<int, double>> RemovalQueue::top() {
  drop_stale();
  if (heap_.empty()) return std::nullopt;
  return std::make_pair(heap_.top().vertex, heap_.top().value);
}

std::optional<std::pair<int, double>> RemovalQueue::pop() {
  auto t = top();
  if (t) erase(t->first);
  return t;
}

void gpr_reduce(TriMesh& mesh, const PixelGrid& grid, int target, PatchMethod method,
                const GprObserver& observer) {
  if (target < 3) throw ParameterError("gpr_reduce: target must be at least 3");
  const DomainMap map(grid);
  if (mesh.num_vertices() <= target) {
    mesh.compact();
    return;
  }

  const std::vector<int> verts = mesh.active_vertices();
  std::vector<double> initial(verts.size());
  parallel_for(verts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) initial[i] = significance(mesh, verts[i], grid, map, method);
  });
  RemovalQueue queue(mesh.vertex_slots());
  for (std::size_t i = 0; i < verts.size(); ++i) queue.set(verts[i], initial[i]);

  while (mesh.num_vertices() > target) {
    const auto next = queue.pop();
    if (!next) {
      mesh.compact();
      throw PartialResultError("gpr_reduce: no removable vertices left at " +
                                   std::to_string(mesh.num_vertices()) + " vertices",
                               mesh);
    }
    const int v = next->first;
    const Patch patch = patch_of(mesh, v);
    std::vector<Triangle> tris;
    try {
      tris = triangulate_patch(mesh, patch, method);
      if (observer) observer(mesh, {v, next->second});
      replace_patch(mesh, patch, tris);
    } catch (const TopologyError&) {
      continue;  // stays out of the queue
    } catch (const SurgeryError&) {
      continue;
    }
    for (int u : patch.ring) queue.set(u, significance(mesh, u, grid, map, method));
  }
  mesh.compact();
}

namespace {

void check_oversampling(const PixelGrid& grid, double sd, double gamma) {
  if (!(gamma >= 1.0)) throw ParameterError("gamma must be at least 1");
  if (!(sd > 0.0) || gamma * sd > 1.0) throw ParameterError("gamma * sd must be in (0, 1]");
  if (sd * static_cast<double>(grid.size()) < 4.0)
    throw ParameterError("sample density too low: fewer than 4 vertices");
}

}  // namespace

TriMesh gprama(const PixelGrid& grid, double sd, double gamma, PatchMethod method,
               const AmaOptions& ama) {
  check_oversampling(grid, sd, gamma);
  TriMesh mesh = ama_pipeline(grid, gamma * sd, ama);
  gpr_reduce(mesh, grid, static_cast<int>(std::lround(sd * static_cast<double>(grid.size()))),
             method);
  return mesh;
}

TriMesh gpred(const PixelGrid& grid, double sd, double gamma, PatchMethod method) {
  check_oversampling(grid, sd, gamma);
  TriMesh mesh = ed_mesh(grid, gamma * sd);
  gpr_reduce(mesh, grid, static_cast<int>(std::lround(sd * static_cast<double>(grid.size()))),
             method);
  return mesh;
}

}  // namespace meshrep
