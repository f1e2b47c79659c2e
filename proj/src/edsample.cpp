#include "meshrep/edsample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "meshrep/adapt.hpp"
#include "meshrep/error.hpp"
#include "meshrep/parallel.hpp"
#include "meshrep/triangulate.hpp"

namespace meshrep {

PixelGrid b3_smooth(const PixelGrid& grid) {
  const int w = grid.width(), h = grid.height();
  PixelGrid tmp(w, h, grid.precision_bits());
  PixelGrid out(w, h, grid.precision_bits());
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t b, std::size_t e) {
    for (int r = static_cast<int>(b); r < static_cast<int>(e); ++r)
      for (int c = 0; c < w; ++c) {
        const double left = c > 0 ? grid(r, c - 1) : 0.0;
        const double right = c + 1 < w ? grid(r, c + 1) : 0.0;
        tmp(r, c) = 0.25 * left + 0.5 * grid(r, c) + 0.25 * right;
      }
  });
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t b, std::size_t e) {
    for (int r = static_cast<int>(b); r < static_cast<int>(e); ++r)
      for (int c = 0; c < w; ++c) {
        const double up = r > 0 ? tmp(r - 1, c) : 0.0;
        const double down = r + 1 < h ? tmp(r + 1, c) : 0.0;
        out(r, c) = 0.25 * up + 0.5 * tmp(r, c) + 0.25 * down;
      }
  });
  return out;
}

std::vector<double> feature_map(const PixelGrid& grid) {
  const int w = grid.width(), h = grid.height();
  auto f = [&](int r, int c) {
    return (r < 0 || c < 0 || r >= h || c >= w) ? 0.0 : grid(r, c);
  };
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t b, std::size_t e) {
    for (int r = static_cast<int>(b); r < static_cast<int>(e); ++r)
      for (int c = 0; c < w; ++c) {
        const double fxx = f(r, c + 1) - 2.0 * f(r, c) + f(r, c - 1);
        const double fyy = f(r + 1, c) - 2.0 * f(r, c) + f(r - 1, c);
        const double fxy =
            0.25 * (f(r + 1, c + 1) - f(r + 1, c - 1) - f(r - 1, c + 1) + f(r - 1, c - 1));
        out[static_cast<std::size_t>(r) * w + c] =
            std::max({std::abs(fxx), std::abs(fxy), std::abs(fyy)});
      }
  });
  return out;
}

namespace {

// One serpentine Floyd-Steinberg pass over density * scale.
std::vector<int> diffuse(const std::vector<double>& density, int w, int h, double scale) {
  std::vector<double> cur(w + 2, 0.0), next(w + 2, 0.0);  // padded by one on each side
  std::vector<int> selected;
  for (int r = 0; r < h; ++r) {
    std::fill(next.begin(), next.end(), 0.0);
    const bool forward = r % 2 == 0;
    const int dir = forward ? 1 : -1;
    for (int k = 0; k < w; ++k) {
      const int c = forward ? k : w - 1 - k;
      const int i = c + 1;
      const double v = cur[i] + density[static_cast<std::size_t>(r) * w + c] * scale;
      double err = v;
      if (v >= 0.5) {
        selected.push_back(r * w + c);
        err = v - 1.0;
      }
      cur[i + dir] += err * (7.0 / 16.0);
      next[i - dir] += err * (3.0 / 16.0);
      next[i] += err * (5.0 / 16.0);
      next[i + dir] += err * (1.0 / 16.0);
    }
    std::swap(cur, next);
  }
  return selected;
}

std::vector<int> with_corners(std::vector<int> sel, int w, int h) {
  sel.insert(sel.end(), {0, w - 1, (h - 1) * w, (h - 1) * w + w - 1});
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  return sel;
}

}  // namespace

std::vector<int> dither_select(const std::vector<double>& density, int width, int height,
                               int target) {
  if (target < 4) throw ParameterError("dither_select: target must be at least 4");
  if (density.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("dither_select: density size does not match the image");
  if (target > width * height) throw ParameterError("dither_select: target exceeds pixel count");
  double sum = 0.0;
  for (double d : density) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw ParameterError("dither_select: density must be finite and non-negative");
    sum += d;
  }
  std::vector<double> norm(density.size(), static_cast<double>(target) / density.size());
  if (sum > 0.0)
    for (std::size_t i = 0; i < density.size(); ++i) norm[i] = density[i] * target / sum;

  auto run = [&](double s) { return with_corners(diffuse(norm, width, height, s), width, height); };
  auto within = [&](std::size_t n) {
    return std::abs(static_cast<double>(n) - target) <= 0.02 * target;
  };
  auto best = run(1.0);
  if (within(best.size())) return best;

  // Error-diffusion counts track the scale closely; bisect on it.
  double lo = 0.0, hi = 1.0;
  if (best.size() < static_cast<std::size_t>(target)) {
    lo = 1.0;
    hi = 2.0;
    while (run(hi).size() < static_cast<std::size_t>(target) && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto sel = run(mid);
    if (std::abs(static_cast<double>(sel.size()) - target) <
        std::abs(static_cast<double>(best.size()) - target))
      best = sel;
    if (within(sel.size())) return sel;
    (sel.size() < static_cast<std::size_t>(target) ? lo : hi) = mid;
  }
  return best;
}

TriMesh ed_mesh(const PixelGrid& grid, double sd) {
  const double want = sd * static_cast<double>(grid.size());
  if (!(want >= 4.0)) throw ParameterError("sample density too low: fewer than 4 vertices");
  const int target = static_cast<int>(std::lround(want));
  const auto density = feature_map(b3_smooth(grid));
  const auto sel = dither_select(density, grid.width(), grid.height(), target);

  const DomainMap map(grid);
  std::vector<Point> pts;
  pts.reserve(sel.size());
  for (int idx : sel) pts.push_back(map.pixel_center(idx / grid.width(), idx % grid.width()));
  TriMesh mesh = delaunay(pts);
  mesh.set_domain(map.domain());
  for (int v = 0; v < mesh.vertex_slots(); ++v) {
    const int idx = sel[v];
    mesh.vertex(v).value = grid(idx / grid.width(), idx % grid.width());
    mesh.vertex(v).boundary = mesh.on_domain_boundary(v);
  }
  return mesh;
}

}  // namespace meshrep
