#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "meshrep/mesh.hpp"
#include "meshrep/raster.hpp"
#include "meshrep/triangulate.hpp"

namespace testing_support {

using meshrep::Point;
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// Exact orientation and in-circle signs; doubles convert to rationals exactly.
inline int exact_orient(const Point& a, const Point& b, const Point& c) {
  const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  return sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

inline int exact_incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Rational dx(d.x), dy(d.y);
  const Rational adx = Rational(a.x) - dx, ady = Rational(a.y) - dy;
  const Rational bdx = Rational(b.x) - dx, bdy = Rational(b.y) - dy;
  const Rational cdx = Rational(c.x) - dx, cdy = Rational(c.y) - dy;
  const Rational al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
  return sign(al * (bdx * cdy - cdx * bdy) - bl * (adx * cdy - cdx * ady) +
              cl * (adx * bdy - bdx * ady));
}

inline double shoelace(const std::vector<Point>& ring) {
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % ring.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

// Jittered angles keep every gap below pi, so the polygon is star-shaped
// around the origin and simple by construction.
inline std::vector<Point> random_star_polygon(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i) angles[i] = 2.0 * M_PI * (i + 0.4 * u(rng)) / n;
  std::vector<Point> ring;
  for (double a : angles) {
    const double r = 0.2 + u(rng);
    ring.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return ring;
}

// Delaunay mesh of the unit square corners plus n random interior points.
inline meshrep::TriMesh random_square_mesh(std::mt19937& rng, int n, double side = 1.0) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<Point> pts = {{0, 0}, {side, 0}, {side, side}, {0, side}};
  for (int i = 0; i < n; ++i) pts.push_back({u(rng) * side, u(rng) * side});
  meshrep::TriMesh m = meshrep::delaunay(pts);
  for (int v = 0; v < m.vertex_slots(); ++v) m.vertex(v).boundary = m.on_domain_boundary(v);
  return m;
}

inline meshrep::PixelGrid random_image(std::mt19937& rng, int w, int h) {
  std::uniform_int_distribution<int> u(0, 255);
  meshrep::PixelGrid g(w, h);
  for (auto& s : g.samples()) s = u(rng);
  return g;
}

// Global SSE difference by full reconstruction of both meshes. Summing the
// per-pixel differences keeps the untouched pixels at exactly zero.
inline double sse_change(const meshrep::TriMesh& before, const meshrep::TriMesh& after,
                         const meshrep::PixelGrid& grid) {
  meshrep::ReconstructOptions ro;
  ro.clamp = false;
  const meshrep::DomainMap map(grid);
  const auto a = meshrep::reconstruct(before, map, ro);
  const auto b = meshrep::reconstruct(after, map, ro);
  long double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long double ea = a.samples()[i] - grid.samples()[i];
    const long double eb = b.samples()[i] - grid.samples()[i];
    s += eb * eb - ea * ea;
  }
  return static_cast<double>(s);
}

}  // namespace testing_support
