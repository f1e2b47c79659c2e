#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "meshrep/error.hpp"
#include "meshrep/triangulate.hpp"
#include "support.hpp"

using namespace meshrep;
using testing_support::exact_incircle;
using testing_support::exact_orient;
using testing_support::random_star_polygon;
using testing_support::shoelace;

namespace {

// Every triangle's circumcircle is empty of other input points.
void expect_empty_circumcircles(const TriMesh& m, const std::vector<Point>& pts) {
  for (int t : m.active_triangles()) {
    const auto& tri = m.triangle(t);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (static_cast<int>(p) == tri[0] || static_cast<int>(p) == tri[1] ||
          static_cast<int>(p) == tri[2])
        continue;
      ASSERT_LE(exact_incircle(pts[tri[0]], pts[tri[1]], pts[tri[2]], pts[p]), 0)
          << "point " << p << " inside triangle " << t;
    }
  }
}

double convex_hull_area(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Point> h;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = h.size();
    for (const Point& q : p) {
      while (h.size() >= base + 2 && exact_orient(h[h.size() - 2], h.back(), q) <= 0) h.pop_back();
      h.push_back(q);
    }
    h.pop_back();
    std::reverse(p.begin(), p.end());
  }
  return shoelace(h);
}

void expect_valid_polygon_triangulation(const std::vector<Point>& ring,
                                        const std::vector<Triangle>& tris) {
  const int n = static_cast<int>(ring.size());
  ASSERT_EQ(static_cast<int>(tris.size()), n - 2);
  double area = 0.0;
  for (const auto& t : tris) {
    ASSERT_EQ(exact_orient(ring[t[0]], ring[t[1]], ring[t[2]]), 1);
    area += signed_area(ring[t[0]], ring[t[1]], ring[t[2]]);
  }
  const double expect = shoelace(ring);
  EXPECT_NEAR(area, expect, 1e-12 * std::abs(expect));
}

}  // namespace

TEST(Delaunay, FourCornersGiveTwoTriangles) {
  const std::vector<Point> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const TriMesh m = delaunay(pts);
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_FALSE(m.check().has_value());
  // Cocircular: the diagonal runs through vertex 0, the lowest id.
  EXPECT_EQ(m.triangles_of_edge(0, 2).size(), 2u);
}

TEST(Delaunay, EmptyCircumcircleOnRandomTwelvePointSets) {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> pts(12);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const TriMesh m = delaunay(pts);
    ASSERT_FALSE(m.check(false).has_value());
    expect_empty_circumcircles(m, pts);
    double area = 0.0;
    for (int t : m.active_triangles()) area += m.triangle_area(t);
    EXPECT_NEAR(area, convex_hull_area(pts), 1e-12);
  }
}

TEST(Delaunay, HundredRandomPoints) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(100);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const TriMesh m = delaunay(pts);
  ASSERT_FALSE(m.check(false).has_value());
  expect_empty_circumcircles(m, pts);
}

TEST(Delaunay, LatticeWithCocircularQuads) {
  std::vector<Point> pts;
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 9; ++c) pts.push_back({c / 8.0, r / 6.0});
  const TriMesh m = delaunay(pts);
  EXPECT_FALSE(m.check().has_value());
  EXPECT_EQ(m.num_triangles(), 2 * 6 * 8);
  expect_empty_circumcircles(m, pts);
}

TEST(Delaunay, RepeatsExactly) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> u(0, 20);
  std::vector<Point> pts;
  std::set<std::pair<int, int>> seen;
  while (pts.size() < 80) {
    const int x = u(rng), y = u(rng);
    if (seen.insert({x, y}).second) pts.push_back({x / 20.0, y / 20.0});
  }
  const TriMesh a = delaunay(pts), b = delaunay(pts);
  ASSERT_EQ(a.triangle_slots(), b.triangle_slots());
  for (int t = 0; t < a.triangle_slots(); ++t) EXPECT_EQ(a.triangle(t), b.triangle(t));
}

TEST(Delaunay, RejectsDegenerateInput) {
  EXPECT_THROW(delaunay(std::vector<Point>{{0, 0}, {1, 1}}), DegeneracyError);
  EXPECT_THROW(delaunay(std::vector<Point>{{0, 0}, {1, 1}, {2, 2}}), DegeneracyError);
  EXPECT_THROW(delaunay(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}, {1, 0}}), DegeneracyError);
}

TEST(Polygon, TriangleRingIsItself) {
  Polygon p{{{0, 0}, {1, 0}, {0, 1}}, {}};
  for (const auto& tris : {ear_clip(p), cdt_polygon(p)}) {
    ASSERT_EQ(tris.size(), 1u);
    EXPECT_EQ(exact_orient(p.points[tris[0][0]], p.points[tris[0][1]], p.points[tris[0][2]]), 1);
  }
}

TEST(Polygon, ConvexQuad) {
  Polygon p{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}};
  expect_valid_polygon_triangulation(p.points, ear_clip(p));
  expect_valid_polygon_triangulation(p.points, cdt_polygon(p));
}

TEST(Polygon, ConcaveExample) {
  Polygon p{{{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}, {}};
  const auto ec = ear_clip(p);
  expect_valid_polygon_triangulation(p.points, ec);
  EXPECT_NEAR(shoelace(p.points), 2.5, 1e-15);
  expect_valid_polygon_triangulation(p.points, cdt_polygon(p));
}

TEST(Polygon, RandomSimplePolygons) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> size(3, 15);
  for (int trial = 0; trial < 200; ++trial) {
    Polygon p{random_star_polygon(rng, size(rng)), {}};
    expect_valid_polygon_triangulation(p.points, ear_clip(p));
    expect_valid_polygon_triangulation(p.points, cdt_polygon(p));
  }
}

TEST(Polygon, CdtOfConvexPolygonIsDelaunay) {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(9);
    for (auto& x : a) x = u(rng);
    std::sort(a.begin(), a.end());
    Polygon p;
    for (double t : a) p.points.push_back({std::cos(t) * 1.3, std::sin(t) * 0.7});
    const auto tris = cdt_polygon(p);
    for (const auto& t : tris)
      for (std::size_t q = 0; q < p.points.size(); ++q)
        if (static_cast<int>(q) != t[0] && static_cast<int>(q) != t[1] && static_cast<int>(q) != t[2])
          ASSERT_LE(exact_incircle(p.points[t[0]], p.points[t[1]], p.points[t[2]], p.points[q]), 0);
  }
}

TEST(Polygon, CdtOfUShapeStaysInside) {
  Polygon p{{{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}, {}};
  const auto tris = cdt_polygon(p);
  expect_valid_polygon_triangulation(p.points, tris);
  // No triangle may contain the notch point (1.5, 2).
  for (const auto& t : tris) {
    const Point q{1.5, 2.0};
    const bool inside = exact_orient(p.points[t[0]], p.points[t[1]], q) > 0 &&
                        exact_orient(p.points[t[1]], p.points[t[2]], q) > 0 &&
                        exact_orient(p.points[t[2]], p.points[t[0]], q) > 0;
    EXPECT_FALSE(inside);
  }
}

TEST(Polygon, EarClipPrefersFatEars) {
  // Thin convex quad: the diagonal that keeps both angles large wins.
  Polygon p{{{0, 0}, {4, 0}, {4.5, 1}, {0.5, 1}}, {}};
  const auto tris = ear_clip(p);
  std::set<std::pair<int, int>> diag;
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      if ((a + 1) % 4 != b && (b + 1) % 4 != a) diag.insert({std::min(a, b), std::max(a, b)});
    }
  ASSERT_EQ(diag.size(), 1u);
  EXPECT_EQ(*diag.begin(), std::make_pair(1, 3));
}

TEST(Polygon, RejectsSelfIntersection) {
  Polygon bow{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {}};
  EXPECT_FALSE(is_simple(bow.points));
  EXPECT_THROW(ear_clip(bow), TopologyError);
  EXPECT_THROW(cdt_polygon(bow), TopologyError);
}

TEST(Polygon, CollinearRingVerticesAreHandled) {
  Polygon p{{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}, {0, 1}}, {}};
  expect_valid_polygon_triangulation(p.points, ear_clip(p));
  expect_valid_polygon_triangulation(p.points, cdt_polygon(p));
}
