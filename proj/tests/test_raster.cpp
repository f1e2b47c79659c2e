#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "meshrep/error.hpp"
#include "meshrep/raster.hpp"
#include "meshrep/triangulate.hpp"
#include "support.hpp"

using namespace meshrep;

namespace {

// Two-loop oracle written from the definition.
double brute_psnr(const PixelGrid& a, const PixelGrid& b) {
  long double sse = 0;
  for (int r = 0; r < a.height(); ++r)
    for (int c = 0; c < a.width(); ++c) {
      const long double e = static_cast<long double>(a(r, c)) - b(r, c);
      sse += e * e;
    }
  const long double d = std::sqrt(sse / (static_cast<long double>(a.width()) * a.height()));
  if (d == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(20.0L * std::log10(255.0L / d));
}

TriMesh two_triangle_mesh(double v00, double v10, double v11, double v01) {
  TriMesh m;
  m.add_vertex({0, 0}, v00, true);
  m.add_vertex({1, 0}, v10, true);
  m.add_vertex({1, 1}, v11, true);
  m.add_vertex({0, 1}, v01, true);
  m.add_triangle(0, 1, 2);
  m.add_triangle(0, 2, 3);
  return m;
}

}  // namespace

TEST(Luminance, Examples) {
  const std::vector<double> r{255, 0, 100, 0}, g{255, 0, 100, 0}, b{255, 0, 100, 0};
  const PixelGrid y = to_luminance(r, g, b, 2, 2, 8);
  EXPECT_NEAR(y.samples()[0], 254.9745, 1e-9);
  EXPECT_EQ(y.samples()[1], 0.0);
  EXPECT_NEAR(y.samples()[2], 99.99, 1e-9);
}

TEST(Luminance, DimensionMismatch) {
  const std::vector<double> a(4), b(3);
  EXPECT_THROW(to_luminance(a, a, b, 2, 2), DimensionError);
}

TEST(Psnr, Examples) {
  PixelGrid a(2, 2), b(2, 2, 8, 1.0), c(2, 2, 8, 255.0);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  EXPECT_NEAR(psnr(a, b), 20.0 * std::log10(255.0), 1e-12);
  EXPECT_NEAR(psnr(a, b), 48.13, 0.005);
  EXPECT_NEAR(psnr(c, a), 0.0, 1e-12);
  EXPECT_THROW(psnr(a, PixelGrid(3, 2)), DimensionError);
}

TEST(Psnr, MatchesBruteForceAndIsSymmetric) {
  std::mt19937 rng(31);
  for (int i = 0; i < 50; ++i) {
    const PixelGrid a = testing_support::random_image(rng, 17, 9);
    const PixelGrid b = testing_support::random_image(rng, 17, 9);
    EXPECT_NEAR(psnr(a, b), brute_psnr(a, b), 1e-12);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
  }
}

TEST(SampleDensity, Examples) {
  EXPECT_NEAR(sample_density(7864, PixelGrid(512, 512)), 0.03, 1e-4);
  EXPECT_EQ(sample_density(64, PixelGrid(8, 8)), 1.0);
  EXPECT_EQ(sample_density(120000, PixelGrid(4000, 3000)), 0.01);
}

TEST(DomainMap, CornersAndAspect) {
  const DomainMap sq(512, 512);
  EXPECT_EQ(sq.pixel_center(0, 0).x, 0.0);
  EXPECT_EQ(sq.pixel_center(511, 511).x, 1.0);
  EXPECT_EQ(sq.pixel_center(511, 511).y, 1.0);
  const DomainMap wide(400, 300);
  EXPECT_EQ(wide.domain().x1, 1.0);
  EXPECT_EQ(wide.domain().y1, 0.75);
  EXPECT_EQ(wide.pixel_center(299, 399).y, 0.75);
  EXPECT_NEAR(wide.spacing_x(), wide.spacing_y(), 1e-3 * wide.spacing_x());
}

TEST(Reconstruct, TwoTriangleCornerMesh) {
  const DomainMap map(5, 5);
  const PixelGrid rec = reconstruct(two_triangle_mesh(0, 0, 0, 255), map);
  // Diagonal (0,0)-(1,1): the center lies on it and interpolates 0 and 0.
  EXPECT_NEAR(rec(2, 2), 0.0, 1e-12);
  // Upper-left triangle (0, 2, 3): value = 255 * (y - x).
  EXPECT_NEAR(rec(4, 0), 255.0, 1e-12);
  EXPECT_NEAR(rec(3, 1), 255.0 * (0.75 - 0.25), 1e-12);
  EXPECT_NEAR(rec(1, 3), 0.0, 1e-12);
}

TEST(Reconstruct, AffineIsExact) {
  std::mt19937 rng(32);
  TriMesh m = testing_support::random_square_mesh(rng, 60);
  for (int v : m.active_vertices()) {
    const Point p = m.point(v);
    m.vertex(v).value = 10 + 5 * p.x + 3 * p.y;
  }
  const DomainMap map(33, 33);
  ReconstructOptions ro;
  ro.clamp = false;
  const PixelGrid rec = reconstruct(m, map, ro);
  for (int r = 0; r < 33; ++r)
    for (int c = 0; c < 33; ++c) {
      const Point p = map.pixel_center(r, c);
      ASSERT_NEAR(rec(r, c), 10 + 5 * p.x + 3 * p.y, 1e-9);
    }
}

TEST(Reconstruct, ClampsToSampleRange) {
  const PixelGrid rec = reconstruct(two_triangle_mesh(-50, 300, 300, 300), DomainMap(4, 4));
  for (double s : rec.samples()) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 255.0);
  }
}

TEST(Reconstruct, CoverageFailure) {
  TriMesh m = two_triangle_mesh(0, 0, 0, 0);
  m.remove_triangle(1);
  EXPECT_THROW(reconstruct(m, DomainMap(4, 4)), CoverageError);
}

TEST(PixelLoop, BarycentricsSumToOne) {
  const DomainMap map(40, 40);
  const Point a{0.1, 0.05}, b{0.93, 0.4}, c{0.2, 0.99};
  int count = 0;
  for_each_pixel_in_triangle(map, a, b, c, [&](int, int, double l0, double l1, double l2) {
    EXPECT_GE(l0, kBarycentricTolerance);
    EXPECT_GE(l1, kBarycentricTolerance);
    EXPECT_GE(l2, kBarycentricTolerance);
    EXPECT_NEAR(l0 + l1 + l2, 1.0, 1e-12);
    ++count;
  });
  // Pick's-style estimate: area * pixels per unit area.
  const double expected = signed_area(a, b, c) * 39.0 * 39.0;
  EXPECT_NEAR(count, expected, 0.1 * expected);
}

TEST(PixelLoop, SharedEdgePixelsCoveredOnce) {
  // Every pixel of the unit square appears once when each pixel is taken by
  // the first triangle found, and at least once overall.
  const DomainMap map(9, 9);
  std::vector<int> hits(81, 0);
  for_each_pixel_in_triangle(map, {0, 0}, {1, 0}, {1, 1}, [&](int r, int c, double, double, double) { ++hits[r * 9 + c]; });
  for_each_pixel_in_triangle(map, {0, 0}, {1, 1}, {0, 1}, [&](int r, int c, double, double, double) { ++hits[r * 9 + c]; });
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) EXPECT_EQ(hits[r * 9 + c], r == c ? 2 : 1);
}

TEST(SampleBilinear, InterpolatesLattice) {
  PixelGrid g(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g(r, c) = 10 * r + c;
  const DomainMap map(g);
  EXPECT_NEAR(sample_bilinear(g, map, {0.25, 0.75}), 10 * 1.5 + 0.5, 1e-12);
  EXPECT_NEAR(sample_bilinear(g, map, {1.0, 1.0}), 22.0, 1e-12);
  EXPECT_THROW(sample_bilinear(g, map, {1.1, 0.5}), ParameterError);
}

TEST(ImageIo, PgmRoundTripAndAsciiRead) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string bin = (dir / "meshrep_test_rt.pgm").string();
  std::mt19937 rng(33);
  const PixelGrid g = testing_support::random_image(rng, 7, 5);
  write_pgm(bin, g);
  const PixelGrid r = read_image(bin);
  ASSERT_EQ(r.width(), 7);
  ASSERT_EQ(r.height(), 5);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(r.samples()[i], g.samples()[i]);

  const std::string ascii = (dir / "meshrep_test_ascii.pgm").string();
  {
    std::ofstream out(ascii);
    out << "P2\n# comment\n2 2\n255\n0 10\n20 255\n";
  }
  const PixelGrid a = read_image(ascii);
  EXPECT_EQ(a(1, 0), 20.0);
  EXPECT_EQ(a(1, 1), 255.0);

  const std::string ppm = (dir / "meshrep_test.ppm").string();
  {
    std::ofstream out(ppm);
    out << "P3\n2 2\n255\n255 255 255  0 0 0\n100 100 100  0 0 0\n";
  }
  const PixelGrid p = read_image(ppm);
  EXPECT_NEAR(p(0, 0), 254.9745, 1e-9);
  EXPECT_NEAR(p(1, 0), 99.99, 1e-9);

  EXPECT_THROW(read_image((dir / "meshrep_missing.pgm").string()), IoError);
  std::remove(bin.c_str());
  std::remove(ascii.c_str());
  std::remove(ppm.c_str());
}
