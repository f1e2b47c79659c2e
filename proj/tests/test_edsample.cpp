#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "meshrep/edsample.hpp"
#include "meshrep/error.hpp"
#include "support.hpp"

using namespace meshrep;

TEST(B3Smooth, Examples) {
  const PixelGrid flat(7, 7, 8, 100.0);
  const PixelGrid s = b3_smooth(flat);
  EXPECT_DOUBLE_EQ(s(3, 3), 100.0);
  EXPECT_DOUBLE_EQ(s(0, 0), 100.0 * 9.0 / 16.0);
  EXPECT_DOUBLE_EQ(s(0, 3), 100.0 * 12.0 / 16.0);

  PixelGrid impulse(5, 5);
  impulse(2, 2) = 16.0;
  const PixelGrid r = b3_smooth(impulse);
  const double k[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const bool inside = std::abs(i - 2) <= 1 && std::abs(j - 2) <= 1;
      EXPECT_DOUBLE_EQ(r(i, j), inside ? k[i - 1][j - 1] : 0.0);
    }
}

TEST(FeatureMap, Examples) {
  PixelGrid ramp(8, 8), quad(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      ramp(r, c) = 3 * c + 2 * r;
      quad(r, c) = c * c;
    }
  const auto fr = feature_map(ramp);
  const auto fq = feature_map(quad);
  for (int r = 1; r < 7; ++r)
    for (int c = 1; c < 7; ++c) {
      EXPECT_NEAR(fr[r * 8 + c], 0.0, 1e-12);
      EXPECT_NEAR(fq[r * 8 + c], 2.0, 1e-12);
    }
}

TEST(FeatureMap, MatchesStencilOracle) {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const PixelGrid g = testing_support::random_image(rng, 5, 5);
    // Zero-padded copy, then the three stencils verbatim.
    double p[7][7] = {};
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) p[r + 1][c + 1] = g(r, c);
    const auto f = feature_map(g);
    for (int r = 1; r <= 5; ++r)
      for (int c = 1; c <= 5; ++c) {
        const double fxx = p[r][c + 1] - 2 * p[r][c] + p[r][c - 1];
        const double fyy = p[r + 1][c] - 2 * p[r][c] + p[r - 1][c];
        const double fxy = (p[r + 1][c + 1] - p[r + 1][c - 1] - p[r - 1][c + 1] + p[r - 1][c - 1]) / 4;
        EXPECT_DOUBLE_EQ(f[(r - 1) * 5 + (c - 1)],
                         std::max({std::abs(fxx), std::abs(fxy), std::abs(fyy)}));
      }
  }
}

TEST(DitherSelect, UniformDensityIsEvenlySpread) {
  const int w = 64, h = 64, target = w * h / 4;
  const std::vector<double> density(w * h, 1.0);
  const auto sel = dither_select(density, w, h, target);
  EXPECT_NEAR(static_cast<double>(sel.size()), target, 0.02 * target);
  EXPECT_TRUE(std::is_sorted(sel.begin(), sel.end()));
  // Quadrant counts: chi-square against equal expectation, 3 dof.
  int q[4] = {};
  for (int i : sel) ++q[(i / w >= h / 2) * 2 + (i % w >= w / 2)];
  const double e = sel.size() / 4.0;
  double chi2 = 0;
  for (int c : q) chi2 += (c - e) * (c - e) / e;
  EXPECT_LT(chi2, 7.81);
}

TEST(DitherSelect, ConcentratedRow) {
  const int w = 40, h = 30;
  std::vector<double> density(w * h, 0.0);
  for (int c = 0; c < w; ++c) density[12 * w + c] = 1.0;
  const auto sel = dither_select(density, w, h, 20);
  for (int i : sel) {
    const bool corner = i == 0 || i == w - 1 || i == (h - 1) * w || i == h * w - 1;
    if (!corner) EXPECT_EQ(i / w, 12);
  }
  for (int corner : {0, w - 1, (h - 1) * w, h * w - 1})
    EXPECT_TRUE(std::binary_search(sel.begin(), sel.end(), corner));
}

TEST(DitherSelect, ZeroDensityFallsBackToUniform) {
  const auto sel = dither_select(std::vector<double>(32 * 32, 0.0), 32, 32, 100);
  EXPECT_NEAR(static_cast<double>(sel.size()), 100, 2);
}

TEST(DitherSelect, Errors) {
  std::vector<double> d(16, 1.0);
  EXPECT_THROW(dither_select(d, 4, 4, 3), ParameterError);
  d[3] = -1;
  EXPECT_THROW(dither_select(d, 4, 4, 8), ParameterError);
}

TEST(DitherSelect, Deterministic) {
  std::mt19937 rng(62);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> d(50 * 50);
  for (auto& x : d) x = u(rng);
  EXPECT_EQ(dither_select(d, 50, 50, 200), dither_select(d, 50, 50, 200));
}

TEST(EdMesh, ConstantImageIsExact) {
  const PixelGrid g(64, 64, 8, 140.0);
  const TriMesh m = ed_mesh(g, 0.05);
  EXPECT_FALSE(m.check().has_value());
  EXPECT_TRUE(std::isinf(psnr(reconstruct(m, DomainMap(g)), g)));
  EXPECT_THROW(ed_mesh(g, 0.0005), ParameterError);
}

TEST(EdMesh, PointsClusterInTransitionBand) {
  // Bright disc with a tanh rim on a dark background, so the zero
  // extension adds no border response.
  const int n = 256;
  const double radius = 70, k = 0.15;
  PixelGrid g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      g(r, c) = 100 + 100 * std::tanh(k * (radius - std::hypot(r - 127.5, c - 127.5)));
  const TriMesh m = ed_mesh(g, 0.02);
  const DomainMap map(g);
  int in_band = 0, total = 0;
  for (int v : m.active_vertices()) {
    if (m.is_corner(v)) continue;
    const int c = static_cast<int>(std::lround(map.col_of(m.point(v).x)));
    const int r = static_cast<int>(std::lround(map.row_of(m.point(v).y)));
    const double f = g(r, c);
    ++total;
    if (f >= 20 && f <= 180) ++in_band;
  }
  EXPECT_GE(static_cast<double>(in_band) / total, 0.6);
}

TEST(EdMesh, VerticesArePixelCentersWithOriginalValues) {
  std::mt19937 rng(63);
  const PixelGrid g = testing_support::random_image(rng, 40, 30);
  const TriMesh m = ed_mesh(g, 0.1);
  const DomainMap map(g);
  EXPECT_EQ(m.domain(), map.domain());
  EXPECT_NEAR(m.num_vertices(), 120, 0.02 * 120 + 1);
  for (int v : m.active_vertices()) {
    const int c = static_cast<int>(std::lround(map.col_of(m.point(v).x)));
    const int r = static_cast<int>(std::lround(map.row_of(m.point(v).y)));
    EXPECT_EQ(m.point(v).x, map.pixel_center(r, c).x);
    EXPECT_EQ(m.point(v).y, map.pixel_center(r, c).y);
    EXPECT_EQ(m.vertex(v).value, g(r, c));
  }
}
