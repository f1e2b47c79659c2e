#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "meshrep/error.hpp"
#include "meshrep/gpr.hpp"
#include "meshrep/synthetic.hpp"
#include "support.hpp"

using namespace meshrep;
using testing_support::sse_change;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Removal cost by full reconstruction of the whole image before and after.
double oracle_significance(const TriMesh& mesh, int v, const PixelGrid& grid, PatchMethod method) {
  if (mesh.is_corner(v)) return kInf;
  const Patch p = patch_of(mesh, v);
  if (!p.removable) return kInf;
  TriMesh copy = mesh;
  try {
    replace_patch(copy, p, triangulate_patch(mesh, p, method));
  } catch (const Error&) {
    return kInf;
  }
  return sse_change(mesh, copy, grid);
}

TriMesh random_mesh_on_image(std::mt19937& rng, const PixelGrid& g, int interior) {
  TriMesh m = testing_support::random_square_mesh(rng, interior);
  std::uniform_real_distribution<double> u(0, 255);
  for (int v : m.active_vertices()) m.vertex(v).value = u(rng);
  return m;
}

}  // namespace

TEST(RemovalQueue, OrderingUpdatesAndTies) {
  RemovalQueue q(6);
  q.set(3, 5.0);
  q.set(1, 2.0);
  q.set(4, 2.0);
  q.set(0, kInf);
  q.set(2, -1.0);
  EXPECT_EQ(q.top()->first, 2);
  q.set(2, 10.0);  // stale entry for 2 must be skipped
  // Tracked but never popped.
  EXPECT_TRUE(q.contains(0));
  EXPECT_TRUE(std::isinf(q.value(0)));
  auto a = q.pop();
  ASSERT_TRUE(a);
  EXPECT_EQ(a->first, 1);  // tie at 2.0: lowest id first
  EXPECT_EQ(q.pop()->first, 4);
  q.erase(3);
  EXPECT_EQ(q.pop()->first, 2);
  EXPECT_EQ(q.pop()->second, 10.0);
  EXPECT_FALSE(q.pop().has_value());
}

TEST(RemovalQueue, MatchesSortedOracle) {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> pick(0, 99);
  RemovalQueue q(100);
  std::vector<double> val(100, kInf);
  for (int i = 0; i < 2000; ++i) {
    const int v = pick(rng);
    val[v] = std::round(u(rng) * 4) / 4;  // coarse values force ties
    q.set(v, val[v]);
  }
  for (;;) {
    int best = -1;
    for (int v = 0; v < 100; ++v)
      if (std::isfinite(val[v]) && (best < 0 || val[v] < val[best])) best = v;
    const auto got = q.pop();
    if (best < 0) {
      EXPECT_FALSE(got.has_value());
      break;
    }
    ASSERT_TRUE(got);
    EXPECT_EQ(got->first, best);
    EXPECT_EQ(got->second, val[best]);
    val[best] = kInf;
  }
}

TEST(TriangulatePatch, BothMethodsTileTheRing) {
  std::mt19937 rng(72);
  TriMesh m = testing_support::random_square_mesh(rng, 40);
  for (int v : m.active_vertices()) {
    const Patch p = patch_of(m, v);
    if (!p.removable) continue;
    for (PatchMethod method : {PatchMethod::CDT, PatchMethod::EC}) {
      TriMesh copy = m;
      const auto tris = triangulate_patch(m, p, method);
      EXPECT_EQ(tris.size(), p.ring.size() - 2);
      ASSERT_NO_THROW(replace_patch(copy, p, tris));
      EXPECT_FALSE(copy.check().has_value());
    }
  }
}

TEST(Significance, MatchesGlobalSseDifference) {
  std::mt19937 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const PixelGrid g = testing_support::random_image(rng, 16, 16);
    const TriMesh m = random_mesh_on_image(rng, g, 16);
    for (PatchMethod method : {PatchMethod::CDT, PatchMethod::EC})
      for (int v : m.active_vertices()) {
        const double got = significance(m, v, g, method);
        const double want = oracle_significance(m, v, g, method);
        if (std::isinf(want)) {
          EXPECT_TRUE(std::isinf(got));
        } else {
          EXPECT_NEAR(got, want, 1e-9);
        }
      }
  }
}

TEST(Significance, CornerIsInfinite) {
  std::mt19937 rng(74);
  const PixelGrid g = testing_support::random_image(rng, 8, 8);
  const TriMesh m = random_mesh_on_image(rng, g, 5);
  for (int v : m.active_vertices())
    if (m.is_corner(v)) EXPECT_TRUE(std::isinf(significance(m, v, g, PatchMethod::EC)));
}

TEST(GprReduce, EachStepRemovesArgmin) {
  std::mt19937 rng(75);
  for (int trial = 0; trial < 10; ++trial) {
    const PixelGrid g = testing_support::random_image(rng, 12, 12);
    TriMesh m = random_mesh_on_image(rng, g, 20);
    const PatchMethod method = trial % 2 ? PatchMethod::CDT : PatchMethod::EC;
    int steps = 0;
    gpr_reduce(m, g, 8, method, [&](const TriMesh& cur, const GprStep& step) {
      double best = kInf;
      for (int v : cur.active_vertices()) best = std::min(best, oracle_significance(cur, v, g, method));
      EXPECT_NEAR(step.significance, best, 1e-9);
      EXPECT_NEAR(oracle_significance(cur, step.vertex, g, method), best, 1e-9);
      ++steps;
    });
    EXPECT_EQ(m.num_vertices(), 8);
    EXPECT_EQ(steps, 16);
    EXPECT_FALSE(m.check().has_value());
  }
}

TEST(GprReduce, KeepsOriginalValues) {
  std::mt19937 rng(76);
  const PixelGrid g = testing_support::random_image(rng, 20, 20);
  TriMesh m = random_mesh_on_image(rng, g, 40);
  std::vector<std::pair<Point, double>> before;
  for (int v : m.active_vertices()) before.push_back({m.point(v), m.vertex(v).value});
  gpr_reduce(m, g, 20, PatchMethod::EC);
  for (int v : m.active_vertices()) {
    const auto it = std::find_if(before.begin(), before.end(), [&](const auto& pv) {
      return pv.first.x == m.point(v).x && pv.first.y == m.point(v).y;
    });
    ASSERT_NE(it, before.end());
    EXPECT_EQ(it->second, m.vertex(v).value);
  }
}

TEST(GprReduce, RunsOutOfRemovableVertices) {
  // Only the four corners plus one interior vertex: the target of 3 can't be
  // reached because corners are never removed.
  std::mt19937 rng(77);
  const PixelGrid g = testing_support::random_image(rng, 8, 8);
  TriMesh m = random_mesh_on_image(rng, g, 1);
  try {
    gpr_reduce(m, g, 3, PatchMethod::EC);
    FAIL() << "expected PartialResultError";
  } catch (const PartialResultError& e) {
    EXPECT_EQ(e.mesh().num_vertices(), 4);
    EXPECT_FALSE(e.mesh().check().has_value());
  }
  EXPECT_THROW(gpr_reduce(m, g, 2, PatchMethod::EC), ParameterError);
}

TEST(Gpr, OversamplingChecks) {
  const PixelGrid g(64, 64, 8, 10.0);
  EXPECT_THROW(gprama(g, 0.03, 0.5), ParameterError);
  EXPECT_THROW(gpred(g, 0.3, 5.0), ParameterError);
  EXPECT_THROW(gpred(g, 0.0005, 1.0), ParameterError);
}

TEST(Gpr, FlatImageAndVertexCount) {
  const PixelGrid flat(64, 64, 8, 10.0);
  const TriMesh a = gpred(flat, 0.03, 5.0, PatchMethod::CDT);
  EXPECT_EQ(a.num_vertices(), 123);
  EXPECT_TRUE(std::isinf(psnr(reconstruct(a, DomainMap(flat)), flat)));

  const PixelGrid g = synthetic_image("blobs", 96, 96);
  const TriMesh b = gprama(g, 0.03, 3.0);
  EXPECT_EQ(b.num_vertices(), static_cast<int>(std::lround(0.03 * 96 * 96)));
  EXPECT_FALSE(b.check().has_value());
}

TEST(Gpr, ReductionBeatsDirectSampling) {
  const PixelGrid g = synthetic_image("edges", 128, 128);
  const DomainMap map(g);
  const double ama = psnr(reconstruct(ama_pipeline(g, 0.03), map), g);
  const double gp = psnr(reconstruct(gprama(g, 0.03, 4.0), map), g);
  EXPECT_GT(gp, ama);
}
