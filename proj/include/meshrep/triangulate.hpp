#pragma once

#include <span>
#include <vector>

#include "meshrep/mesh.hpp"

namespace meshrep {

/// Delaunay triangulation of a point set. Vertex i of the result is
/// points[i] (value 0); convex hull vertices are flagged boundary and the
/// mesh domain is the bounding box. Cocircular ties keep the diagonal
/// through the lowest vertex id.
///
/// Throws DegeneracyError if fewer than three points, duplicates, or all
/// points collinear.
TriMesh delaunay(std::span<const Point> points);

/// A simple polygon, counterclockwise. ids break ties deterministically;
/// when empty, positions 0..n-1 are used.
struct Polygon {
  std::vector<Point> points;
  std::vector<int> ids;
};

/// True if no two non-adjacent edges touch and adjacent edges meet only at
/// their shared vertex.
bool is_simple(std::span<const Point> ring);

/// Ear clipping: repeatedly clips the valid ear with the largest minimum
/// angle (ties: lowest id). Returns |ring| - 2 counterclockwise triangles as
/// indices into the ring. Throws TopologyError on a non-simple ring.
std::vector<Triangle> ear_clip(const Polygon& poly);

/// Constrained Delaunay triangulation of the polygon interior, all ring
/// edges constrained. Same contract as ear_clip.
std::vector<Triangle> cdt_polygon(const Polygon& poly);

/// Skips the simplicity check; the ring must already be known simple.
std::vector<Triangle> ear_clip_unchecked(const Polygon& poly);
std::vector<Triangle> cdt_polygon_unchecked(const Polygon& poly);

/// Delaunay flip decision for edge (a, b) shared by ccw triangle (a, b, c)
/// and the triangle on the other side with apex d.
bool should_flip(const Point& a, const Point& b, const Point& c, const Point& d,
                 int ida, int idb, int idc, int idd);

}  // namespace meshrep
