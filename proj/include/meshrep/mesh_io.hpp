#pragma once

#include <iosfwd>
#include <string>

#include "meshrep/mesh.hpp"

namespace meshrep {

// "AMAMESH 1" text format:
//   AMAMESH 1
//   nv nt
//   x y value b      (nv lines; domain coordinates, luminance, boundary 0/1)
//   v0 v1 v2         (nt lines; 0-based, counterclockwise)
// Reals are written with 17 significant digits, so a round trip is exact.
// Only live vertices and triangles are written, renumbered densely.
void write_mesh(std::ostream& out, const TriMesh& mesh);
void write_mesh(const std::string& path, const TriMesh& mesh);

/// The domain is taken as the bounding box of the vertices.
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh(const std::string& path);

}  // namespace meshrep
