#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshrep/predicates.hpp"

namespace meshrep {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Vertex {
  Point pos;
  double value = 0.0;
  bool boundary = false;
};

using Triangle = std::array<int, 3>;

/// Triangle mesh with vertex-to-triangle adjacency.
///
/// Vertex ids are stable: removed vertices become tombstones until compact()
/// renumbers them. Triangle slots are recycled through a free list. All
/// triangles are stored counterclockwise.
class TriMesh {
 public:
  TriMesh() = default;
  explicit TriMesh(Rect domain) : domain_(domain) {}

  const Rect& domain() const { return domain_; }
  void set_domain(const Rect& r) { domain_ = r; }

  int add_vertex(Point p, double value = 0.0, bool boundary = false);
  /// Throws DegeneracyError unless (a, b, c) is strictly counterclockwise.
  int add_triangle(int a, int b, int c);
  void remove_triangle(int t);
  /// Tombstones a vertex; it must have no incident triangles left.
  void remove_vertex(int v);

  const Vertex& vertex(int v) const { return vertices_[v]; }
  Vertex& vertex(int v) { return vertices_[v]; }
  Point point(int v) const { return vertices_[v].pos; }
  const Triangle& triangle(int t) const { return triangles_[t]; }

  bool vertex_alive(int v) const { return vertex_alive_[v] != 0; }
  bool triangle_alive(int t) const { return triangle_alive_[t] != 0; }

  /// Slot counts (alive and dead); valid ids are below these.
  int vertex_slots() const { return static_cast<int>(vertices_.size()); }
  int triangle_slots() const { return static_cast<int>(triangles_.size()); }

  int num_vertices() const { return live_vertices_; }
  int num_triangles() const { return live_triangles_; }

  std::span<const int> triangles_of(int v) const { return incident_[v]; }

  std::vector<int> active_vertices() const;
  std::vector<int> active_triangles() const;

  /// Unique neighbours of v (vertices sharing a triangle with it), sorted.
  std::vector<int> neighbors(int v) const;
  /// Triangles containing both a and b (0, 1 or 2 in a valid mesh).
  std::vector<int> triangles_of_edge(int a, int b) const;

  double triangle_area(int t) const;
  double total_area() const;

  /// True if v lies on a side of the domain rectangle.
  bool on_domain_boundary(int v) const;
  /// True if v sits on two sides of the domain rectangle.
  bool is_corner(int v) const;

  /// Rewrites the vertices of a live triangle in place; the new triangle must
  /// be counterclockwise. Adjacency is updated.
  void set_triangle(int t, int a, int b, int c);
  /// Moves a vertex without any validity check.
  void move_vertex(int v, Point p) { vertices_[v].pos = p; }

  /// Drops tombstones and free slots. Returns old-id -> new-id for vertices
  /// (-1 for removed ones).
  std::vector<int> compact();

  /// Checks all structural invariants. Returns a description of the first
  /// violation, or nothing if the mesh is valid. With cover_domain, the
  /// mesh must also tile the domain rectangle with its corners present.
  std::optional<std::string> check(bool cover_domain = true) const;

 private:
  Rect domain_;
  std::vector<Vertex> vertices_;
  std::vector<char> vertex_alive_;
  std::vector<std::vector<int>> incident_;
  std::vector<Triangle> triangles_;
  std::vector<char> triangle_alive_;
  std::vector<int> free_triangles_;
  int live_vertices_ = 0;
  int live_triangles_ = 0;
};

/// The star of a vertex: its incident triangles and the polygon around them.
struct Patch {
  int center = -1;
  /// Surrounding polygon, counterclockwise. For an interior center it starts
  /// at the lowest vertex id; for a boundary center it runs from one boundary
  /// neighbour to the other and is closed by the straight boundary segment.
  std::vector<int> ring;
  /// Star triangles, triangle_ids[i] holds ring edge (ring[i], ring[i+1]).
  std::vector<int> triangle_ids;
  bool is_boundary = false;
  /// False for corners and for boundary vertices whose closing segment is
  /// not straight through the center.
  bool removable = true;
};

/// Throws TopologyError for a vertex without incident triangles or with a
/// non-manifold star.
Patch patch_of(const TriMesh& mesh, int v);

/// Replaces the star of patch.center by new_triangles (indices into
/// patch.ring) and tombstones the center. Throws SurgeryError, leaving the
/// mesh untouched, if the new triangles do not tile the ring polygon.
void replace_patch(TriMesh& mesh, const Patch& patch,
                   std::span<const Triangle> new_triangles);

}  // namespace meshrep
