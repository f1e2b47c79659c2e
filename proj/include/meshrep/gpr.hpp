#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "meshrep/adapt.hpp"
#include "meshrep/error.hpp"
#include "meshrep/mesh.hpp"
#include "meshrep/raster.hpp"

namespace meshrep {

enum class PatchMethod { CDT, EC };

/// gpr_reduce ran out of removable vertices; the reduced mesh is attached.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& what, TriMesh mesh) : Error(what), mesh_(std::move(mesh)) {}
  const TriMesh& mesh() const { return mesh_; }

 private:
  TriMesh mesh_;
};

/// Triangulation of the patch ring (indices into patch.ring). Throws
/// TopologyError if the ring is not a simple polygon.
std::vector<Triangle> triangulate_patch(const TriMesh& mesh, const Patch& patch,
                                        PatchMethod method);

/// Squared-error change over the pixels of the star of v when v is removed
/// and its ring retriangulated; may be negative. +inf if v cannot be removed.
double significance(const TriMesh& mesh, int v, const PixelGrid& grid, const DomainMap& map,
                    PatchMethod method);
inline double significance(const TriMesh& mesh, int v, const PixelGrid& grid,
                           PatchMethod method) {
  return significance(mesh, v, grid, DomainMap(grid), method);
}

/// Min-queue of vertex significances keyed by (value, id). Updates push a new
/// entry and bump the vertex version; stale entries are skipped on pop.
class RemovalQueue {
 public:
  explicit RemovalQueue(int slots = 0) { resize(slots); }

  void resize(int slots);
  /// Inserts or updates v. Infinite values mark v non-removable.
  void set(int v, double value);
  void erase(int v);
  bool contains(int v) const { return v < static_cast<int>(value_.size()) && live_[v]; }
  double value(int v) const { return value_[v]; }
  /// Removes and returns the finite entry with the smallest (value, id).
  std::optional<std::pair<int, double>> pop();
  /// Same as pop but leaves the entry in place.
  std::optional<std::pair<int, double>> top();

 private:
  struct Entry {
    double value;
    int vertex;
    unsigned version;
    bool operator>(const Entry& o) const {
      return value != o.value ? value > o.value : vertex > o.vertex;
    }
  };
  void drop_stale();

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  std::vector<double> value_;
  std::vector<unsigned> version_;
  std::vector<char> live_;
};

struct GprStep {
  int vertex;
  double significance;
};

/// Called before each removal with the mesh still unmodified.
using GprObserver = std::function<void(const TriMesh&, const GprStep&)>;

/// Greedily removes the vertex of least significance, retriangulating its
/// ring, until the mesh has target vertices (ties: lowest id). Vertex values
/// are kept. The mesh is compacted on return. Throws PartialResultError if
/// removable vertices run out first.
void gpr_reduce(TriMesh& mesh, const PixelGrid& grid, int target, PatchMethod method,
                const GprObserver& observer = {});

/// AMA mesh (anisotropic metric, three iterations) with gamma * sd density,
/// reduced to sd.
TriMesh gprama(const PixelGrid& grid, double sd, double gamma = 4.0,
               PatchMethod method = PatchMethod::EC, const AmaOptions& ama = {});
/// Error-diffusion mesh with gamma * sd density, reduced to sd.
TriMesh gpred(const PixelGrid& grid, double sd, double gamma = 5.0,
              PatchMethod method = PatchMethod::EC);

}  // namespace meshrep
