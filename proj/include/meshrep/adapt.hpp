#pragma once

#include <cmath>

#include "meshrep/metric.hpp"
#include "meshrep/raster.hpp"

namespace meshrep {

struct AdaptParams {
  /// Vertex count to steer toward; 0 keeps the count of the input mesh.
  int target_vertices = 0;
  double split_threshold = std::sqrt(2.0);
  double collapse_threshold = 1.0 / std::sqrt(2.0);
  int max_sweeps = 12;
  int smoothing_passes = 2;

  /// Throws ParameterError unless collapse < 1 < split and
  /// collapse * split <= 1.01.
  void validate() const;
};

struct AdaptStats {
  int sweeps = 0;
  int splits = 0;
  int collapses = 0;
  int flips = 0;
  int moves = 0;
  int fired() const { return splits + collapses + flips + moves; }
};

/// Structured r x c vertex grid over the image domain (r * c close to
/// n_vertices, aspect matching the domain), cells split along alternating
/// diagonals. Throws ParameterError if n_vertices < 4.
TriMesh initial_mesh(const DomainMap& map, int n_vertices);
inline TriMesh initial_mesh(const PixelGrid& grid, int n_vertices) {
  return initial_mesh(DomainMap(grid), n_vertices);
}

/// Sets every live vertex value to the bilinear image value at its position.
void assign_values(TriMesh& mesh, const PixelGrid& grid, const DomainMap& map);

/// Metric edge length sqrt(e^T M e) * sqrt(N / sigma_h) * c0, where
/// c0 = 3^(1/4) / 2 makes reference-element edges unit length.
double metric_edge_length(const Point& a, const Point& b, const Spd2& m, double n_elements,
                          double sigma_h);
/// Same, with M the mean of the field over the triangles sharing edge (a, b).
double metric_edge_length(const TriMesh& mesh, int a, int b, const MetricField& field);

/// Adapts the mesh toward an M-uniform mesh by sweeps of edge splits,
/// edge collapses, alignment-improving flips and metric-weighted vertex
/// smoothing. The mesh is compacted on return.
AdaptStats adapt_to_metric(TriMesh& mesh, const MetricField& field, const AdaptParams& params);

struct AmaOptions {
  MetricKind metric = MetricKind::Aniso;
  int iterations = 3;  // k
  AdaptParams adapt;   // target_vertices is derived from the sample density
};

/// initial_mesh -> k x {assign_values, metric, adapt_to_metric} ->
/// assign_values. The result has round(sd * |pixels|) vertices within 5%.
TriMesh ama_pipeline(const PixelGrid& grid, double sd, const AmaOptions& opts = {});

}  // namespace meshrep
