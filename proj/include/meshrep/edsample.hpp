#pragma once

#include <vector>

#include "meshrep/mesh.hpp"
#include "meshrep/raster.hpp"

namespace meshrep {

/// Separable [1, 2, 1] / 4 filter, horizontal then vertical, zero outside.
PixelGrid b3_smooth(const PixelGrid& grid);

/// Per pixel max(|f_xx|, |f_xy|, |f_yy|) from central second differences in
/// pixel units, zero outside. Row-major, same size as the grid.
std::vector<double> feature_map(const PixelGrid& grid);

/// Floyd-Steinberg halftoning of the density (normalized to sum to target)
/// in serpentine order. The four corner pixels are always selected. Returns
/// sorted row-major pixel indices, count within 2% of target when the
/// density has enough positive pixels. An all-zero density is replaced by a
/// uniform one. Throws ParameterError for target < 4 or negative density.
std::vector<int> dither_select(const std::vector<double>& density, int width, int height,
                               int target);

/// Smooth, feature map, dither, Delaunay; vertex values from the original
/// grid. Throws ParameterError if sd * |pixels| < 4.
TriMesh ed_mesh(const PixelGrid& grid, double sd);

}  // namespace meshrep
