#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshrep/raster.hpp"

namespace meshrep {

/// f(row, col) = c + gx * col + gy * row.
PixelGrid affine_image(int width, int height, double c, double gx, double gy);

/// Smooth step across the line through (cx, cy) with normal angle theta,
/// going from lo to hi over about `width` pixels.
PixelGrid tanh_edge(int width, int height, double cx, double cy, double theta, double width_px,
                    double lo, double hi);

/// Names of the bundled test images: "edges", "ridges", "blobs" (one dominant
/// feature type each) and "scene" (all three mixed).
std::vector<std::string> synthetic_names();

/// Deterministic 8-bit test image. Throws ParameterError for an unknown name.
PixelGrid synthetic_image(const std::string& name, int width = 512, int height = 512);

}  // namespace meshrep
