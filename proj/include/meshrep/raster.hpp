#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "meshrep/mesh.hpp"

namespace meshrep {

/// Rectangular luminance image, row-major. Samples are real-valued in
/// [0, 2^p - 1].
class PixelGrid {
 public:
  PixelGrid() = default;
  PixelGrid(int width, int height, int precision_bits = 8, double fill = 0.0);
  PixelGrid(int width, int height, std::vector<double> samples, int precision_bits = 8);

  int width() const { return width_; }
  int height() const { return height_; }
  int precision_bits() const { return precision_bits_; }
  double max_value() const { return std::ldexp(1.0, precision_bits_) - 1.0; }
  std::size_t size() const { return samples_.size(); }

  double operator()(int row, int col) const { return samples_[index(row, col)]; }
  double& operator()(int row, int col) { return samples_[index(row, col)]; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + col;
  }
  int width_ = 0;
  int height_ = 0;
  int precision_bits_ = 8;
  std::vector<double> samples_;
};

/// Maps pixel centers onto the domain [0, W/m] x [0, H/m], m = max(W, H).
/// Corner pixels land exactly on the domain corners; row index grows with y.
class DomainMap {
 public:
  DomainMap(int width, int height);
  explicit DomainMap(const PixelGrid& grid) : DomainMap(grid.width(), grid.height()) {}

  int width() const { return width_; }
  int height() const { return height_; }
  const Rect& domain() const { return domain_; }
  double spacing_x() const { return hx_; }
  double spacing_y() const { return hy_; }

  Point pixel_center(int row, int col) const { return {pixel_x(col), pixel_y(row)}; }
  double pixel_x(int col) const { return col == width_ - 1 ? domain_.x1 : col * hx_; }
  double pixel_y(int row) const { return row == height_ - 1 ? domain_.y1 : row * hy_; }
  /// Continuous column/row coordinates of a domain point.
  double col_of(double x) const { return x / hx_; }
  double row_of(double y) const { return y / hy_; }

 private:
  int width_, height_;
  Rect domain_;
  double hx_, hy_;
};

PixelGrid to_luminance(std::span<const double> red, std::span<const double> green,
                       std::span<const double> blue, int width, int height,
                       int precision_bits = 8);

/// 20 log10((2^p - 1) / d) with d the RMS difference; +inf when d == 0.
double psnr(const PixelGrid& reconstructed, const PixelGrid& original);

double sample_density(int num_points, const PixelGrid& grid);

/// Bilinear interpolation of the pixel lattice at a domain point.
/// Throws ParameterError if p is outside the domain by more than 1e-12.
double sample_bilinear(const PixelGrid& grid, const DomainMap& map, Point p);

inline constexpr double kBarycentricTolerance = -1e-12;

/// Calls fn(row, col, l0, l1, l2) for each pixel center in the closed
/// triangle (a, b, c), counterclockwise, with barycentric coordinates.
template <class Fn>
void for_each_pixel_in_triangle(const DomainMap& map, const Point& a, const Point& b,
                                const Point& c, Fn&& fn, int row_begin = 0, int row_end = -1) {
  if (row_end < 0) row_end = map.height();
  const double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (!(det > 0.0)) return;
  const double pad = 1e-9;
  const int c0 = std::max(0, static_cast<int>(std::ceil(map.col_of(std::min({a.x, b.x, c.x})) - pad)));
  const int c1 = std::min(map.width() - 1,
                          static_cast<int>(std::floor(map.col_of(std::max({a.x, b.x, c.x})) + pad)));
  const int r0 = std::max(row_begin,
                          static_cast<int>(std::ceil(map.row_of(std::min({a.y, b.y, c.y})) - pad)));
  const int r1 = std::min(row_end - 1,
                          static_cast<int>(std::floor(map.row_of(std::max({a.y, b.y, c.y})) + pad)));
  const double inv = 1.0 / det;
  // Per column step, each barycentric changes by a constant.
  const double hx = map.spacing_x();
  const double s1 = (c.y - a.y) * hx * inv, s2 = -(b.y - a.y) * hx * inv;
  const double s0 = -s1 - s2;
  for (int r = r0; r <= r1; ++r) {
    const double dy = map.pixel_y(r) - a.y;
    // Column span where all three barycentrics can pass, widened by one
    // column; the exact test below decides.
    double lo = c0, hi = c1;
    const double dx0 = -a.x;
    const double b1 = (dx0 * (c.y - a.y) - dy * (c.x - a.x)) * inv;
    const double b2 = ((b.x - a.x) * dy - (b.y - a.y) * dx0) * inv;
    const double bases[3] = {1.0 - b1 - b2, b1, b2}, slopes[3] = {s0, s1, s2};
    for (int k = 0; k < 3; ++k) {
      if (slopes[k] > 0.0)
        lo = std::max(lo, (kBarycentricTolerance - bases[k]) / slopes[k]);
      else if (slopes[k] < 0.0)
        hi = std::min(hi, (kBarycentricTolerance - bases[k]) / slopes[k]);
      else if (bases[k] < kBarycentricTolerance - 1e-9)
        hi = lo - 3.0;
    }
    lo = std::min(lo, c1 + 2.0);
    hi = std::max(hi, c0 - 2.0);
    const int start = std::max(c0, static_cast<int>(std::floor(lo)) - 1);
    const int end = std::min(c1, static_cast<int>(std::ceil(hi)) + 1);
    for (int col = start; col <= end; ++col) {
      const double dx = map.pixel_x(col) - a.x;
      const double l1 = (dx * (c.y - a.y) - dy * (c.x - a.x)) * inv;
      const double l2 = ((b.x - a.x) * dy - (b.y - a.y) * dx) * inv;
      const double l0 = 1.0 - l1 - l2;
      if (l0 >= kBarycentricTolerance && l1 >= kBarycentricTolerance &&
          l2 >= kBarycentricTolerance)
        fn(r, col, l0, l1, l2);
    }
  }
}

struct ReconstructOptions {
  bool clamp = true;
  int precision_bits = 8;
};

/// Linear finite-element interpolation of the mesh values at every pixel
/// center. A pixel on a shared edge takes the lowest-id containing triangle.
/// Throws CoverageError if some pixel center lies in no triangle.
PixelGrid reconstruct(const TriMesh& mesh, const DomainMap& map, ReconstructOptions opts = {});

/// Binary (P5) or ASCII (P2) PGM; P6/P3 PPM files are converted to luminance.
PixelGrid read_image(const std::string& path);
/// Writes an 8-bit binary PGM, rounding and clamping samples.
void write_pgm(const std::string& path, const PixelGrid& grid);

}  // namespace meshrep
