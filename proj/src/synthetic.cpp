#include "meshrep/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "meshrep/error.hpp"

namespace meshrep {

PixelGrid affine_image(int width, int height, double c, double gx, double gy) {
  PixelGrid g(width, height);
  for (int r = 0; r < height; ++r)
    for (int col = 0; col < width; ++col) g(r, col) = c + gx * col + gy * r;
  return g;
}

PixelGrid tanh_edge(int width, int height, double cx, double cy, double theta, double width_px,
                    double lo, double hi) {
  PixelGrid g(width, height);
  const double nx = std::cos(theta), ny = std::sin(theta);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double s = ((c - cx) * nx + (r - cy) * ny) / width_px;
      g(r, c) = lo + (hi - lo) * 0.5 * (1.0 + std::tanh(s));
    }
  return g;
}

std::vector<std::string> synthetic_names() { return {"edges", "ridges", "blobs", "scene"}; }

namespace {

// Portable uniform draws; std distributions differ between library vendors.
class Draw {
 public:
  explicit Draw(std::uint32_t seed) : gen_(seed) {}
  double operator()(double lo, double hi) { return lo + (hi - lo) * (gen_() / 4294967296.0); }

 private:
  std::mt19937 gen_;
};


double clamp8(double v) { return std::clamp(v, 0.0, 255.0); }

void add_edges(std::vector<double>& f, int w, int h, Draw& d, int count) {
  for (int k = 0; k < count; ++k) {
    const double cx = d(0.1, 0.9) * w, cy = d(0.1, 0.9) * h;
    const double th = d(0.0, 2.0 * std::numbers::pi);
    const double width = d(1.6, 8.0) * w / 512.0;
    const double amp = d(-50.0, 50.0);
    const double nx = std::cos(th), ny = std::sin(th);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const double s = ((c - cx) * nx + (r - cy) * ny) / width;
        f[static_cast<std::size_t>(r) * w + c] += amp * 0.5 * std::tanh(s);
      }
  }
}

void add_ridges(std::vector<double>& f, int w, int h, Draw& d, int count) {
  for (int k = 0; k < count; ++k) {
    const double cx = d(0.1, 0.9) * w, cy = d(0.1, 0.9) * h;
    const double th = d(0.0, std::numbers::pi);
    const double sigma = d(2.0, 10.0) * w / 512.0;
    const double amp = d(-90.0, 90.0);
    const double curve = d(-1.5, 1.5) / w;
    const double nx = std::cos(th), ny = std::sin(th);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const double u = (c - cx) * nx + (r - cy) * ny;
        const double t = -(c - cx) * ny + (r - cy) * nx;
        const double s = (u - curve * t * t) / sigma;
        f[static_cast<std::size_t>(r) * w + c] += amp * std::exp(-0.5 * s * s);
      }
  }
}

void add_blobs(std::vector<double>& f, int w, int h, Draw& d, int count) {
  for (int k = 0; k < count; ++k) {
    const double cx = d(0.05, 0.95) * w, cy = d(0.05, 0.95) * h;
    const double radius = d(10.0, 70.0) * w / 512.0;
    const double soft = d(1.4, 6.0) * w / 512.0;
    const double amp = d(-45.0, 45.0);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const double s = (std::hypot(c - cx, r - cy) - radius) / soft;
        f[static_cast<std::size_t>(r) * w + c] += amp * 0.5 * (1.0 - std::tanh(s));
      }
  }
}

}  // namespace

PixelGrid synthetic_image(const std::string& name, int width, int height) {
  std::vector<double> f(static_cast<std::size_t>(width) * height, 0.0);
  // Shared smooth background.
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      f[static_cast<std::size_t>(r) * width + c] =
          120.0 + 25.0 * std::sin(2.0 * std::numbers::pi * c / width) *
                      std::cos(std::numbers::pi * r / height);
  if (name == "edges") {
    Draw d(11);
    add_edges(f, width, height, d, 9);
    add_blobs(f, width, height, d, 3);
  } else if (name == "ridges") {
    Draw d(23);
    add_ridges(f, width, height, d, 10);
    add_edges(f, width, height, d, 2);
  } else if (name == "blobs") {
    Draw d(37);
    add_blobs(f, width, height, d, 14);
    add_ridges(f, width, height, d, 2);
  } else if (name == "scene") {
    Draw d(5);
    add_edges(f, width, height, d, 25);
    add_ridges(f, width, height, d, 20);
    add_blobs(f, width, height, d, 25);
  } else {
    throw ParameterError("unknown synthetic image '" + name + "'");
  }
  // Sensor noise, sigma one grey level (Box-Muller).
  Draw noise(101);
  for (double& v : f) {
    const double u1 = 1.0 - noise(0.0, 1.0), u2 = noise(0.0, 1.0);
    v += std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  for (double& v : f) v = std::round(clamp8(v));
  return PixelGrid(width, height, std::move(f));
}

}  // namespace meshrep
