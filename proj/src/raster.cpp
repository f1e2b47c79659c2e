#include "meshrep/raster.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "meshrep/error.hpp"
#include "meshrep/parallel.hpp"

namespace meshrep {

PixelGrid::PixelGrid(int width, int height, int precision_bits, double fill)
    : width_(width), height_(height), precision_bits_(precision_bits) {
  if (width < 2 || height < 2) throw DimensionError("image must be at least 2x2");
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

PixelGrid::PixelGrid(int width, int height, std::vector<double> samples, int precision_bits)
    : width_(width), height_(height), precision_bits_(precision_bits), samples_(std::move(samples)) {
  if (width < 2 || height < 2) throw DimensionError("image must be at least 2x2");
  if (samples_.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("sample count does not match image dimensions");
}

DomainMap::DomainMap(int width, int height) : width_(width), height_(height) {
  if (width < 2 || height < 2) throw DimensionError("image must be at least 2x2");
  const double m = std::max(width, height);
  domain_ = Rect{0.0, 0.0, width / m, height / m};
  hx_ = domain_.x1 / (width - 1);
  hy_ = domain_.y1 / (height - 1);
}

PixelGrid to_luminance(std::span<const double> red, std::span<const double> green,
                       std::span<const double> blue, int width, int height, int precision_bits) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (red.size() != n || green.size() != n || blue.size() != n)
    throw DimensionError("colour channels do not match the image dimensions");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.2989 * red[i] + 0.5870 * green[i] + 0.1140 * blue[i];
  return PixelGrid(width, height, std::move(y), precision_bits);
}

double psnr(const PixelGrid& reconstructed, const PixelGrid& original) {
  if (reconstructed.width() != original.width() || reconstructed.height() != original.height() ||
      reconstructed.precision_bits() != original.precision_bits())
    throw DimensionError("psnr: images differ in size or precision");
  const auto a = reconstructed.samples();
  const auto b = original.samples();
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    sse += e * e;
  }
  const double d = std::sqrt(sse / static_cast<double>(a.size()));
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(original.max_value() / d);
}

double sample_density(int num_points, const PixelGrid& grid) {
  return static_cast<double>(num_points) / static_cast<double>(grid.size());
}

double sample_bilinear(const PixelGrid& grid, const DomainMap& map, Point p) {
  const Rect& d = map.domain();
  constexpr double tol = 1e-12;
  if (p.x < d.x0 - tol || p.x > d.x1 + tol || p.y < d.y0 - tol || p.y > d.y1 + tol) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") is outside the image domain";
    throw ParameterError(os.str());
  }
  auto snap = [](double u, int n) {
    u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    const double r = std::round(u);
    return std::fabs(u - r) < 1e-9 ? r : u;
  };
  const double u = snap(map.col_of(p.x), grid.width());
  const double v = snap(map.row_of(p.y), grid.height());
  const int c0 = std::min(static_cast<int>(u), grid.width() - 2);
  const int r0 = std::min(static_cast<int>(v), grid.height() - 2);
  const double fu = u - c0, fv = v - r0;
  if (fu == 0.0 && fv == 0.0) return grid(r0, c0);
  const double top = (1.0 - fu) * grid(r0, c0) + fu * grid(r0, c0 + 1);
  const double bottom = (1.0 - fu) * grid(r0 + 1, c0) + fu * grid(r0 + 1, c0 + 1);
  return (1.0 - fv) * top + fv * bottom;
}

PixelGrid reconstruct(const TriMesh& mesh, const DomainMap& map, ReconstructOptions opts) {
  PixelGrid out(map.width(), map.height(), opts.precision_bits, 0.0);
  std::vector<char> hit(out.size(), 0);
  const std::vector<int> tris = mesh.active_triangles();
  const double top = out.max_value();
  const int w = map.width();
  auto samples = out.samples();

  parallel_for(static_cast<std::size_t>(map.height()), [&](std::size_t rb, std::size_t re) {
    for (int t : tris) {
      const auto& tri = mesh.triangle(t);
      const Vertex &A = mesh.vertex(tri[0]), &B = mesh.vertex(tri[1]), &C = mesh.vertex(tri[2]);
      for_each_pixel_in_triangle(
          map, A.pos, B.pos, C.pos,
          [&](int r, int c, double, double l1, double l2) {
            const std::size_t i = static_cast<std::size_t>(r) * w + c;
            if (hit[i]) return;
            hit[i] = 1;
            double v = A.value + l1 * (B.value - A.value) + l2 * (C.value - A.value);
            if (opts.clamp) v = std::clamp(v, 0.0, top);
            samples[i] = v;
          },
          static_cast<int>(rb), static_cast<int>(re));
    }
  });

  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) {
      std::ostringstream os;
      os << "pixel (" << i / w << ", " << i % w << ") is not covered by the mesh";
      throw CoverageError(os.str());
    }
  }
  return out;
}

namespace {

void skip_ws_and_comments(std::istream& in) {
  while (true) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_int(std::istream& in) {
  skip_ws_and_comments(in);
  int v = -1;
  if (!(in >> v)) throw IoError("malformed image header");
  return v;
}

}  // namespace

PixelGrid read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' && magic[1] != '6'))
    throw IoError(path + ": not a PGM/PPM file");
  const int width = read_int(in), height = read_int(in), maxval = read_int(in);
  if (width < 2 || height < 2 || maxval <= 0 || maxval > 255)
    throw IoError(path + ": unsupported dimensions or sample depth");
  const bool colour = magic[1] == '3' || magic[1] == '6';
  const bool binary = magic[1] == '5' || magic[1] == '6';
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const std::size_t channels = colour ? 3 : 1;
  std::vector<double> raw(n * channels);
  if (binary) {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> bytes(raw.size());
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw IoError(path + ": truncated");
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = bytes[i];
  } else {
    for (auto& v : raw) v = read_int(in);
  }
  const double rescale = 255.0 / maxval;
  if (maxval != 255)
    for (auto& v : raw) v *= rescale;
  if (!colour) return PixelGrid(width, height, std::move(raw), 8);
  std::vector<double> r(n), g(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = raw[3 * i];
    g[i] = raw[3 * i + 1];
    b[i] = raw[3 * i + 2];
  }
  return to_luminance(r, g, b, width, height, 8);
}

void write_pgm(const std::string& path, const PixelGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
  std::vector<unsigned char> bytes(grid.size());
  const auto s = grid.samples();
  for (std::size_t i = 0; i < s.size(); ++i)
    bytes[i] = static_cast<unsigned char>(std::clamp(std::lround(s[i]), 0L, 255L));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace meshrep
