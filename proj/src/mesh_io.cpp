#include "meshrep/mesh_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "meshrep/error.hpp"

namespace meshrep {

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  std::vector<int> remap(mesh.vertex_slots(), -1);
  int nv = 0;
  for (int v = 0; v < mesh.vertex_slots(); ++v)
    if (mesh.vertex_alive(v)) remap[v] = nv++;
  out << "AMAMESH 1\n" << nv << ' ' << mesh.num_triangles() << '\n';
  char buf[128];
  for (int v = 0; v < mesh.vertex_slots(); ++v) {
    if (!mesh.vertex_alive(v)) continue;
    const Vertex& vx = mesh.vertex(v);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %d\n", vx.pos.x, vx.pos.y, vx.value,
                  vx.boundary ? 1 : 0);
    out << buf;
  }
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    const auto& tri = mesh.triangle(t);
    out << remap[tri[0]] << ' ' << remap[tri[1]] << ' ' << remap[tri[2]] << '\n';
  }
}

void write_mesh(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_mesh(out, mesh);
  if (!out) throw IoError("failed writing " + path);
}

TriMesh read_mesh(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "AMAMESH" || version != 1)
    throw IoError("not an AMAMESH 1 file");
  long nv = -1, nt = -1;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1) throw IoError("bad AMAMESH counts");

  std::vector<Vertex> verts(nv);
  for (auto& v : verts) {
    std::string xs, ys, vs;
    int b = 0;
    if (!(in >> xs >> ys >> vs >> b)) throw IoError("truncated AMAMESH vertex list");
    auto parse = [](const std::string& s) {
      double d = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), d);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw IoError("bad real '" + s + "' in AMAMESH file");
      return d;
    };
    v.pos = {parse(xs), parse(ys)};
    v.value = parse(vs);
    v.boundary = b != 0;
  }
  Rect box{verts[0].pos.x, verts[0].pos.y, verts[0].pos.x, verts[0].pos.y};
  for (const auto& v : verts) {
    box.x0 = std::min(box.x0, v.pos.x);
    box.y0 = std::min(box.y0, v.pos.y);
    box.x1 = std::max(box.x1, v.pos.x);
    box.y1 = std::max(box.y1, v.pos.y);
  }
  TriMesh mesh(box);
  for (const auto& v : verts) mesh.add_vertex(v.pos, v.value, v.boundary);
  for (long t = 0; t < nt; ++t) {
    long a, b, c;
    if (!(in >> a >> b >> c)) throw IoError("truncated AMAMESH triangle list");
    if (a < 0 || b < 0 || c < 0 || a >= nv || b >= nv || c >= nv)
      throw IoError("AMAMESH triangle index out of range");
    mesh.add_triangle(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c));
  }
  return mesh;
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_mesh(in);
}

}  // namespace meshrep
