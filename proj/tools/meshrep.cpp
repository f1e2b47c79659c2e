// meshrep: represent images by adaptive triangular meshes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "meshrep/adapt.hpp"
#include "meshrep/edsample.hpp"
#include "meshrep/error.hpp"
#include "meshrep/gpr.hpp"
#include "meshrep/mesh_io.hpp"
#include "meshrep/raster.hpp"
#include "meshrep/synthetic.hpp"

using namespace meshrep;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;

// Pipeline invariant broken; reported with exit code 3.
class InvariantError : public Error {
 public:
  using Error::Error;
};

struct MethodOptions {
  std::string method = "ama";
  std::string metric = "aniso";
  int k = 3;
  double sd = 0.03;
  double gamma = 0.0;  // 0 selects the per-method default
  std::string patch = "ec";
};

MetricKind parse_metric(const std::string& s) {
  if (s == "h") return MetricKind::H;
  if (s == "iso") return MetricKind::Iso;
  return MetricKind::Aniso;
}

PatchMethod parse_patch(const std::string& s) {
  return s == "cdt" ? PatchMethod::CDT : PatchMethod::EC;
}

TriMesh build(const PixelGrid& img, const MethodOptions& o) {
  TriMesh mesh;
  if (o.method == "ama") {
    AmaOptions ama;
    ama.metric = parse_metric(o.metric);
    ama.iterations = o.k;
    mesh = ama_pipeline(img, o.sd, ama);
  } else if (o.method == "ed") {
    mesh = ed_mesh(img, o.sd);
  } else if (o.method == "gprama") {
    AmaOptions ama;
    ama.metric = parse_metric(o.metric);
    ama.iterations = o.k;
    mesh = gprama(img, o.sd, o.gamma > 0.0 ? o.gamma : 4.0, parse_patch(o.patch), ama);
  } else {
    mesh = gpred(img, o.sd, o.gamma > 0.0 ? o.gamma : 5.0, parse_patch(o.patch));
  }
  if (auto bad = mesh.check()) throw InvariantError("mesh check failed: " + *bad);
  return mesh;
}

double mesh_psnr(const TriMesh& mesh, const PixelGrid& img) {
  return psnr(reconstruct(mesh, DomainMap(img)), img);
}

std::string format_psnr(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", p);
  return buf;
}

void draw_overlay(const std::string& path, const TriMesh& mesh, const PixelGrid& img) {
  PixelGrid out = img;
  const DomainMap map(img);
  auto plot = [&](double col, double row) {
    const long c = std::lround(col), r = std::lround(row);
    if (c >= 0 && r >= 0 && c < img.width() && r < img.height()) out(r, c) = 0.0;
  };
  for (int t : mesh.active_triangles()) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) {
      const Point a = mesh.point(tri[i]), b = mesh.point(tri[(i + 1) % 3]);
      if (tri[i] > tri[(i + 1) % 3] && mesh.triangles_of_edge(tri[i], tri[(i + 1) % 3]).size() == 2)
        continue;  // interior edges once
      const double ca = map.col_of(a.x), ra = map.row_of(a.y);
      const double cb = map.col_of(b.x), rb = map.row_of(b.y);
      const int steps = static_cast<int>(std::ceil(std::max(std::abs(cb - ca), std::abs(rb - ra)))) + 1;
      for (int s = 0; s <= steps; ++s) {
        const double u = static_cast<double>(s) / steps;
        plot(ca + u * (cb - ca), ra + u * (rb - ra));
      }
    }
  }
  write_pgm(path, out);
}

void add_method_options(CLI::App* cmd, MethodOptions& o) {
  cmd->add_option("--method", o.method, "Representation method")
      ->check(CLI::IsMember({"ama", "ed", "gprama", "gpred"}))
      ->capture_default_str();
  cmd->add_option("--metric", o.metric, "Metric tensor for ama and gprama")
      ->check(CLI::IsMember({"h", "iso", "aniso"}))
      ->capture_default_str();
  cmd->add_option("--k", o.k, "Adaptation iterations")->check(CLI::Range(1, 10))->capture_default_str();
  cmd->add_option("--sd", o.sd, "Sample density (vertices per pixel)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "Oversampling factor for gprama (default 4) and gpred (default 5)")
      ->check(CLI::Range(1.0, 1e6));
  cmd->add_option("--patch", o.patch, "Patch triangulation for point removal")
      ->check(CLI::IsMember({"cdt", "ec"}))
      ->capture_default_str();
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError("bad number in list: '" + item + "'");
    }
  }
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

// Bench rows follow the two comparison tables: fixed-metric methods, or
// point-removal variants.
void run_bench(const std::vector<std::string>& images, const std::string& table,
               const std::vector<double>& percents, std::ostream& csv) {
  struct Column {
    std::string name;
    MethodOptions opts;
  };
  std::vector<Column> cols;
  auto col = [&](const std::string& name, const std::string& method, const std::string& metric, int k,
                 double gamma, const std::string& patch) {
    MethodOptions o;
    o.method = method;
    o.metric = metric;
    o.k = k;
    o.gamma = gamma;
    o.patch = patch;
    cols.push_back({name, o});
  };
  if (table == "1") {
    col("ED", "ed", "aniso", 1, 0, "ec");
    col("M_iso_3", "ama", "iso", 3, 0, "ec");
    col("M_H_1", "ama", "h", 1, 0, "ec");
    col("M_aniso_1", "ama", "aniso", 1, 0, "ec");
    col("M_H_3", "ama", "h", 3, 0, "ec");
    col("M_aniso_3", "ama", "aniso", 3, 0, "ec");
  } else {
    col("GPRED(5)-CDT", "gpred", "aniso", 3, 5, "cdt");
    col("GPRED(5)-EC", "gpred", "aniso", 3, 5, "ec");
    col("GPRAMA(2)", "gprama", "aniso", 3, 2, "ec");
    col("GPRAMA(3)", "gprama", "aniso", 3, 3, "ec");
    col("GPRAMA(4)", "gprama", "aniso", 3, 4, "ec");
  }
  csv << "image,sample_density_percent";
  for (const auto& c : cols) csv << "," << c.name;
  csv << "\n";
  for (const auto& path : images) {
    const PixelGrid img = read_image(path);
    std::string name = path.substr(path.find_last_of("/\\") + 1);
    name = name.substr(0, name.find_last_of('.'));
    for (double pct : percents) {
      csv << name << "," << pct;
      for (auto c : cols) {
        c.opts.sd = pct / 100.0;
        const auto t0 = std::chrono::steady_clock::now();
        const double p = mesh_psnr(build(img, c.opts), img);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << name << " " << pct << "% " << c.name << ": " << format_psnr(p) << " dB ("
                  << secs << " s)\n";
        csv << "," << format_psnr(p);
      }
      csv << "\n" << std::flush;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive triangular mesh image representation"};
  app.require_subcommand(1);

  MethodOptions rep;
  std::string rep_in, rep_out, overlay;
  auto* represent = app.add_subcommand("represent", "Build a mesh representation of an image");
  represent->add_option("image", rep_in, "Input PGM/PPM image")->required()->check(CLI::ExistingFile);
  represent->add_option("-o,--output", rep_out, "Output mesh file (AMAMESH 1)")->required();
  add_method_options(represent, rep);
  represent->add_option("--overlay", overlay, "Write the mesh drawn over the image as PGM");

  std::string rec_in, rec_out;
  int rec_w = 0, rec_h = 0;
  bool no_clamp = false;
  auto* recon = app.add_subcommand("reconstruct", "Rasterize a mesh by linear interpolation");
  recon->add_option("mesh", rec_in, "Input mesh file")->required()->check(CLI::ExistingFile);
  recon->add_option("-o,--output", rec_out, "Output PGM")->required();
  recon->add_option("--width", rec_w, "Output width in pixels")->required()->check(CLI::PositiveNumber);
  recon->add_option("--height", rec_h, "Output height in pixels")->required()->check(CLI::PositiveNumber);
  recon->add_flag("--no-clamp", no_clamp, "Do not clamp to the sample range");

  std::string ev_orig, ev_other, ev_mesh;
  auto* eval = app.add_subcommand("eval", "Report PSNR of a reconstruction or a mesh");
  eval->add_option("original", ev_orig, "Original image")->required()->check(CLI::ExistingFile);
  auto* ev_img = eval->add_option("reconstructed", ev_other, "Reconstructed image")->check(CLI::ExistingFile);
  auto* ev_m = eval->add_option("--mesh", ev_mesh, "Mesh file to reconstruct and evaluate")
                   ->check(CLI::ExistingFile);
  ev_img->excludes(ev_m);

  std::vector<std::string> bench_images;
  std::string table = "1", percents = "1,2,3,4,6", bench_out;
  auto* bench = app.add_subcommand("bench", "PSNR table over methods and sample densities as CSV");
  bench->add_option("images", bench_images, "Input images")->required()->check(CLI::ExistingFile);
  bench->add_option("--table", table, "1: ED and fixed metrics, 2: point removal")
      ->check(CLI::IsMember({"1", "2"}))
      ->capture_default_str();
  bench->add_option("--sd", percents, "Comma-separated sample densities in percent")
      ->capture_default_str();
  bench->add_option("-o,--output", bench_out, "CSV file (default stdout)");

  std::string synth_name, synth_out;
  int synth_size = 512;
  auto* synth = app.add_subcommand("synth", "Write a bundled synthetic test image");
  synth->add_option("name", synth_name, "edges, ridges, blobs or scene")
      ->required()
      ->check(CLI::IsMember(synthetic_names()));
  synth->add_option("-o,--output", synth_out, "Output PGM")->required();
  synth->add_option("--size", synth_size, "Width and height")->check(CLI::Range(2, 16384))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*represent) {
      const PixelGrid img = read_image(rep_in);
      const auto t0 = std::chrono::steady_clock::now();
      const TriMesh mesh = build(img, rep);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_mesh(rep_out, mesh);
      if (!overlay.empty()) draw_overlay(overlay, mesh, img);
      char sd[32];
      std::snprintf(sd, sizeof sd, "%.4f", sample_density(mesh.num_vertices(), img));
      std::cout << "vertices " << mesh.num_vertices() << "\ntriangles " << mesh.num_triangles()
                << "\nsd " << sd << "\n";
      std::cerr << "time " << secs << " s\n";
    } else if (*recon) {
      const TriMesh mesh = read_mesh(rec_in);
      ReconstructOptions ro;
      ro.clamp = !no_clamp;
      write_pgm(rec_out, reconstruct(mesh, DomainMap(rec_w, rec_h), ro));
    } else if (*eval) {
      const PixelGrid orig = read_image(ev_orig);
      if (!ev_mesh.empty()) {
        const TriMesh mesh = read_mesh(ev_mesh);
        char sd[32];
        std::snprintf(sd, sizeof sd, "%.4f", sample_density(mesh.num_vertices(), orig));
        std::cout << "psnr " << format_psnr(mesh_psnr(mesh, orig)) << "\nsd " << sd << "\nvertices "
                  << mesh.num_vertices() << "\ntriangles " << mesh.num_triangles() << "\n";
      } else if (!ev_other.empty()) {
        std::cout << "psnr " << format_psnr(psnr(read_image(ev_other), orig)) << "\n";
      } else {
        throw ParameterError("eval needs a reconstructed image or --mesh");
      }
    } else if (*bench) {
      const auto pct = parse_list(percents);
      if (bench_out.empty()) {
        run_bench(bench_images, table, pct, std::cout);
      } else {
        std::ofstream f(bench_out);
        if (!f) throw IoError("cannot write " + bench_out);
        run_bench(bench_images, table, pct, f);
      }
    } else if (*synth) {
      write_pgm(synth_out, synthetic_image(synth_name, synth_size, synth_size));
    }
  } catch (const InvariantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const TopologyError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const SurgeryError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const PartialResultError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
