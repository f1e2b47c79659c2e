#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "meshrep/adapt.hpp"
#include "meshrep/edsample.hpp"
#include "meshrep/error.hpp"
#include "meshrep/gpr.hpp"
#include "meshrep/mesh_io.hpp"
#include "meshrep/raster.hpp"
#include "meshrep/synthetic.hpp"

namespace py = pybind11;
using namespace meshrep;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PixelGrid to_grid(const Array& image, int bits) {
  if (image.ndim() != 2) throw DimensionError("image must be a 2-D array");
  const auto h = static_cast<int>(image.shape(0)), w = static_cast<int>(image.shape(1));
  std::vector<double> samples(image.data(), image.data() + image.size());
  return PixelGrid(w, h, std::move(samples), bits);
}

Array to_array(const PixelGrid& grid) {
  Array out({grid.height(), grid.width()});
  std::copy(grid.samples().begin(), grid.samples().end(), out.mutable_data());
  return out;
}

TriMesh dense(TriMesh mesh) {
  mesh.compact();
  return mesh;
}

TriMesh represent(const Array& image, const std::string& method, const std::string& metric, int k,
                  double sd, std::optional<double> gamma, const std::string& patch, int bits) {
  const PixelGrid grid = to_grid(image, bits);
  if (method != "ama" && method != "ed" && method != "gprama" && method != "gpred")
    throw ParameterError("unknown method '" + method + "'");
  if (metric != "h" && metric != "iso" && metric != "aniso")
    throw ParameterError("unknown metric '" + metric + "'");
  if (patch != "cdt" && patch != "ec") throw ParameterError("unknown patch method '" + patch + "'");
  AmaOptions ama;
  ama.metric = metric == "h" ? MetricKind::H : metric == "iso" ? MetricKind::Iso : MetricKind::Aniso;
  ama.iterations = k;
  const PatchMethod pm = patch == "cdt" ? PatchMethod::CDT : PatchMethod::EC;
  py::gil_scoped_release release;
  if (method == "ama") return dense(ama_pipeline(grid, sd, ama));
  if (method == "ed") return dense(ed_mesh(grid, sd));
  if (method == "gprama") return dense(gprama(grid, sd, gamma.value_or(4.0), pm, ama));
  return dense(gpred(grid, sd, gamma.value_or(5.0), pm));
}

}  // namespace

PYBIND11_MODULE(_meshrep, m) {
  m.doc() = "Adaptive triangular mesh image representation";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<TriMesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &TriMesh::num_vertices)
      .def_property_readonly("num_triangles", &TriMesh::num_triangles)
      .def_property_readonly("points",
                             [](const TriMesh& mesh) {
                               py::array_t<double> out({mesh.vertex_slots(), 2});
                               auto r = out.mutable_unchecked<2>();
                               for (int v = 0; v < mesh.vertex_slots(); ++v) {
                                 r(v, 0) = mesh.point(v).x;
                                 r(v, 1) = mesh.point(v).y;
                               }
                               return out;
                             })
      .def_property_readonly("values",
                             [](const TriMesh& mesh) {
                               py::array_t<double> out(mesh.vertex_slots());
                               auto r = out.mutable_unchecked<1>();
                               for (int v = 0; v < mesh.vertex_slots(); ++v) r(v) = mesh.vertex(v).value;
                               return out;
                             })
      .def_property_readonly("triangles",
                             [](const TriMesh& mesh) {
                               const auto tris = mesh.active_triangles();
                               py::array_t<int> out({static_cast<py::ssize_t>(tris.size()), py::ssize_t{3}});
                               auto r = out.mutable_unchecked<2>();
                               for (std::size_t i = 0; i < tris.size(); ++i)
                                 for (int j = 0; j < 3; ++j) r(i, j) = mesh.triangle(tris[i])[j];
                               return out;
                             })
      .def("check", [](const TriMesh& mesh) { return mesh.check(); })
      .def("save", [](const TriMesh& mesh, const std::string& path) { write_mesh(path, mesh); })
      .def_static("load", [](const std::string& path) { return dense(read_mesh(path)); });

  m.def("represent", &represent, py::arg("image"), py::arg("method") = "ama",
        py::arg("metric") = "aniso", py::arg("k") = 3, py::arg("sd") = 0.03,
        py::arg("gamma") = py::none(), py::arg("patch") = "ec", py::arg("precision_bits") = 8,
        "Build a triangular mesh representation of a grayscale image (rows x cols).");

  m.def(
      "reconstruct",
      [](const TriMesh& mesh, int width, int height, bool clamp, int bits) {
        ReconstructOptions opts;
        opts.clamp = clamp;
        opts.precision_bits = bits;
        PixelGrid grid;
        {
          py::gil_scoped_release release;
          grid = reconstruct(mesh, DomainMap(width, height), opts);
        }
        return to_array(grid);
      },
      py::arg("mesh"), py::arg("width"), py::arg("height"), py::arg("clamp") = true,
      py::arg("precision_bits") = 8);

  m.def(
      "psnr",
      [](const Array& reconstructed, const Array& original, int bits) {
        return psnr(to_grid(reconstructed, bits), to_grid(original, bits));
      },
      py::arg("reconstructed"), py::arg("original"), py::arg("precision_bits") = 8);

  m.def(
      "sample_density",
      [](int n, const Array& image) { return sample_density(n, to_grid(image, 8)); }, py::arg("n"),
      py::arg("image"));

  m.def(
      "synthetic",
      [](const std::string& name, int size) { return to_array(synthetic_image(name, size, size)); },
      py::arg("name"), py::arg("size") = 512);
  m.def("synthetic_names", &synthetic_names);

  m.def(
      "read_image", [](const std::string& path) { return to_array(read_image(path)); },
      py::arg("path"));
  m.def(
      "write_pgm",
      [](const std::string& path, const Array& image, int bits) { write_pgm(path, to_grid(image, bits)); },
      py::arg("path"), py::arg("image"), py::arg("precision_bits") = 8);
}
