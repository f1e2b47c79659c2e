#include "meshrep/metric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "meshrep/error.hpp"
#include "meshrep/parallel.hpp"

namespace meshrep {

double Spd2::frobenius() const { return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22); }

Spd2 SymEigen::compose() const {
  const double cc = cos * cos, ss = sin * sin, cs = cos * sin;
  return {lambda1 * cc + lambda2 * ss, (lambda1 - lambda2) * cs, lambda1 * ss + lambda2 * cc};
}

SymEigen eigen(const Spd2& m) {
  const double mean = 0.5 * (m.a11 + m.a22);
  const double half = 0.5 * (m.a11 - m.a22);
  const double r = std::hypot(half, m.a12);
  const double theta = 0.5 * std::atan2(m.a12, half);
  return {mean + r, mean - r, std::cos(theta), std::sin(theta)};
}

Spd2 abs_spd(const Hessian2& h) {
  SymEigen e = eigen(h);
  e.lambda1 = std::fabs(e.lambda1);
  e.lambda2 = std::fabs(e.lambda2);
  return e.compose();
}

Spd2 project_spd(const Spd2& m, double floor, double max_ratio) {
  SymEigen e = eigen(m);
  const double top = std::max({e.lambda1, e.lambda2, floor});
  const double low = std::max(floor, top / max_ratio);
  if (e.lambda1 >= low && e.lambda2 >= low) return m;
  e.lambda1 = std::max(e.lambda1, low);
  e.lambda2 = std::max(e.lambda2, low);
  return e.compose();
}

namespace {

std::optional<Hessian2> fit_quadratic(const TriMesh& mesh, int v, const std::vector<int>& stencil) {
  const int m = static_cast<int>(stencil.size()) + 1;
  if (m < 6) return std::nullopt;
  const Point c = mesh.point(v);
  double h = 0.0;
  for (int w : stencil) {
    const Point p = mesh.point(w);
    h = std::max({h, std::fabs(p.x - c.x), std::fabs(p.y - c.y)});
  }
  if (h == 0.0) return std::nullopt;

  Eigen::Matrix<double, Eigen::Dynamic, 6> A(m, 6);
  Eigen::VectorXd b(m);
  auto row = [&](int i, int w) {
    const Point p = mesh.point(w);
    const double u = (p.x - c.x) / h, s = (p.y - c.y) / h;
    A.row(i) << 1.0, u, s, u * u, u * s, s * s;
    b(i) = mesh.vertex(w).value - mesh.vertex(v).value;
  };
  row(0, v);
  for (int i = 0; i < m - 1; ++i) row(i + 1, stencil[i]);

  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, Eigen::Dynamic, 6>> qr(A);
  qr.setThreshold(1e-9);
  if (qr.rank() < 6) return std::nullopt;
  Eigen::Matrix<double, 6, 1> coef = qr.solve(b);
  // Curvature at round-off level of the local variation is noise.
  const double noise = 1e-10 * b.cwiseAbs().maxCoeff();
  for (int k = 3; k < 6; ++k)
    if (std::fabs(coef(k)) <= noise) coef(k) = 0.0;
  const double inv = 1.0 / (h * h);
  return Hessian2{2.0 * coef(3) * inv, coef(4) * inv, 2.0 * coef(5) * inv};
}

}  // namespace

Hessian2 fit_hessian(const TriMesh& mesh, int v) {
  const std::vector<int> ring = mesh.neighbors(v);
  if (ring.size() >= 5)
    if (auto h = fit_quadratic(mesh, v, ring)) return *h;

  std::vector<int> ring2 = ring;
  for (int w : ring)
    for (int u : mesh.neighbors(w))
      if (u != v) ring2.push_back(u);
  std::sort(ring2.begin(), ring2.end());
  ring2.erase(std::unique(ring2.begin(), ring2.end()), ring2.end());
  if (auto h = fit_quadratic(mesh, v, ring2)) return *h;
  return Hessian2::zero();
}

std::vector<Hessian2> recover_hessians(const TriMesh& mesh) {
  std::vector<Hessian2> out(mesh.vertex_slots(), Hessian2::zero());
  parallel_for(out.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v)
      if (mesh.vertex_alive(static_cast<int>(v)) && !mesh.triangles_of(static_cast<int>(v)).empty())
        out[v] = fit_hessian(mesh, static_cast<int>(v));
  });
  return out;
}

Spd2 element_metric(std::span<const Spd2, 3> vertex_values, double floor) {
  const Spd2 mean = (vertex_values[0] + vertex_values[1] + vertex_values[2]) * (1.0 / 3.0);
  return project_spd(mean, floor);
}

double metric_sigma(const TriMesh& mesh, std::span<const Spd2> element) {
  double sigma = 0.0;
  for (int t = 0; t < mesh.triangle_slots(); ++t)
    if (mesh.triangle_alive(t)) sigma += mesh.triangle_area(t) * std::sqrt(element[t].det());
  return sigma;
}

MetricField make_field(const TriMesh& mesh, std::vector<Spd2> element) {
  if (static_cast<int>(element.size()) != mesh.triangle_slots())
    throw DimensionError("metric field does not match the mesh");
  MetricField f;
  f.element = std::move(element);
  f.sigma_h = metric_sigma(mesh, f.element);
  return f;
}

namespace {

// Mean of the three vertex Hessians of every live triangle.
std::vector<Hessian2> element_hessians(const TriMesh& mesh) {
  const std::vector<Hessian2> hv = recover_hessians(mesh);
  std::vector<Hessian2> hk(mesh.triangle_slots(), Hessian2::zero());
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    const auto& tri = mesh.triangle(t);
    hk[t] = (hv[tri[0]] + hv[tri[1]] + hv[tri[2]]) * (1.0 / 3.0);
  }
  return hk;
}

MetricField identity_field(const TriMesh& mesh, MetricKind kind) {
  MetricField f = make_field(mesh, std::vector<Spd2>(mesh.triangle_slots(), Spd2::identity()));
  f.kind = kind;
  f.fallback = true;
  return f;
}

// Eigenvalue floor shared by every tensor of one field.
double field_floor(const std::vector<Spd2>& tensors, const TriMesh& mesh) {
  double top = 1.0;
  for (int t = 0; t < mesh.triangle_slots(); ++t)
    if (mesh.triangle_alive(t)) top = std::max(top, eigen(tensors[t]).lambda1);
  return 1e-8 * top;
}

MetricField finish(const TriMesh& mesh, std::vector<Spd2> tensors, MetricKind kind, double alpha) {
  const double floor = field_floor(tensors, mesh);
  for (int t = 0; t < mesh.triangle_slots(); ++t)
    if (mesh.triangle_alive(t)) tensors[t] = project_spd(tensors[t], floor);
  MetricField f = make_field(mesh, std::move(tensors));
  f.kind = kind;
  f.alpha_h = alpha;
  return f;
}

}  // namespace

MetricField metric_h(const TriMesh& mesh) {
  std::vector<Spd2> m = element_hessians(mesh);
  for (auto& x : m) x = abs_spd(x);
  return finish(mesh, std::move(m), MetricKind::H, 0.0);
}

MetricField metric_iso(const TriMesh& mesh) {
  const std::vector<Hessian2> hk = element_hessians(mesh);
  double omega = 0.0, weighted = 0.0;
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    const double area = mesh.triangle_area(t);
    omega += area;
    weighted += area * hk[t].frobenius();
  }
  const double alpha = weighted / omega;
  if (!(alpha > 0.0)) return identity_field(mesh, MetricKind::Iso);

  std::vector<Spd2> m(mesh.triangle_slots(), Spd2::identity());
  for (int t = 0; t < mesh.triangle_slots(); ++t)
    if (mesh.triangle_alive(t)) m[t] = Spd2::identity() * (1.0 + hk[t].frobenius() / alpha);
  return finish(mesh, std::move(m), MetricKind::Iso, alpha);
}

AnisoElement aniso_element(const Spd2& abs_hessian, double alpha) {
  const SymEigen e = eigen(abs_hessian);
  const double l1 = 1.0 + std::max(e.lambda1, 0.0) / alpha;
  const double l2 = 1.0 + std::max(e.lambda2, 0.0) / alpha;
  const double det = l1 * l2;
  const double frob = std::sqrt(l1 * l1 + l2 * l2);
  const double rho = std::sqrt(frob) * std::pow(det, 0.25);
  SymEigen b = e;
  b.lambda1 = l1 * rho / std::sqrt(det);
  b.lambda2 = l2 * rho / std::sqrt(det);
  return {rho, b.compose()};
}

std::optional<double> solve_alpha_h(const std::function<double(double)>& rho_sum, double area) {
  const double target = 2.0 * area;
  auto g = [&](double a) { return rho_sum(a) - target; };
  double lo = 1e-12, hi = 1e12;
  for (int i = 0; i < 20 && g(lo) <= 0.0; ++i) lo *= 1e-12;
  for (int i = 0; i < 20 && g(hi) > 0.0; ++i) hi *= 1e12;
  if (!(g(lo) > 0.0) || !(g(hi) <= 0.0)) return std::nullopt;

  for (int it = 0; it < 200 && hi - lo > 1e-8 * hi; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo) * std::sqrt(hi);
}

MetricField metric_aniso(const TriMesh& mesh) {
  std::vector<Spd2> hk = element_hessians(mesh);
  for (auto& x : hk) x = abs_spd(x);
  std::vector<int> live;
  std::vector<double> area;
  double omega = 0.0;
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    live.push_back(t);
    area.push_back(mesh.triangle_area(t));
    omega += area.back();
  }
  auto rho_sum = [&](double alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < live.size(); ++i) s += aniso_element(hk[live[i]], alpha).rho * area[i];
    return s;
  };
  const auto alpha = solve_alpha_h(rho_sum, omega);
  if (!alpha) return identity_field(mesh, MetricKind::Aniso);

  std::vector<Spd2> m(mesh.triangle_slots(), Spd2::identity());
  for (int t : live) m[t] = aniso_element(hk[t], *alpha).metric;
  return finish(mesh, std::move(m), MetricKind::Aniso, *alpha);
}

MetricField compute_metric(const TriMesh& mesh, MetricKind kind) {
  switch (kind) {
    case MetricKind::H:
      return metric_h(mesh);
    case MetricKind::Iso:
      return metric_iso(mesh);
    case MetricKind::Aniso:
      break;
  }
  return metric_aniso(mesh);
}

double alignment_quality(const Point& a, const Point& b, const Point& c, const Spd2& m) {
  // J = E * Ehat^-1, Ehat = [[s, s/2], [0, s*sqrt(3)/2]], s = reference edge.
  const double s = kReferenceEdge;
  const double e11 = b.x - a.x, e12 = c.x - a.x, e21 = b.y - a.y, e22 = c.y - a.y;
  const double i11 = 1.0 / s, i12 = -1.0 / (s * std::sqrt(3.0)), i22 = 2.0 / (s * std::sqrt(3.0));
  const double j11 = e11 * i11, j12 = e11 * i12 + e12 * i22;
  const double j21 = e21 * i11, j22 = e21 * i12 + e22 * i22;
  // A = J^T M J
  const double mj11 = m.a11 * j11 + m.a12 * j21, mj12 = m.a11 * j12 + m.a12 * j22;
  const double mj21 = m.a12 * j11 + m.a22 * j21, mj22 = m.a12 * j12 + m.a22 * j22;
  const double a11 = j11 * mj11 + j21 * mj21;
  const double a22 = j12 * mj12 + j22 * mj22;
  const double a12 = j11 * mj12 + j21 * mj22;
  const double det = a11 * a22 - a12 * a12;
  if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
  return 0.5 * (a11 + a22) / std::sqrt(det);
}

std::vector<ElementQuality> quality(const TriMesh& mesh, const MetricField& field) {
  if (static_cast<int>(field.element.size()) != mesh.triangle_slots())
    throw DimensionError("metric field does not match the mesh");
  const double n = mesh.num_triangles();
  std::vector<ElementQuality> out(mesh.triangle_slots());
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw DegeneracyError("quality: triangle " + std::to_string(t) + " is degenerate");
    const auto& tri = mesh.triangle(t);
    const Spd2& m = field.element[t];
    out[t].q_eq = n * area * std::sqrt(m.det()) / field.sigma_h;
    out[t].q_ali = alignment_quality(mesh.point(tri[0]), mesh.point(tri[1]), mesh.point(tri[2]), m);
  }
  return out;
}

void write_metric_field(std::ostream& out, const TriMesh& mesh, const MetricField& field) {
  char buf[96];
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    const Spd2& m = field.element[t];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", m.a11, m.a12, m.a22);
    out << buf;
  }
}

MetricField read_metric_field(std::istream& in, const TriMesh& mesh) {
  std::vector<Spd2> element(mesh.triangle_slots(), Spd2::identity());
  for (int t = 0; t < mesh.triangle_slots(); ++t) {
    if (!mesh.triangle_alive(t)) continue;
    Spd2& m = element[t];
    if (!(in >> m.a11 >> m.a12 >> m.a22)) throw IoError("truncated metric field");
    if (!m.positive_definite()) throw ParameterError("metric field entry is not positive definite");
  }
  return make_field(mesh, std::move(element));
}

}  // namespace meshrep
