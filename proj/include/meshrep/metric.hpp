#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "meshrep/mesh.hpp"

namespace meshrep {

/// Symmetric 2x2 tensor [[a11, a12], [a12, a22]].
struct Spd2 {
  double a11 = 1.0, a12 = 0.0, a22 = 1.0;

  double det() const { return a11 * a22 - a12 * a12; }
  double trace() const { return a11 + a22; }
  double frobenius() const;
  bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }
  /// v^T M v
  double quad(double x, double y) const { return a11 * x * x + 2.0 * a12 * x * y + a22 * y * y; }

  Spd2 operator+(const Spd2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
  Spd2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
  static Spd2 identity() { return {1.0, 0.0, 1.0}; }
  static Spd2 zero() { return {0.0, 0.0, 0.0}; }
};

/// Eigen-decomposition of a symmetric 2x2 tensor: lambda1 >= lambda2, the
/// eigenvector of lambda1 is (cos, sin) and that of lambda2 is (-sin, cos).
struct SymEigen {
  double lambda1 = 0.0, lambda2 = 0.0;
  double cos = 1.0, sin = 0.0;

  Spd2 compose() const;
};

SymEigen eigen(const Spd2& m);

/// Recovered second derivatives [[h11, h12], [h12, h22]]; may be indefinite.
using Hessian2 = Spd2;

/// Same eigenvectors, absolute eigenvalues.
Spd2 abs_spd(const Hessian2& h);

/// Floors eigenvalues at `floor` and at lambda_max / max_ratio.
Spd2 project_spd(const Spd2& m, double floor, double max_ratio = 1e6);

/// Least-squares quadratic fit through v and its 1-ring (2-ring when the
/// 1-ring has fewer than 5 vertices or is rank deficient). Coordinates are
/// domain units. Returns zero when even the 2-ring cannot determine a
/// quadratic.
Hessian2 fit_hessian(const TriMesh& mesh, int v);

/// fit_hessian for every live vertex, indexed by vertex id.
std::vector<Hessian2> recover_hessians(const TriMesh& mesh);

/// Element average of a field given by its three vertex values (exact for
/// linear fields), floored to stay positive definite.
Spd2 element_metric(std::span<const Spd2, 3> vertex_values, double floor);

enum class MetricKind { H, Iso, Aniso };

struct MetricField {
  std::vector<Spd2> element;  // indexed by triangle id; dead slots unused
  double sigma_h = 0.0;
  double alpha_h = 0.0;
  MetricKind kind = MetricKind::Aniso;
  bool fallback = false;  // true when the identity metric was substituted
};

/// Sum over live triangles of |K| sqrt(det M_K).
double metric_sigma(const TriMesh& mesh, std::span<const Spd2> element);

/// Builds a field from per-element tensors (e.g. an analytic metric).
MetricField make_field(const TriMesh& mesh, std::vector<Spd2> element);

MetricField metric_h(const TriMesh& mesh);
MetricField metric_iso(const TriMesh& mesh);
MetricField metric_aniso(const TriMesh& mesh);
MetricField compute_metric(const TriMesh& mesh, MetricKind kind);

/// Root of rho_sum(alpha) = 2 * area by bisection on log(alpha), relative
/// tolerance 1e-8. rho_sum must be decreasing. Returns nothing when the
/// bracket [1e-12, 1e12], expanded, holds no sign change.
std::optional<double> solve_alpha_h(const std::function<double(double)>& rho_sum, double area);

/// Per-element rho_K and M_K of the anisotropic metric for a given alpha.
struct AnisoElement {
  double rho = 0.0;
  Spd2 metric;
};
AnisoElement aniso_element(const Spd2& abs_hessian, double alpha);

struct ElementQuality {
  double q_eq = 1.0;
  double q_ali = 1.0;
};

/// Edge matrix of the equilateral unit-area reference element.
inline constexpr double kReferenceEdge = 1.5196713713031850;  // 2 / 3^(1/4)

/// Alignment measure 0.5 tr(A) / sqrt(det A), A = J^T M J with J the
/// Jacobian from the reference element to (a, b, c). Always >= 1.
double alignment_quality(const Point& a, const Point& b, const Point& c, const Spd2& m);

/// q_eq = N |K| sqrt(det M_K) / sigma_h and q_ali per live triangle (indexed
/// by triangle id). Throws DegeneracyError on a non-positive area.
std::vector<ElementQuality> quality(const TriMesh& mesh, const MetricField& field);

/// nt lines "a11 a12 a22" in live-triangle order.
void write_metric_field(std::ostream& out, const TriMesh& mesh, const MetricField& field);
MetricField read_metric_field(std::istream& in, const TriMesh& mesh);

}  // namespace meshrep
