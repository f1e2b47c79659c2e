#include "meshrep/predicates.hpp"

#include <cmath>
#include <cstddef>

#include <boost/container/small_vector.hpp>

namespace meshrep {
namespace {

// Error-free transformations on IEEE doubles (round-to-nearest, no FMA
// contraction). Expansions are stored least significant component first.
constexpr double kEpsilon = 0x1p-53;
constexpr double kSplitter = 134217729.0;  // 2^27 + 1

constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;
constexpr double kIncircleBound = (10.0 + 96.0 * kEpsilon) * kEpsilon;

using Expansion = boost::container::small_vector<double, 16>;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void split(double a, double& hi, double& lo) {
  const double c = kSplitter * a;
  const double big = c - a;
  hi = c - big;
  lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  const double err1 = x - ahi * bhi;
  const double err2 = err1 - alo * bhi;
  const double err3 = err2 - ahi * blo;
  y = alo * blo - err3;
}

Expansion from_diff(double a, double b) {
  double x, y;
  two_sum(a, -b, x, y);
  return {y, x};
}

// Adds a scalar to an expansion, keeping nonzero components only.
Expansion grow(const Expansion& e, double b) {
  Expansion h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double ei : e) {
    double sum, err;
    two_sum(q, ei, sum, err);
    if (err != 0.0) h.push_back(err);
    q = sum;
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion add(const Expansion& e, const Expansion& f) {
  Expansion h = e;
  for (double fi : f) h = grow(h, fi);
  return h;
}

Expansion negate(Expansion e) {
  for (double& v : e) v = -v;
  return e;
}

Expansion scale(const Expansion& e, double b) {
  Expansion h;
  h.reserve(2 * e.size());
  double q = 0.0;
  bool first = true;
  for (double ei : e) {
    double prod, err;
    two_product(ei, b, prod, err);
    if (first) {
      if (err != 0.0) h.push_back(err);
      q = prod;
      first = false;
      continue;
    }
    double sum, e1;
    two_sum(q, err, sum, e1);
    if (e1 != 0.0) h.push_back(e1);
    double s2, e2;
    two_sum(prod, sum, s2, e2);
    if (e2 != 0.0) h.push_back(e2);
    q = s2;
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion mul(const Expansion& e, const Expansion& f) {
  Expansion acc{0.0};
  for (double fi : f) {
    if (fi == 0.0) continue;
    acc = add(acc, scale(e, fi));
  }
  return acc;
}

int sign_of(const Expansion& e) {
  for (std::size_t i = e.size(); i-- > 0;) {
    if (e[i] > 0.0) return 1;
    if (e[i] < 0.0) return -1;
  }
  return 0;
}

int orient_exact(const Point& a, const Point& b, const Point& c) {
  double acx_hi, acx_lo, bcy_hi, bcy_lo, acy_hi, acy_lo, bcx_hi, bcx_lo;
  two_sum(a.x, -c.x, acx_hi, acx_lo);
  two_sum(b.y, -c.y, bcy_hi, bcy_lo);
  two_sum(a.y, -c.y, acy_hi, acy_lo);
  two_sum(b.x, -c.x, bcx_hi, bcx_lo);
  if (acx_lo == 0.0 && bcy_lo == 0.0 && acy_lo == 0.0 && bcx_lo == 0.0) {
    // Exact differences: the determinant is a difference of two products.
    double l, l_err, r, r_err;
    two_product(acx_hi, bcy_hi, l, l_err);
    two_product(acy_hi, bcx_hi, r, r_err);
    Expansion e{l_err, l};
    e = grow(e, -r_err);
    e = grow(e, -r);
    return sign_of(e);
  }
  const Expansion acx = from_diff(a.x, c.x);
  const Expansion bcy = from_diff(b.y, c.y);
  const Expansion acy = from_diff(a.y, c.y);
  const Expansion bcx = from_diff(b.x, c.x);
  return sign_of(add(mul(acx, bcy), negate(mul(acy, bcx))));
}

int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Expansion adx = from_diff(a.x, d.x), ady = from_diff(a.y, d.y);
  const Expansion bdx = from_diff(b.x, d.x), bdy = from_diff(b.y, d.y);
  const Expansion cdx = from_diff(c.x, d.x), cdy = from_diff(c.y, d.y);

  const Expansion alift = add(mul(adx, adx), mul(ady, ady));
  const Expansion blift = add(mul(bdx, bdx), mul(bdy, bdy));
  const Expansion clift = add(mul(cdx, cdx), mul(cdy, cdy));

  const Expansion bc = add(mul(bdx, cdy), negate(mul(cdx, bdy)));
  const Expansion ca = add(mul(cdx, ady), negate(mul(adx, cdy)));
  const Expansion ab = add(mul(adx, bdy), negate(mul(bdx, ady)));

  return sign_of(add(add(mul(alift, bc), mul(blift, ca)), mul(clift, ab)));
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  const double bound = kOrientBound * (std::fabs(left) + std::fabs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient_exact(a, b, c);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return incircle_exact(a, b, c, d);
}

}  // namespace meshrep
