#pragma once

namespace meshrep {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Sign (-1, 0, +1) of the signed area of triangle (a, b, c); +1 means
/// counterclockwise. Adaptive: a floating filter first, exact expansion
/// arithmetic when the filter cannot certify the sign.
int orient2d(const Point& a, const Point& b, const Point& c);

/// +1 if d lies strictly inside the circumcircle of the counterclockwise
/// triangle (a, b, c), 0 if on it, -1 if outside. Same evaluation strategy
/// as orient2d.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

// Plain floating evaluations, for quantities that are not decisions.
inline double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

}  // namespace meshrep
