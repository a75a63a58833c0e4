#pragma once

#include "sausage/types.hpp"

namespace sausage {

// Sign of the orientation determinant: +1 if a, b, c turn counter-clockwise,
// -1 if clockwise, 0 if collinear. Exact for all finite doubles.
int orient2d(const Point& a, const Point& b, const Point& c);

// The orientation determinant itself, (a - c) x (b - c), to a few ulps even when
// the points are nearly collinear.
double orient2d_value(const Point& a, const Point& b, const Point& c);

// +1 if d lies strictly inside the circle through a, b, c (given counter-clockwise),
// -1 if strictly outside, 0 if cocircular. Exact for all finite doubles.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

// Slow paths, exposed for tests.
int orient2d_exact(const Point& a, const Point& b, const Point& c);
int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d);

}  // namespace sausage
