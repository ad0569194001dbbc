#pragma once

// Borromean rings whose first component carries a small loop ("kink") at its
// bottom apex:
//
//   x(t) = sin t - dx sin 2t
//   y(t) = -cy - 0.5 cos t - cy cos 2t
//   z(t) = zsign * h sin t
//
// For dx > 1/2 the xy-projection has exactly one double point, at
// t = +-acos(1/(2 dx)), and the z-lift separates the strands there by
// 2 h sin(acos(1/(2 dx))). Shrinking (dx, cy) to zero with z fixed keeps the
// curve embedded and at least 0.21 away from the other two components all the
// way down to the plain ellipse, so either variant is isotopic to the
// standard rings; flipping zsign passes the strand through itself exactly
// once, at the double point. The two variants therefore bound a one-parameter
// family whose only degeneracy is a single self-crossing of component 1.

#include <complex>

#include "triplink/curves.hpp"

namespace triplink::testsupport {

inline ParametricCurve kinked_ring(double zsign, double dx = 0.55, double cy = 0.1,
                                   double h = 0.12) {
  const int M = 2;
  ParametricCurve::Coeffs co;
  for (auto& v : co) v.assign(2 * M + 1, {0, 0});
  auto at = [&](int axis, int m) -> std::complex<double>& { return co[axis][m + M]; };
  at(0, 1) = {0, -0.5};
  at(0, -1) = {0, 0.5};
  at(0, 2) = {0, 0.5 * dx};
  at(0, -2) = {0, -0.5 * dx};
  at(1, 0) = -cy;
  at(1, 1) = at(1, -1) = -0.25;
  at(1, 2) = at(1, -2) = -0.5 * cy;
  at(2, 1) = {0, -0.5 * h * zsign};
  at(2, -1) = {0, 0.5 * h * zsign};
  return ParametricCurve(co);
}

inline Link3 kinked_borromean(double zsign) {
  Link3 b = borromean_standard(1.0, 0.5);
  return Link3(kinked_ring(zsign), b[1], b[2]);
}

}  // namespace triplink::testsupport
