#pragma once

// Test-side primitive for the cyclic 4-form on three-point configurations.
//
// Each pair kernel w_ab is exact away from a ray: with a unit "string"
// direction m chosen per pair, the 1-form
//   alpha(e) = (1/4pi) (1 + <e,m>/|e|) d(azimuth about -m)
// satisfies d alpha = w on R^3 minus the ray {t m : t >= 0}.  Summing
// alpha_{i,i+1} wedge w_{i+1,i+2} over the cyclic pairs gives a 3-form phi
// with d phi equal to the cyclic 4-form, valid wherever no pair difference
// x_a - x_b meets its string ray.  The caller picks the axes so the
// configurations it cares about stay clear; check_string_margin measures the
// clearance over a whole link.

#include <algorithm>
#include <array>

#include "triplink/core.hpp"
#include "triplink/curves.hpp"
#include "triplink/errors.hpp"
#include "triplink/invariants.hpp"

namespace triplink::testsupport {

// Unit string directions avoided by the pair differences x1-x2, x2-x3, x3-x1.
// The defaults suit the standard rings and their mild perturbations: those
// difference surfaces miss the +x, +y, +z rays by a margin of about 0.4.
struct StringAxes {
  Vec3 m12{1, 0, 0};
  Vec3 m23{0, 1, 0};
  Vec3 m31{0, 0, 1};
};

// alpha_m(e)(v); singular only where e lies on the ray {t m : t > 0}.
inline double string_oneform(const Vec3& e, const Vec3& m, const Vec3& v) {
  const Vec3 n{-m.x, -m.y, -m.z};  // flux axis; the string sits opposite it
  const double r = norm(e);
  if (r <= 0) throw DomainError("string_oneform: coincident points");
  const double en = dot(e, n);
  const double perp2 = dot(e, e) - en * en;
  if (perp2 <= 1e-24 * r * r) {
    if (en > 0) return 0.0;  // on the flux axis the potential vanishes
    throw DomainError("string_oneform: configuration on the string ray");
  }
  return kInv4Pi * (1.0 - en / r) * dot(cross(n, e), v) / perp2;
}

// phi = sum over cyclic (a,b,c) of alpha_{ab} wedge w_{bc}.
inline ThreeForm cyclic_phi(const StringAxes& ax = {}) {
  return [ax](const Conf3Vec& x, const Conf3Vec& v1, const Conf3Vec& v2,
              const Conf3Vec& v3) {
    const std::array<std::array<int, 3>, 3> cyc = {{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};
    const std::array<Vec3, 3> strings = {ax.m12, ax.m23, ax.m31};
    const std::array<const Conf3Vec*, 3> vs = {&v1, &v2, &v3};
    double total = 0.0;
    for (int t = 0; t < 3; ++t) {
      const int a = cyc[t][0], b = cyc[t][1], c = cyc[t][2];
      const Vec3 e = x[a] - x[b];
      double av[3];
      for (int k = 0; k < 3; ++k) av[k] = string_oneform(e, strings[t], (*vs[k])[a] - (*vs[k])[b]);
      const double b12 = green_conf_eval(x, b + 1, c + 1, *vs[1], *vs[2]);
      const double b02 = green_conf_eval(x, b + 1, c + 1, *vs[0], *vs[2]);
      const double b01 = green_conf_eval(x, b + 1, c + 1, *vs[0], *vs[1]);
      total += av[0] * b12 - av[1] * b02 + av[2] * b01;
    }
    return total;
  };
}

// distance of e from the ray {t m : t >= 0}
inline double ray_distance(const Vec3& e, const Vec3& m) {
  const double en = dot(e, m);
  if (en <= 0) return norm(e);
  return std::sqrt(std::max(0.0, dot(e, e) - en * en));
}

// Smallest string clearance over all link configurations (per-pair n x n
// parameter grids).  phi built from these axes is safe on the link when this
// is well above zero.
inline double check_string_margin(const Link3& link, const StringAxes& ax = {}, int n = 256) {
  const std::array<std::array<int, 2>, 3> pairs = {{{0, 1}, {1, 2}, {2, 0}}};
  const std::array<Vec3, 3> strings = {ax.m12, ax.m23, ax.m31};
  double margin = 1e300;
  for (int t = 0; t < 3; ++t) {
    const auto ta = link[pairs[t][0]].table(n);
    const auto tb = link[pairs[t][1]].table(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        margin = std::min(margin, ray_distance(ta.p[i] - tb.p[j], strings[t]));
  }
  return margin;
}

}  // namespace triplink::testsupport
