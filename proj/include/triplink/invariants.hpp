#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "triplink/curves.hpp"
#include "triplink/forms.hpp"

namespace triplink {

// Invariant computation with a refinement certificate. The integer is
// trustworthy only when certified is set; consumers must treat an
// uncertified report as "no answer", never round it themselves.
struct InvariantReport {
  std::string method;
  std::vector<std::pair<int, double>> values;  // (resolution, raw value), sorted by n
  double extrapolated = 0;
  long integer = 0;
  double residual = 0;     // |extrapolated - integer|
  bool monotone = false;   // |value - integer| non-increasing across resolutions
  bool certified = false;  // residual < 0.25
};

// Fill the certificate fields from `values`: Aitken extrapolation on the last
// three entries when available (guarded against vanishing differences),
// otherwise the finest value; certified when the extrapolated value sits
// within 0.25 of an integer. Requires at least two resolutions.
void certify_integer(InvariantReport& rep);

// Pairwise invariant via the surface integral of the difference composite on
// T^2, reported over several resolutions with a certificate.
InvariantReport mu12_gauss(const ParametricCurve& c1, const ParametricCurve& c2,
                           const std::vector<int>& ns = {32, 64, 128},
                           Exec exec = Exec::parallel);

// Pairwise invariant from a planar diagram: half the signed count of
// inter-component crossings in the projection along `direction`. Exact
// integer. Non-generic projections (tangencies, hidden crossings) are
// detected and retried along deterministically jittered directions; throws
// GenericityError when the retry budget runs out.
int mu12_crossings(const ParametricCurve& c1, const ParametricCurve& c2,
                   const Vec3& direction = Vec3{0.1736, 0.3640, 0.9151});

struct TripleOptions {
  std::vector<int> ns = {32, 64};
  double tol_period = 1e-4;  // gate on the pairwise linking integrals
  double ball_radius = 0.95; // normalization target before embedding
  Exec exec = Exec::parallel;
};

// Triple linking invariant through the sphere-map route: normalize into the
// unit ball, embed in S^3, form the two-point difference map, pull the
// kernel back to T^3, solve for a potential and integrate. The value is
// (1/2) * integral of beta wedge eta with this codebase's orientation
// conventions; the sign is consistent across all methods here but only its
// magnitude is pinned externally. Throws NonBorromeanError when any pairwise
// period exceeds tol_period.
InvariantReport mu123_hopf(const Link3& link, const TripleOptions& opts = {});

// A configuration of three points, or a tangent vector to the space of such
// configurations (one 3-vector per point).
using Conf3Vec = std::array<Vec3, 3>;

// Caller-supplied 3-form on three-point configurations, evaluated at x on
// three tangents. Must satisfy the differential identity checked by
// mu123_keylemma below.
using ThreeForm =
    std::function<double(const Conf3Vec& x, const Conf3Vec& v1, const Conf3Vec& v2,
                         const Conf3Vec& v3)>;

// Pair kernel as a 2-form on configurations: the solid-angle kernel at
// x_i - x_j applied to (u_i - u_j, v_i - v_j). Indices are 1-based and must
// differ; swapping them negates the value.
double green_conf_eval(const Conf3Vec& x, int i, int j, const Conf3Vec& u, const Conf3Vec& v);

// The cyclic 4-form: sum over i of w_{i,i+1} wedge w_{i+1,i+2} (indices mod
// 3), evaluated on four tangents by the six-term shuffle expansion.
double omega4_eval(const Conf3Vec& x, const Conf3Vec& w0, const Conf3Vec& w1,
                   const Conf3Vec& w2, const Conf3Vec& w3);

// Triple linking invariant through the potential route on T^3:
//   sum over cyclic pairs of  int F*w_{i,i+1} wedge eta_{i+1,i+2}
//   minus  int F*phi,
// where d eta_{i,j} = F*w_{i,j}. phi must satisfy d phi = omega4 (the cyclic
// 4-form); this is spot-checked at random configurations with a central
// finite-difference exterior derivative (relative tolerance 1e-4) and the
// call throws PhiInconsistentError instead of returning a value when the
// check fails.
//
// The value equals the triple invariant only when phi is a primitive on all
// of configuration space.  The spot check cannot see globality: a phi built
// from per-pair potentials (alpha_{i,i+1} wedge w_{i+1,i+2} with d alpha = w
// on a neighborhood of the link) passes it, yet its pullback is itself a sum
// of potential pairings, so the two terms cancel exactly and the integral
// returns 0 for every input.  No global primitive in closed form is known;
// none ships here.  The evaluator is still the faithful formula, and the
// overall orientation conventions match mu123_hopf.
InvariantReport mu123_keylemma(const Link3& link, const ThreeForm& phi,
                               const TripleOptions& opts = {});

}  // namespace triplink
