#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "triplink/core.hpp"
#include "triplink/curves.hpp"

namespace triplink {

// Vector-valued trigonometric polynomial with period 2*pi. Unlike
// ParametricCurve this carries no closed-curve regularity demands, so it can
// hold frame components (unit vectors, possibly constant).
struct TrigSeries3 {
  using Coeffs = std::array<std::vector<std::complex<double>>, 3>;

  Coeffs c{};
  int M = 0;

  // DFT fit of uniformly spaced periodic samples. modes < 0 selects the
  // smallest degree with relative tail energy below 1e-12 (clamped to
  // [4, (n-1)/2]).
  static TrigSeries3 fit(const std::vector<Vec3>& samples, int modes = -1);

  Vec3 eval(double s) const;
  Vec3 deriv(double s) const;
};

// Flux-normalized quartic bump c*(1 - (rho/a)^2)^2 with c = 3*flux/(pi a^2),
// zero for rho >= a; its integral over the radius-a disc equals flux.
double tube_profile(double rho, double a, double flux);

// Tube coordinates: parameter s along the core, disc offsets (u, v) in the
// orthonormal normal frame.
struct TubeCoords {
  double s = 0, u = 0, v = 0;
  double rho() const { return std::sqrt(u * u + v * v); }
};

// Solid tube of constant radius around a closed core curve, carrying a closed
// orthonormal normal frame. The frame starts from the rotation-minimizing
// transport of an initial normal and absorbs the transport holonomy as a
// uniform twist, then is stored as a trigonometric fit so that frame values
// and derivatives are smooth functions of s.
class FluxTube {
 public:
  // Throws ReachError unless radius < 0.98 * min(1/max curvature,
  // self-distance/2); DomainError for non-positive radius or flux.
  FluxTube(ParametricCurve core, double radius, double flux, int frame_samples = 512);

  const ParametricCurve& core() const { return core_; }
  double radius() const { return a_; }
  double flux() const { return flux_; }
  double core_length() const { return length_; }

  // right-handed orthonormal frame (t, n1, n2), n2 = t x n1
  void frame(double s, Vec3& t, Vec3& n1, Vec3& n2) const;
  // frame plus its exact s-derivatives
  void frame_jet(double s, Vec3& t, Vec3& n1, Vec3& n2, Vec3& dt, Vec3& dn1, Vec3& dn2) const;

  Vec3 point(double s, double u, double v) const;
  Vec3 point(const TubeCoords& q) const { return point(q.s, q.u, q.v); }

  // volume element of the (s, u, v) chart: speed reduced by the curvature
  // offsets, positive throughout the tube because radius < reach
  double jacobian(double s, double u, double v) const;

  // Nearest-core-point coordinates of x. Returns false when the disc radius
  // exceeds the tube radius (coords are still filled). With a hint the Newton
  // iteration starts there instead of a global scan.
  bool try_invert(const Vec3& x, TubeCoords& out) const;
  bool try_invert_near(const Vec3& x, double s_hint, TubeCoords& out) const;
  // throwing variant: OutsideTubeError when x is not in the tube
  TubeCoords invert(const Vec3& x) const;
  bool contains(const Vec3& x) const;

  // integral of the chart volume element over one period of s at fixed (u, v);
  // equals the core length at (0, 0)
  double effective_length(double u, double v, int n = 256) const;

  // period of the orbit through disc offset (u, v): effective length divided
  // by the profile speed. DomainError at or outside the boundary.
  double transit_time(double u, double v) const;
  double core_transit_time() const { return transit_time(0, 0); }

  const TrigSeries3& normal_series() const { return n1_series_; }

 private:
  ParametricCurve core_;
  double a_, flux_, length_;
  TrigSeries3 n1_series_;
};

// Steady field f(rho)/J * dx/ds in tube coordinates: orbits follow s-lines at
// constant (u, v), the continuum divergence vanishes identically, the field
// is tangent to the boundary (no radial component), and every cross-section
// disc carries flux equal to the tube's flux.
class TubeField {
 public:
  explicit TubeField(FluxTube tube) : tube_(std::move(tube)) {}

  const FluxTube& tube() const { return tube_; }

  // zero outside the tube
  Vec3 eval(const Vec3& x) const;
  Vec3 eval(const Vec3& x, double s_hint) const;
  Vec3 eval_coords(const TubeCoords& q) const;

  // flux through the s = s0 cross-section by disc quadrature of world-space
  // field values (exercises the inversion round-trip)
  double section_flux(double s0, int nr = 12, int nphi = 48) const;

 private:
  FluxTube tube_;
};

TubeField make_tube_field(const FluxTube& tube);

// five-point central-difference divergence of the field at x
double divergence_fd(const TubeField& field, const Vec3& x, double h = 0);

}  // namespace triplink
