#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "triplink/core.hpp"

namespace triplink {

// Closed curve as a truncated Fourier series with period 2*pi.
// coeffs[axis][m + M] is the complex mode m, m in -M..M; conjugate symmetry
// (c_{-m} = conj(c_m)) makes samples real and is enforced at construction.
class ParametricCurve {
 public:
  using Coeffs = std::array<std::vector<std::complex<double>>, 3>;

  explicit ParametricCurve(Coeffs coeffs);

  // DFT fit of uniformly spaced closed-curve samples. modes < 0 selects the
  // smallest degree with relative tail energy below 1e-10 (clamped to [8,64]).
  static ParametricCurve from_samples(const std::vector<Vec3>& pts, int modes = -1);

  int modes() const { return M_; }
  const Coeffs& coeffs() const { return c_; }

  Vec3 eval(double s) const;
  Vec3 deriv(double s) const;
  void eval2(double s, Vec3& p, Vec3& d1, Vec3& d2) const;

  // traversal reversed: s -> -s (coefficient conjugation)
  ParametricCurve reversed() const;
  // affine image scale * (x - center)
  ParametricCurve rescaled(double scale, const Vec3& center) const;

  // values and first derivatives at the n uniform nodes s_j = 2*pi*j/n
  struct Table {
    std::vector<Vec3> p, d;
  };
  Table table(int n) const;

  double min_speed(int samples = 1024) const;
  double max_curvature(int samples = 2048) const;
  double length(int samples = 2048) const;
  // shortest distance between non-neighboring strands (doubly critical
  // pairs); huge value for curves with no such pair (convex planar ones
  // return the short-axis crossing distance, e.g. 2b for an ellipse)
  double self_distance(int samples = 512) const;

 private:
  int M_;
  Coeffs c_;
};

// distance between two distinct closed curves: dense grid plus Newton polish
double min_separation(const ParametricCurve& c1, const ParametricCurve& c2, int grid = 256);

// 3-component link; construction validates pairwise separation against
// eps_rel * diameter (the Green-form quadratures degrade without a gap).
struct Link3 {
  std::array<ParametricCurve, 3> comp;

  Link3(ParametricCurve c1, ParametricCurve c2, ParametricCurve c3, double eps_rel = 1e-6);

  const ParametricCurve& operator[](int i) const { return comp[i]; }
};

double link_diameter(const Link3& link);
double min_separation(const Link3& link);
double min_separation(const Link3& link, int i, int j);  // 0-based, i != j

// affine copy fitting inside the ball of the given radius about the origin
Link3 normalized_to_ball(const Link3& link, double radius = 0.95);

// deterministic low-mode Fourier perturbation with sup-norm <= amplitude on
// each component; rejects results whose separation margin is destroyed
Link3 perturb_fourier(const Link3& link, double amplitude, std::uint64_t seed);

// Standard models used by tests and the CLI.
//
// Borromean rings as three mutually perpendicular ellipses, semi-axes (a, b)
// cyclically assigned to the coordinate planes. Requires 0 < b < a and a
// separation margin of 1% of a: near-degenerate configurations (b -> a) put
// the components within quadrature-hostile distance and are rejected.
Link3 borromean_standard(double scale_a, double scale_b);

// Hopf pair: unit circle in the z=0 plane about the origin, and a unit
// circle in the xz-plane centered at (1,0,0) passing through the origin.
std::pair<ParametricCurve, ParametricCurve> hopf_standard();

// the two components of the (2,4) torus link on the torus R=2, r=0.5
std::pair<ParametricCurve, ParametricCurve> torus24_pair();

// three far-separated unit circles in mutually different planes
Link3 split_unlink_standard();

ParametricCurve circle_xy(const Vec3& center, double radius);

}  // namespace triplink
