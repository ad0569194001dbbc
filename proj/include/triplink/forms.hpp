#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "triplink/core.hpp"
#include "triplink/curves.hpp"

namespace triplink {

// Shared singularity floor: evaluation points of the solid-angle kernel and
// denominators of chart projections must stay at least this far from zero.
inline constexpr double kEpsSep = 1e-12;

// Solid-angle kernel: (1/4pi) <x, X, Y> / |x|^3 with <.,.,.> the scalar
// triple product. Restricted to the unit sphere it is the area form divided
// by its total mass, and omega_eval(v, dv_a, dv_b) with unnormalized v equals
// the pullback of that normalized area form under v/|v|.
// Antisymmetric in (X, Y), odd in x. Throws SingularityError for |x| below
// the floor.
double omega_eval(const Vec3& x, const Vec3& X, const Vec3& Y);

// Product quadrature on S^2: Gauss-Legendre in the polar angle, uniform
// (trapezoid = rectangle on a periodic function) in the azimuth with twice
// the node count. n < 4 is rejected.
struct SphereQuad {
  explicit SphereQuad(int n);
  int ntheta = 0, nphi = 0;
  std::vector<double> theta, wtheta;  // nodes and weights on [0, pi]
  double phi(int j) const { return kTwoPi * j / nphi; }
  double wphi() const { return kTwoPi / nphi; }
  // chart point and its coordinate tangents
  static void chart(double th, double ph, Vec3& x, Vec3& dth, Vec3& dph);
};

// Quadrature of the kernel over the unit sphere; converges to 1.
double sphere_total(int n);

// Uniform periodic grid on (S^1)^dim with spacing 2pi/n.
struct TorusGrid {
  TorusGrid(int dim_, int n_);  // dim in {2,3}; n even and >= 8
  int dim, n;
  double h() const { return kTwoPi / n; }
  long nodes() const;
};

// Grid-sampled differential form. Components are indexed by strictly
// increasing coordinate tuples in lexicographic order:
//   degree 1: (1), (2), (3)   degree 2: (12), (13), (23)   degree 3: (123)
// Each component array is row-major over node indices, (i1*n + i2)*n + i3
// in dimension 3 and i1*n + i2 in dimension 2.
class DiscreteForm {
 public:
  DiscreteForm(const TorusGrid& grid, int degree);
  const TorusGrid& grid() const { return grid_; }
  int degree() const { return degree_; }
  int components() const { return static_cast<int>(comps_.size()); }
  std::vector<double>& comp(int c) { return comps_[c]; }
  const std::vector<double>& comp(int c) const { return comps_[c]; }
  double max_abs() const;
  // debug dump: shape header plus row-major component arrays
  void dump_json(const std::string& path) const;

 private:
  TorusGrid grid_;
  int degree_;
  std::vector<std::vector<double>> comps_;
};

// First-order data of a map (S^1)^dim -> R^3 \ {0} at one grid node.
struct MapJet {
  Vec3 v{};
  std::array<Vec3, 3> dv{};  // dv[a] = dv/du_a, only grid.dim entries used
};

// Generic pullback of the solid-angle kernel composite: samples
// beta_ab = omega_eval(v, dv_a, dv_b) at every node. The callable receives
// the multi-index and coordinates of the node. Throws SingularityError
// (lowest offending node) if the map gets within the floor of the origin.
using MapJetFn =
    std::function<void(const std::array<long, 3>& idx, const std::array<double, 3>& u, MapJet&)>;
DiscreteForm pullback_2form(const TorusGrid& grid, const MapJetFn& map);

// Gauss composite on T^2 for a two-component link: v(u1,u2) = c2(u2) - c1(u1)
// (difference retraction, second point minus first). Its total integral is
// the Gauss linking integral of the pair.
DiscreteForm pullback_gauss_pair(const ParametricCurve& c1, const ParametricCurve& c2, int n,
                                 Exec exec = Exec::parallel);

// Green-form composite on T^3: v = gamma_i(u_i) - gamma_j(u_j) for component
// indices 1 <= i,j <= 3, i != j. Swapping (i,j) negates the form.
DiscreteForm pullback_green(const Link3& link, int i, int j, int n, Exec exec = Exec::parallel);

// Sphere-valued composite on T^3 through the unit-ball model of S^3: each
// component is embedded by inverse stereographic projection, the first point
// is moved to the pole by quaternion division, and the remaining two are
// projected back to R^3 and subtracted. The caller is responsible for
// normalizing the link into the unit ball first.
DiscreteForm pullback_hopf(const Link3& link, int n, Exec exec = Exec::parallel);

// Spectral exterior derivative; top-degree input is rejected. Nyquist modes
// are annihilated by differentiation, matching the potential solver.
DiscreteForm d(const DiscreteForm& form);

// Integral of a top-degree form: node sum times h^dim (trapezoid = spectral
// accuracy on the periodic grid). Deterministic pairwise summation.
double integrate_top(const DiscreteForm& form);

// Pointwise wedge product; supported degree pairs are (0,p), (p,0),
// (1,1), (1,2), (2,1) within the grid dimension.
DiscreteForm wedge(const DiscreteForm& a, const DiscreteForm& b);

}  // namespace triplink
