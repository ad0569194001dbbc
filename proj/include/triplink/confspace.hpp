#pragma once

// Spherical cycles in the space of three-point configurations and the
// numeric pairings that probe its topology: duality of the canonical
// cycles against the two-point kernels, degrees of the forget-one-point
// projections, an exactness check for the wedge relation among the
// kernels, and the bilinear pairing of sphere classes through the
// Whitehead bracket.

#include <array>
#include <utility>

#include "triplink/core.hpp"
#include "triplink/invariants.hpp"

namespace triplink {

// Base points shared by all standard cycles: 0, 4e, 8e along the x-axis.
// which is 1-based.
Vec3 conf_base_point(int which);

// A sphere's worth of three-point configurations, affine in the sphere
// parameter: slot s sits at base[s] + coef[s] * xi as xi runs over the
// unit sphere. Canonical cycles move exactly one slot; coordinate
// relabelings stay inside the family.
struct SphereCycle {
  std::array<Vec3, 3> base{};
  std::array<double, 3> coef{};

  Conf3Vec at(const Vec3& xi) const;
  // push-forward of a tangent vector dxi of the parameter sphere
  Conf3Vec tangent(const Vec3& dxi) const;
};

// Canonical cycle with tag (i, j), 1 <= j < i <= 3: slot i runs over the
// unit sphere centered at the j-th base point while the other slots sit
// at their own base points. All three tags keep every pair of slots at
// distance >= 1 for every parameter value.
SphereCycle unit_sphere_cycle(int i, int j);

// Relabeling of configuration coordinates: slot sigma[s-1] of the result
// carries what slot s of c carries. sigma must hold 1, 2, 3 in some
// order. Pairwise slot distances are preserved, so the image still
// avoids coincident slots.
SphereCycle permute(const SphereCycle& c, const std::array<int, 3>& sigma);

// Smallest distance between any two slots over a sampled sweep of the
// parameter sphere. Positive for every cycle built by the constructors
// above; used to spot-check that a cycle stays clear of the diagonal.
double min_slot_gap(const SphereCycle& c, int samples = 2048);

// Integral over the cycle of the pulled-back pair kernel w_{k,l}, by
// Gauss-Legendre x uniform-azimuth quadrature with SphereQuad(n). For
// the canonical cycles this realizes the duality with the kernels: the
// matrix over matching tags is the identity.
double pairing(const SphereCycle& c, int k, int l, int n, Exec exec = Exec::parallel);

// Degree of the map "forget slot k, then send the remaining ordered pair
// (first, second) to (second - first)/|second - first| on the unit
// sphere". The kernel of the surviving pair is exactly the pullback of
// the unit-sphere area form through that retraction, so the degree is
// computed as the corresponding pairing. Equals 1 for a canonical cycle
// whose tag avoids k and 0 when the tag contains k.
double proj_degree(int k, const SphereCycle& c, int n, Exec exec = Exec::parallel);

// Product of two parameter spheres mapped affinely into configurations:
// slot s sits at base[s] + coef1[s] * xi1 + coef2[s] * xi2.
struct ProductSphereCycle {
  std::array<Vec3, 3> base{};
  std::array<double, 3> coef1{};
  std::array<double, 3> coef2{};

  Conf3Vec at(const Vec3& xi1, const Vec3& xi2) const;
  Conf3Vec tangent1(const Vec3& dxi) const;
  Conf3Vec tangent2(const Vec3& dxi) const;
};

// The two built-in 4-cycles used by relation_residual. Index 0 moves
// slot 2 on the unit sphere and slot 3 on a radius-5 sphere, both about
// the first base point; index 1 moves slot 3 on a unit sphere about the
// third base point instead. Both stay clear of coincident slots.
ProductSphereCycle relation_test_cycle(int which);

// Integral over a product cycle of w_{a1,a2} ^ w_{b1,b2}, evaluated on
// the four chart tangents by the six-term shuffle; SphereQuad(n) on each
// factor.
double wedge_pair_integral(const ProductSphereCycle& c, int a1, int a2, int b1, int b2,
                           int n, Exec exec = Exec::parallel);

// Max over the two built-in 4-cycles of |integral| of
//   w21 ^ w32  -  w32 ^ w31  -  w31 ^ w21.
// The combination is exact on configurations of distinct points, so both
// integrals vanish in the continuum and the result measures quadrature
// error only.
double relation_residual(int n, Exec exec = Exec::parallel);

// Integer homotopy class of a sphere map into configurations, stored as
// degrees over the canonical cycles in tag order (2,1), (3,2), (3,1).
struct HomotopyClass {
  std::array<long, 3> deg{};
};

// Class of the canonical cycle with tag (i, j).
HomotopyClass generator_class(int i, int j);

HomotopyClass operator+(const HomotopyClass& a, const HomotopyClass& b);
HomotopyClass operator-(const HomotopyClass& a, const HomotopyClass& b);
HomotopyClass operator-(const HomotopyClass& a);
HomotopyClass operator*(long s, const HomotopyClass& a);

// Pairing of two sphere classes through the Whitehead bracket. The
// kernel integrals over each class are assembled by quadrature over the
// matching combinations of canonical cycles, then combined with the
// six-term cyclic formula
//   sum over cyclic i of  w_{i,i+1}(f1) w_{i+1,i+2}(f2)
//                       + w_{i+1,i+2}(f1) w_{i,i+1}(f2),
// which is what the bracket's potential-pairing integral reduces to on a
// product chart. Bilinear in both arguments by construction.
double whitehead_I(const HomotopyClass& c1, const HomotopyClass& c2, int n,
                   Exec exec = Exec::parallel);

// Point of the unit disk, for the explicit bracket representative below.
using DiskPoint = std::array<double, 2>;

// Based representative of the tag-(i, j) generator: a disk map that
// collapses the boundary to the standard base configuration (q1, q2, q3)
// while slot i sweeps a sphere about the j-th base point exactly once,
// oriented to carry coefficient +1. Radii interpolate so the boundary
// parks slot i at its own base point; every slot pair keeps a positive
// distance on the whole disk.
Conf3Vec based_cycle_point(int i, int j, const DiskPoint& x);

// Explicit Whitehead bracket representative of two generators: a map on
// the boundary of D^2 x D^2 (topologically the 3-sphere) that plays
// tag1's disk when the second factor sits on its boundary circle and
// tag2's disk when the first does. Provided for dumps and sampling;
// integral evaluation goes through whitehead_I. Throws DomainError when
// neither factor is on its boundary circle (tolerance 1e-9).
Conf3Vec whitehead_map_point(std::pair<int, int> tag1, std::pair<int, int> tag2,
                             const DiskPoint& x1, const DiskPoint& x2);

}  // namespace triplink
