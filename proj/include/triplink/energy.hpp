#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "triplink/invariants.hpp"
#include "triplink/tubes.hpp"

namespace triplink {

// Quadrature resolution for field-energy integrals in tube coordinates:
// trapezoid along the core (spectral for periodic integrands), Gauss-Legendre
// radially, uniform angularly.
struct EnergyQuadrature {
  int n_s = 256;
  int n_r = 24;
  int n_phi = 32;
  Exec exec = Exec::parallel;
};

// Integral of |B|^2 over one tube. The field magnitude comes from the chart
// flow form, so the integrand is profile^2 * |dx/ds|^2 / J.
double tube_energy_L2(const TubeField& field, const EnergyQuadrature& quad = {});

// Total squared-field energy of the three-tube system.
double energy_L2(const std::array<TubeField, 3>& fields, const EnergyQuadrature& quad = {});

// Pointwise kernel magnitude: sup over |x| >= r of the unit-flux Gauss form,
// (4 pi r^2)^-1. The L2 norms below evaluate it at pair separations.
double sup_kernel(double r);

// Least-squares slope of log sup_kernel against log r. The kernel law makes
// this -2 for any positive radii.
double sup_kernel_slope(const std::vector<double>& r_list);

struct NormEstimate {
  double value = 0;    // Monte-Carlo L2 norm
  double stderr_ = 0;  // propagated to the norm (delta method on the mean square)
};

struct GreenNormOptions {
  long samples_pair = 1000000;   // 6-dim pair-product integrals
  long samples_wedge = 100000;   // 9-dim triple-product integrals
  std::uint64_t seed = 7;
  Exec exec = Exec::parallel;
};

// Monte-Carlo L2 norms of the pair kernels and their wedge bounds over the
// tube products. Keys: w12, w23, w31 (pair norms over T_i x T_j) and wedge1,
// wedge2, wedge3 (norm of the two kernels meeting at tube i, over the full
// triple product). Throws SeparationError when any two tubes touch.
std::map<std::string, NormEstimate> green_l2_norms(const std::array<FluxTube, 3>& tubes,
                                                   const GreenNormOptions& opts = {});

// Smallest nonzero eigenvalue of the scalar finite-difference Neumann
// Laplacian on the voxelization of `inside` restricted to the box [lo, hi],
// by inverse iteration with the constant mode projected out. This is the
// solver the tube proxy runs on; exposed so it can be checked against
// closed-form domains. Throws DomainError when the voxelization is degenerate
// (fewer than 2 voxels, or a disconnected/empty domain).
double lambda1_neumann_box(const std::function<bool(const Vec3&)>& inside, const Vec3& lo,
                           const Vec3& hi, double voxel_h, Exec exec = Exec::parallel);

// Scalar Neumann proxy on one voxelized tube. Requires the voxel size to
// resolve the tube: at least 8 voxels across the diameter 2a.
double lambda1_neumann_proxy(const FluxTube& tube, double voxel_h, Exec exec = Exec::parallel);

// Proxy for the product domain T1 x T2 x T3: Neumann spectra of products are
// sums of factor spectra, so the first nonzero eigenvalue is the smallest
// factor eigenvalue.
double lambda1_neumann_product(const std::array<FluxTube, 3>& tubes, double voxel_h,
                               Exec exec = Exec::parallel);

// Tube-surface separation lower bound: min over pairs of (core separation
// minus the two radii).
double tube_gap(const std::array<FluxTube, 3>& tubes);

// Whole-system dilation x -> lambda x with fluxes kept fixed.
std::array<FluxTube, 3> dilate_tubes(const std::array<FluxTube, 3>& tubes, double lambda);

struct BoundOptions {
  double voxel_h = 0.02;
  GreenNormOptions norms{};
  TripleOptions certify{};         // certification of the core triple invariant
  bool scaling_audit = true;       // fit dilation exponents from lambda in {1, 2}
  long audit_samples_pair = 100000;
  long audit_samples_wedge = 20000;
  EnergyQuadrature quad{};
};

// Every ingredient of the energy lower bound, plus the assembled expression
// with the unspecified universal constant set to 1 (reported as-is, never
// asserted as an inequality certificate).
struct BoundReport {
  double E2 = 0;                   // total squared-field energy
  double r_T = 0;                  // tube-surface separation lower bound
  std::map<std::string, double> l2_norms;         // kernel norms, keys as in green_l2_norms
  std::map<std::string, double> l2_norm_stderr;   // their Monte-Carlo standard errors
  double lambda1N = 0;             // scalar proxy, min over the three tubes
  bool lambda1N_scalar_proxy = true;  // the solver acts on functions, not 1-forms
  double h123 = 0;                 // |core invariant| * flux1 * flux2 * flux3
  double bound_without_C = 0;      // (h123 * r_T^2 * sqrt(lambda1N) / sum_norms)^(3/2)
  std::map<std::string, double> scaling_exponents;  // fitted dilation powers (empty if skipped)
};

// Assemble the full report for a tube system. Propagates NonBorromeanError
// from the core certification and SeparationError from touching tubes.
BoundReport compute_bound_report(const std::array<FluxTube, 3>& tubes,
                                 const BoundOptions& opts = {});

}  // namespace triplink
