#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "triplink/invariants.hpp"
#include "triplink/tubes.hpp"

namespace triplink {

// How an open orbit segment is completed to a closed loop. Both systems stay
// inside the tube, so they produce loops in the same free homotopy class and
// identical invariant contributions; they differ only in geometry.
//   radial_core_radial: straight to the core, along the shorter core arc to
//     the start section, straight back out. Length <= 2a + half core length.
//   chord_or_radial: straight chord from end to start when that chord stays
//     inside the tube, otherwise the radial system.
enum class ShortPathSystem { radial_core_radial, chord_or_radial };

struct OrbitClosure {
  Vec3 start{};
  double T = 0;                          // flow time actually integrated
  std::vector<Vec3> orbit;               // accepted integration points, starts at `start`
  std::vector<Vec3> short_path;          // closure samples from orbit end back to start
  std::optional<ParametricCurve> loop;   // smooth refit of orbit + closure; empty when T = 0
  long windings = 0;                     // net turns of the closed loop around the core
  double closure_gap = 0;                // distance bridged by the short path
  double rho_max = 0;                    // largest disc radius over orbit, path, and refit
  ShortPathSystem system = ShortPathSystem::radial_core_radial;
};

// Flow x' = B(x) from x0 for time T with adaptive fourth-order steps, then
// close the endpoints with the chosen short-path system and refit the closed
// polyline as a curve (mode count grows with loop length). h0 <= 0 picks the
// local transit time / 256. Throws DomainError unless x0 is strictly inside
// the tube, StepError when step control collapses, OutsideTubeError if the
// integration ever leaves the tube (a field/integrator bug, not a valid
// outcome).
OrbitClosure integrate_orbit(const TubeField& field, const Vec3& x0, double T, double h0 = 0,
                             ShortPathSystem system = ShortPathSystem::radial_core_radial);

struct HelicityOptions {
  std::vector<double> T_list{5, 10, 20};  // flow spans, in core-transit units per tube
  int samples = 64;
  std::uint64_t seed = 7;
  TripleOptions certify{};     // resolutions for certifying the core triple invariant
  int validate_samples = 0;    // cross-check this many samples per T by integrating,
                               // closing, and re-deriving the triple invariant directly
  ShortPathSystem system = ShortPathSystem::radial_core_radial;
};

struct HelicityPoint {
  double T = 0;
  double estimate = 0;
  double stderr_ = 0;
  long aborted_samples = 0;  // cross-check loops rejected for nonzero pairwise linking
};

struct HelicityResult {
  InvariantReport core_triple;     // certified integer invariant of the three cores
  std::array<double, 3> flux{};
  std::vector<HelicityPoint> series;
  long validation_failures = 0;    // cross-checked samples disagreeing with the estimator
};

// Third-order helicity of the three tube fields by orbit averaging: sample
// start sections with flux-weighted stratified draws, count closed-loop
// windings over each flow span, and average the per-sample triple invariant
// (certified core value times the winding product) with chart volume weights.
// Estimates converge to core invariant * flux1 * flux2 * flux3 as T grows.
// Throws SeparationError when tubes overlap and propagates NonBorromeanError
// from the core certification when cores are pairwise linked.
HelicityResult estimate_H123(const std::array<FluxTube, 3>& tubes,
                             const HelicityOptions& opts = {});

// Volume-preserving deformation of space. Construction validates the unit
// Jacobian determinant on a deterministic point cloud and rejects
// volume-distorting candidates, so every instance is safe to push tubes
// through.
class VolumeMap {
 public:
  static VolumeMap identity();
  // moved_axis += amplitude * sin(frequency * x[driver_axis]); axes 0..2, distinct
  static VolumeMap shear(int moved_axis, int driver_axis, double amplitude,
                         double frequency = 1.0);
  // arbitrary candidate; throws DomainError when the sampled determinant is not 1
  static VolumeMap from_function(std::function<Vec3(const Vec3&)> f, std::string name);

  // composition: x -> next(this(x))
  VolumeMap then(const VolumeMap& next) const;

  Vec3 operator()(const Vec3& x) const { return f_(x); }
  const std::string& name() const { return name_; }

 private:
  VolumeMap(std::function<Vec3(const Vec3&)> f, std::string name);
  std::function<Vec3(const Vec3&)> f_;
  std::string name_;
};

// Image tube under a deformation: the mapped core is refit from mapped
// samples; radius and flux are preserved. Embedding is revalidated.
FluxTube map_tube(const FluxTube& tube, const VolumeMap& map, int samples = 1024);

struct SdiffReport {
  HelicityResult before, after;
  double difference = 0;        // estimate change at the largest T
  double combined_stderr = 0;
};

// Run the estimator before and after deforming the tube system. The triple
// invariant of the mapped cores is re-certified from scratch, so agreement is
// a genuine invariance check, not a shared intermediate.
SdiffReport sdiff_invariance_test(const std::array<FluxTube, 3>& tubes, const VolumeMap& map,
                                  const HelicityOptions& opts = {});

}  // namespace triplink
