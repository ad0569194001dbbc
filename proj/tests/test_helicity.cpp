#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "triplink/curves.hpp"
#include "triplink/errors.hpp"
#include "triplink/helicity.hpp"
#include "triplink/invariants.hpp"
#include "triplink/tubes.hpp"

using namespace triplink;

namespace {

// w-fold cover of a closed curve: dilate the parameter, t -> w t, by moving
// coefficient m to slot w*m. Traverses the same image w times.
ParametricCurve cover(const ParametricCurve& c, int w) {
  auto in = c.coeffs();
  int M = c.modes(), M2 = w * M;
  ParametricCurve::Coeffs out;
  for (int ax = 0; ax < 3; ++ax) {
    out[ax].assign(2 * M2 + 1, {0, 0});
    for (int m = -M; m <= M; ++m) out[ax][M2 + w * m] = in[ax][M + m];
  }
  return ParametricCurve(out);
}

std::array<FluxTube, 3> borromean_tubes(double a = 0.15, std::array<double, 3> flux = {1, 1, 1}) {
  Link3 b = borromean_standard(1.0, 0.5);
  return {FluxTube(b[0], a, flux[0]), FluxTube(b[1], a, flux[1]), FluxTube(b[2], a, flux[2])};
}

}  // namespace

TEST_CASE("one transit closes onto itself and keeps the pairwise invariant") {
  auto [h1, h2] = hopf_standard();
  FluxTube ct(h1, 0.2, 1.0);
  TubeField cf = make_tube_field(ct);
  double tau = ct.transit_time(0.05, 0.0);
  Vec3 x0 = ct.point(0.3, 0.05, 0.0);

  OrbitClosure oc = integrate_orbit(cf, x0, tau);
  CHECK(oc.windings == 1);
  CHECK(oc.closure_gap <= 1e-8);
  CHECK(oc.rho_max <= 0.08);
  REQUIRE(oc.loop.has_value());

  // the closed-up orbit links the probe circle exactly like the core does
  InvariantReport lk_core = mu12_gauss(h1, h2);
  InvariantReport lk_loop = mu12_gauss(*oc.loop, h2);
  CHECK(lk_core.certified);
  CHECK(lk_loop.certified);
  CHECK(lk_core.integer == -1);
  CHECK(lk_loop.integer == -1);
  CHECK(lk_loop.residual <= 1e-10);
}

TEST_CASE("zero flow span yields the degenerate closure") {
  auto [h1, h2] = hopf_standard();
  (void)h2;
  FluxTube ct(h1, 0.2, 1.0);
  TubeField cf = make_tube_field(ct);
  OrbitClosure z = integrate_orbit(cf, ct.point(0.3, 0.05, 0.0), 0.0);
  CHECK(!z.loop.has_value());
  CHECK(z.windings == 0);
  CHECK(z.closure_gap == 0.0);
}

TEST_CASE("winding counts round the fractional turn to the nearest closure") {
  auto [h1, h2] = hopf_standard();
  (void)h2;
  FluxTube ct(h1, 0.2, 1.0);
  TubeField cf = make_tube_field(ct);
  double tau = ct.transit_time(0.05, 0.0);
  Vec3 x0 = ct.point(0.3, 0.05, 0.0);

  // 3.37 turns closes back over the shorter arc: 3 windings either way
  OrbitClosure oa = integrate_orbit(cf, x0, 3.37 * tau, 0, ShortPathSystem::radial_core_radial);
  OrbitClosure ob = integrate_orbit(cf, x0, 3.37 * tau, 0, ShortPathSystem::chord_or_radial);
  CHECK(oa.windings == 3);
  CHECK(ob.windings == 3);
  CHECK(oa.rho_max <= ct.radius());
  CHECK(ob.rho_max <= ct.radius());
  CHECK(oa.short_path.size() >= 3);

  // past the half turn the short path completes the 4th circuit
  OrbitClosure oc4 = integrate_orbit(cf, x0, 3.62 * tau);
  CHECK(oc4.windings == 4);
}

TEST_CASE("long orbits stay on their invariant disc radius") {
  auto [h1, h2] = hopf_standard();
  (void)h2;
  FluxTube ct(h1, 0.2, 1.0);
  TubeField cf = make_tube_field(ct);
  double tau = ct.transit_time(0.05, 0.0);
  OrbitClosure big = integrate_orbit(cf, ct.point(0.3, 0.05, 0.0), 100 * tau);
  // orbits of this field preserve rho; drift measures integrator quality
  CHECK(std::abs(big.rho_max - 0.05) <= 1e-9);
  CHECK(big.orbit.size() > 1000);
}

TEST_CASE("orbit start must lie strictly inside the tube") {
  auto [h1, h2] = hopf_standard();
  (void)h2;
  FluxTube ct(h1, 0.2, 1.0);
  TubeField cf = make_tube_field(ct);
  CHECK_THROWS_AS(integrate_orbit(cf, ct.point(0.0, 0.2, 0.0), 1.0), DomainError);
  CHECK_THROWS_AS(integrate_orbit(cf, Vec3{9, 9, 9}, 1.0), DomainError);
}

TEST_CASE("triple invariant factors through coefficient covers") {
  Link3 b = borromean_standard(1.0, 0.5);
  InvariantReport m0 = mu123_hopf(b);
  REQUIRE(m0.certified);
  REQUIRE(m0.integer == -1);

  Link3 b2(cover(b[0], 2), b[1], b[2]);
  InvariantReport m2 = mu123_hopf(b2);
  CHECK(m2.certified);
  CHECK(m2.integer == -2);

  Link3 b22(cover(b[0], 2), cover(b[1], 2), b[2]);
  InvariantReport m22 = mu123_hopf(b22);
  CHECK(m22.certified);
  CHECK(m22.integer == -4);
}

TEST_CASE("orbit-averaged estimate converges to the unit-flux triple invariant") {
  auto tubes = borromean_tubes();
  HelicityResult r = estimate_H123(tubes);

  REQUIRE(r.series.size() == 3);
  CHECK(r.core_triple.certified);
  CHECK(r.core_triple.integer == -1);
  CHECK(r.flux[0] == 1.0);

  CHECK(std::abs(r.series[0].estimate - (-1.0658371327)) <= 1e-9);
  CHECK(std::abs(r.series[1].estimate - (-0.9781703013)) <= 1e-9);
  CHECK(std::abs(r.series[2].estimate - (-1.0087742263)) <= 1e-9);
  CHECK(std::abs(r.series[0].stderr_ - 9.426e-2) <= 5e-5);
  CHECK(std::abs(r.series[1].stderr_ - 5.506e-2) <= 5e-5);
  CHECK(std::abs(r.series[2].stderr_ - 5.963e-2) <= 5e-5);
  for (auto& p : r.series) CHECK(p.aborted_samples == 0);

  // within 10% of the true value at the largest span, and stabilizing
  CHECK(std::abs(r.series[2].estimate - (-1.0)) <= 0.10);
  double d01 = std::abs(r.series[1].estimate - r.series[0].estimate);
  double d12 = std::abs(r.series[2].estimate - r.series[1].estimate);
  CHECK(d12 < d01);

  // identical invocation reproduces every digit
  HelicityResult rr = estimate_H123(tubes);
  for (size_t i = 0; i < r.series.size(); ++i) {
    CHECK(rr.series[i].estimate == r.series[i].estimate);
    CHECK(rr.series[i].stderr_ == r.series[i].stderr_);
  }
}

TEST_CASE("estimate is exactly linear in each tube flux") {
  auto tubes = borromean_tubes();
  auto doubled = borromean_tubes(0.15, {2, 1, 1});
  HelicityResult r1 = estimate_H123(tubes);
  HelicityResult r2 = estimate_H123(doubled);
  // same seed, same draws: the winding product is flux independent, so the
  // estimate scales by exactly the flux ratio
  for (size_t i = 0; i < r1.series.size(); ++i) {
    CHECK(std::abs(r2.series[i].estimate - 2 * r1.series[i].estimate) <= 1e-12);
  }
  CHECK(std::abs(r2.series[2].estimate - (-2.0175484526)) <= 1e-9);

  // independent draws agree within the combined spread
  HelicityOptions o9;
  o9.seed = 9;
  HelicityResult r9 = estimate_H123(doubled, o9);
  CHECK(std::abs(r9.series[2].estimate - (-2.0558820048)) <= 1e-9);
  double comb = std::sqrt(r9.series[2].stderr_ * r9.series[2].stderr_ +
                          4 * r1.series[2].stderr_ * r1.series[2].stderr_);
  CHECK(std::abs(r9.series[2].estimate - 2 * r1.series[2].estimate) <= 2 * comb);
}

TEST_CASE("split components estimate exactly zero with zero spread") {
  Link3 sp = split_unlink_standard();
  std::array<FluxTube, 3> st{FluxTube(sp[0], 0.15, 1.0), FluxTube(sp[1], 0.15, 1.0),
                             FluxTube(sp[2], 0.15, 1.0)};
  HelicityResult rs = estimate_H123(st);
  CHECK(rs.core_triple.integer == 0);
  for (auto& p : rs.series) {
    CHECK(p.estimate == 0.0);
    CHECK(p.stderr_ == 0.0);
  }
}

TEST_CASE("cross-check mode re-derives sampled invariants from integrated loops") {
  auto tubes = borromean_tubes();
  HelicityOptions ov;
  ov.T_list = {2.0};
  ov.samples = 4;
  ov.validate_samples = 3;
  ov.certify.ns = {64, 128};  // integrated loops carry high-mode frame detail
  HelicityResult rv = estimate_H123(tubes, ov);
  CHECK(rv.validation_failures == 0);
  CHECK(rv.series[0].aborted_samples == 0);
}

TEST_CASE("estimator validates its inputs") {
  auto tubes = borromean_tubes();
  HelicityOptions bad;
  bad.samples = 0;
  CHECK_THROWS_AS(estimate_H123(tubes, bad), DomainError);
  bad = HelicityOptions{};
  bad.T_list = {};
  CHECK_THROWS_AS(estimate_H123(tubes, bad), DomainError);
  bad = HelicityOptions{};
  bad.T_list = {5, -1};
  CHECK_THROWS_AS(estimate_H123(tubes, bad), DomainError);
}

TEST_CASE("overlapping tubes are rejected before any sampling") {
  auto c1 = circle_xy({0, 0, 0}, 1.0);
  auto c2 = circle_xy({0.1, 0, 0}, 1.0);
  auto c3 = circle_xy({10, 0, 0}, 1.0);
  std::array<FluxTube, 3> t{FluxTube(c1, 0.2, 1.0), FluxTube(c2, 0.2, 1.0),
                            FluxTube(c3, 0.2, 1.0)};
  CHECK_THROWS_AS(estimate_H123(t), SeparationError);
}

TEST_CASE("pairwise-linked cores propagate the certification failure") {
  auto [h1, h2] = hopf_standard();
  auto c3 = circle_xy({10, 0, 0}, 1.0);
  std::array<FluxTube, 3> t{FluxTube(h1, 0.2, 1.0), FluxTube(h2, 0.2, 1.0),
                            FluxTube(c3, 0.2, 1.0)};
  CHECK_THROWS_AS(estimate_H123(t), NonBorromeanError);
}

TEST_CASE("volume map construction accepts shears and rejects distortion") {
  CHECK_NOTHROW(VolumeMap::shear(0, 2, 0.3));
  CHECK_NOTHROW(VolumeMap::shear(0, 2, 0.3).then(VolumeMap::shear(1, 0, 0.2)));
  CHECK_THROWS_AS(VolumeMap::shear(0, 0, 0.3), DomainError);
  CHECK_THROWS_AS(
      VolumeMap::from_function([](const Vec3& x) { return Vec3{1.1 * x.x, x.y, x.z}; },
                               "stretch"),
      DomainError);
  VolumeMap id = VolumeMap::identity();
  Vec3 p{0.3, -0.7, 2.0};
  CHECK(norm(id(p) - p) == 0.0);
}

TEST_CASE("mapping a tube through the identity reproduces it") {
  Link3 b = borromean_standard(1.0, 0.5);
  FluxTube t(b[0], 0.15, 1.0);
  FluxTube t2 = map_tube(t, VolumeMap::identity());
  CHECK(t2.radius() == t.radius());
  CHECK(t2.flux() == t.flux());
  CHECK(std::abs(t2.core_transit_time() - t.core_transit_time()) <= 1e-12);
  for (double s : {0.0, 1.1, 3.7}) {
    CHECK(norm(t2.point(s, 0.03, -0.02) - t.point(s, 0.03, -0.02)) <= 1e-12);
  }
  CHECK_THROWS_AS(map_tube(t, VolumeMap::identity(), 16), DomainError);
}

TEST_CASE("estimates are invariant under volume-preserving deformation") {
  auto tubes = borromean_tubes();
  HelicityOptions os;
  os.samples = 32;
  os.T_list = {5, 10};

  SdiffReport sid = sdiff_invariance_test(tubes, VolumeMap::identity(), os);
  CHECK(std::abs(sid.difference) <= 1e-12);

  SdiffReport ssh = sdiff_invariance_test(tubes, VolumeMap::shear(0, 2, 0.3), os);
  CHECK(std::abs(ssh.before.series.back().estimate - (-0.952691)) <= 1e-5);
  CHECK(std::abs(ssh.after.series.back().estimate - (-0.966078)) <= 1e-5);
  CHECK(ssh.combined_stderr > 0);
  CHECK(std::abs(ssh.difference) <= 2 * ssh.combined_stderr);
  CHECK(ssh.after.core_triple.certified);
  CHECK(ssh.after.core_triple.integer == -1);
}
