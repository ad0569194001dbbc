#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "triplink/core.hpp"
#include "triplink/curves.hpp"
#include "triplink/errors.hpp"
#include "triplink/tubes.hpp"

using namespace triplink;

namespace {

// 16-point Gauss-Legendre on [0, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    0.0052995325041750, 0.0277124884633837, 0.0671843988060841, 0.1222977958224985,
    0.1910618777986781, 0.2709916111713863, 0.3591982246103705, 0.4524937450811813,
    0.5475062549188187, 0.6408017753896295, 0.7290083888286137, 0.8089381222013219,
    0.8777022041775015, 0.9328156011939159, 0.9722875115366163, 0.9947004674958250};
constexpr double kGLw[kGL] = {
    0.0135762297058770, 0.0311267619693239, 0.0475792558412464, 0.0623144856277669,
    0.0747979944082884, 0.0845782596975013, 0.0913017075224618, 0.0947253052275343,
    0.0947253052275343, 0.0913017075224618, 0.0845782596975013, 0.0747979944082884,
    0.0623144856277669, 0.0475792558412464, 0.0311267619693239, 0.0135762297058770};

FluxTube hopf_circle_tube(double a = 0.2, double flux = 1.0) {
  auto [h1, h2] = hopf_standard();
  (void)h2;
  return FluxTube(h1, a, flux);
}

}  // namespace

TEST_CASE("trig series fit reproduces a band-limited curve and its derivative") {
  std::vector<Vec3> samples;
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    double s = kTwoPi * i / n;
    samples.push_back({std::cos(2 * s) + 0.3, std::sin(3 * s), 0.5 * std::cos(s)});
  }
  auto f = TrigSeries3::fit(samples);
  CHECK(f.M >= 3);
  for (double s : {0.0, 0.37, 2.1, 5.9}) {
    Vec3 v = f.eval(s);
    CHECK(std::abs(v.x - (std::cos(2 * s) + 0.3)) <= 1e-12);
    CHECK(std::abs(v.y - std::sin(3 * s)) <= 1e-12);
    CHECK(std::abs(v.z - 0.5 * std::cos(s)) <= 1e-12);
    Vec3 d = f.deriv(s);
    CHECK(std::abs(d.x + 2 * std::sin(2 * s)) <= 1e-11);
    CHECK(std::abs(d.y - 3 * std::cos(3 * s)) <= 1e-11);
    CHECK(std::abs(d.z + 0.5 * std::sin(s)) <= 1e-11);
  }
}

TEST_CASE("trig series fit handles constant samples at minimal mode count") {
  std::vector<Vec3> samples(32, Vec3{1.5, -2.0, 0.25});
  auto f = TrigSeries3::fit(samples);
  CHECK(f.M == 4);  // fit never goes below its mode floor
  Vec3 v = f.eval(1.234);
  CHECK(std::abs(v.x - 1.5) <= 1e-14);
  CHECK(std::abs(v.y + 2.0) <= 1e-14);
  CHECK(std::abs(v.z - 0.25) <= 1e-14);
  CHECK(norm(f.deriv(0.5)) <= 1e-12);
}

TEST_CASE("trig series fit rejects too few samples") {
  std::vector<Vec3> tiny(8, Vec3{0, 0, 0});
  CHECK_THROWS_AS(TrigSeries3::fit(tiny), DomainError);
}

TEST_CASE("tube profile is normalized to unit disc flux and vanishes smoothly") {
  const double a = 0.15, flux = 0.7;
  CHECK(std::abs(tube_profile(0, a, flux) - 3 * flux / (kPi * a * a)) <= 1e-14);
  CHECK(tube_profile(a, a, flux) == 0.0);
  CHECK(tube_profile(1.5 * a, a, flux) == 0.0);
  // d/drho at the wall also vanishes: (1 - t^2)^2 has a double root at t = 1
  double h = 1e-6;
  CHECK(std::abs(tube_profile(a - h, a, flux)) <= 1e-8);

  // integral of f over the cross-section disc equals the flux
  double total = 0;
  for (int i = 0; i < kGL; ++i) {
    double rho = a * kGLx[i];
    total += kGLw[i] * a * tube_profile(rho, a, flux) * kTwoPi * rho;
  }
  CHECK(std::abs(total - flux) <= 1e-12 * flux);
}

TEST_CASE("tube construction rejects bad parameters and radii beyond the reach") {
  auto link = borromean_standard(1.0, 0.5);
  CHECK_THROWS_AS(FluxTube(link[0], -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(FluxTube(link[0], 0.15, -1.0), DomainError);
  // zero flux is a valid (static) tube, but it has no transit
  FluxTube still(link[0], 0.15, 0.0);
  CHECK_THROWS_AS(still.core_transit_time(), DomainError);
  CHECK_THROWS_AS(FluxTube(link[0], 0.15, 1.0, 8), DomainError);
  // component reach: min(1/max_curvature, self_distance/2) = min(1/4, 1/2)
  CHECK_THROWS_AS(FluxTube(link[0], 0.25, 1.0), ReachError);
  CHECK_NOTHROW(FluxTube(link[0], 0.24, 1.0));
  // unit circle: reach = min(1, 1) = 1
  auto circ = circle_xy({0, 0, 0}, 1.0);
  CHECK_THROWS_AS(FluxTube(circ, 0.99, 1.0), ReachError);
  CHECK_NOTHROW(FluxTube(circ, 0.9, 1.0));
}

TEST_CASE("circle tube frame is the radial/vertical frame with no twist") {
  auto t = hopf_circle_tube();
  for (double s : {0.0, 0.9, 2.5, 4.4, 6.1}) {
    Vec3 tv, n1, n2;
    t.frame(s, tv, n1, n2);
    Vec3 radial{std::cos(s), std::sin(s), 0};
    CHECK(norm(n1 - radial) <= 1e-12);
    CHECK(norm(n2 - Vec3{0, 0, -1}) <= 1e-12);
    CHECK(std::abs(dot(tv, n1)) <= 1e-15);
    CHECK(std::abs(dot(tv, n2)) <= 1e-15);
    CHECK(std::abs(norm(n1) - 1) <= 1e-15);
  }
}

TEST_CASE("frame jet matches finite differences of the frame") {
  auto link = borromean_standard(1.0, 0.5);
  FluxTube t(link[1], 0.15, 1.0);
  const double h = 1e-6;
  for (double s : {0.3, 1.7, 3.9}) {
    Vec3 tv, n1, n2, dt, dn1, dn2;
    t.frame_jet(s, tv, n1, n2, dt, dn1, dn2);
    Vec3 tp, n1p, n2p, tm, n1m, n2m;
    t.frame(s + h, tp, n1p, n2p);
    t.frame(s - h, tm, n1m, n2m);
    CHECK(norm(dt - (0.5 / h) * (tp - tm)) <= 1e-7);
    CHECK(norm(dn1 - (0.5 / h) * (n1p - n1m)) <= 1e-7);
    CHECK(norm(dn2 - (0.5 / h) * (n2p - n2m)) <= 1e-7);
  }
}

TEST_CASE("circle tube closed forms: volume factor, effective length, transit times") {
  auto t = hopf_circle_tube();
  // chart volume factor for a circle is 1 + u
  CHECK(std::abs(t.jacobian(0.7, 0.08, -0.05) - 1.08) <= 1e-12);
  CHECK(std::abs(t.jacobian(3.0, -0.1, 0.13) - 0.9) <= 1e-12);
  // effective length only sees the u offset
  for (double u : {-0.1, 0.0, 0.05, 0.15}) {
    CHECK(std::abs(t.effective_length(u, 0.07) - kTwoPi * (1 + u)) <= 1e-12);
  }
  // frozen transit times at radius 0.2, unit flux
  CHECK(std::abs(t.core_transit_time() - 0.263189450695716) <= 1e-12);
  CHECK(std::abs(t.transit_time(0.1, 0.05) - 0.612513630710030) <= 1e-12);
  CHECK_THROWS_AS(t.transit_time(0.2, 0.0), DomainError);
}

TEST_CASE("coordinate inversion round-trips and flags outside points") {
  auto link = borromean_standard(1.0, 0.5);
  FluxTube t(link[0], 0.15, 1.0);
  double worst = 0;
  for (int i = 0; i < 40; ++i) {
    double s = kTwoPi * (i + 0.31) / 40;
    double rho = 0.95 * t.radius() * ((i % 7) / 7.0);
    double phi = 2.399963 * i;
    Vec3 x = t.point(s, rho * std::cos(phi), rho * std::sin(phi));
    TubeCoords q = t.invert(x);
    worst = std::max(worst, norm(t.point(q) - x));
  }
  CHECK(worst <= 1e-12);

  Vec3 far{10, 10, 10};
  CHECK(!t.contains(far));
  CHECK_THROWS_AS(t.invert(far), OutsideTubeError);
  TubeCoords q;
  CHECK(!t.try_invert(far, q));
  CHECK(t.contains(t.point(1.0, 0.05, -0.02)));
}

TEST_CASE("inversion near a hint stays on the local branch") {
  auto t = hopf_circle_tube();
  TubeCoords q;
  Vec3 x = t.point(0.4, 0.03, 0.01);
  REQUIRE(t.try_invert_near(x, 0.35, q));
  CHECK(std::abs(q.s - 0.4) <= 1e-10);
  CHECK(std::abs(q.u - 0.03) <= 1e-12);
  CHECK(std::abs(q.v - 0.01) <= 1e-12);
}

TEST_CASE("chart volume factor matches the finite-difference volume element") {
  auto link = borromean_standard(1.0, 0.5);
  FluxTube t(link[2], 0.15, 1.0);
  const double h = 1e-5;
  for (auto [s, u, v] : {std::array<double, 3>{0.5, 0.04, -0.03},
                         std::array<double, 3>{2.2, -0.08, 0.02},
                         std::array<double, 3>{5.0, 0.0, 0.1}}) {
    Vec3 xs = (0.5 / h) * (t.point(s + h, u, v) - t.point(s - h, u, v));
    Vec3 xu = (0.5 / h) * (t.point(s, u + h, v) - t.point(s, u - h, v));
    Vec3 xv = (0.5 / h) * (t.point(s, u, v + h) - t.point(s, u, v - h));
    double det = dot(xs, cross(xu, xv));
    CHECK(std::abs(t.jacobian(s, u, v) - det) <= 1e-8);
  }
}

TEST_CASE("tube field: constant section flux, tiny divergence, tangent at the wall") {
  auto link = borromean_standard(1.0, 0.5);
  FluxTube tube(link[0], 0.15, 1.0);
  auto field = make_tube_field(tube);

  // cross-section flux is the nominal flux at every station
  for (int i = 0; i < 10; ++i) {
    double s0 = kTwoPi * (i + 0.137) / 10;
    CHECK(std::abs(field.section_flux(s0) - 1.0) <= 1e-12);
  }

  // pointwise finite-difference divergence stays far below the tolerance
  double worst_div = 0;
  for (int i = 0; i < 24; ++i) {
    double s = kTwoPi * (i + 0.5) / 24;
    double rho = 0.85 * tube.radius() * ((i % 5) / 5.0);
    double phi = 1.618 * i;
    Vec3 x = tube.point(s, rho * std::cos(phi), rho * std::sin(phi));
    worst_div = std::max(worst_div, std::abs(divergence_fd(field, x)));
  }
  CHECK(worst_div <= 1e-8);

  // no radial component near the boundary
  double worst_normal = 0;
  for (int i = 0; i < 16; ++i) {
    double s = kTwoPi * i / 16, phi = 0.7 + 0.9 * i;
    double rho = 0.999 * tube.radius();
    TubeCoords q{s, rho * std::cos(phi), rho * std::sin(phi)};
    Vec3 t, n1, n2;
    tube.frame(s, t, n1, n2);
    Vec3 outward = std::cos(phi) * n1 + std::sin(phi) * n2;
    worst_normal = std::max(worst_normal, std::abs(dot(field.eval_coords(q), outward)));
  }
  CHECK(worst_normal <= 1e-12);

  // zero outside
  CHECK(norm(field.eval({5, 5, 5})) == 0.0);
}

TEST_CASE("straight periodic model field is divergence free to roundoff") {
  // B = (0, 0, f(rho)) on a straight cylinder: the analogue the tube chart
  // reduces to when the core is a line. Central differences cancel exactly.
  const double a = 0.3, flux = 2.0;
  auto B = [&](const Vec3& x) -> Vec3 {
    return {0, 0, tube_profile(std::hypot(x.x, x.y), a, flux)};
  };
  const double h = 1e-4;
  for (auto [x, y, z] : {std::array<double, 3>{0.05, 0.1, 0.3},
                         std::array<double, 3>{-0.2, 0.0, -1.0},
                         std::array<double, 3>{0.1, -0.15, 7.0}}) {
    double div = (B({x + h, y, z}).x - B({x - h, y, z}).x + B({x, y + h, z}).y -
                  B({x, y - h, z}).y + B({x, y, z + h}).z - B({x, y, z - h}).z) /
                 (2 * h);
    CHECK(std::abs(div) <= 1e-15);
  }
}

TEST_CASE("field direction follows the chart flow lines") {
  auto t = hopf_circle_tube();
  auto field = make_tube_field(t);
  // on the circle tube the flow direction at (s,u,v) is the unit tangent
  TubeCoords q{1.2, 0.05, -0.03};
  Vec3 b = field.eval_coords(q);
  Vec3 tv, n1, n2;
  t.frame(q.s, tv, n1, n2);
  double mag = norm(b);
  CHECK(mag > 0);
  CHECK(norm((1.0 / mag) * b - tv) <= 1e-12);
  // magnitude is f(rho)/J * |d point/d s| = f(rho) * |C'| (1+u) / J = f(rho)
  CHECK(std::abs(mag - tube_profile(q.rho(), t.radius(), t.flux())) <= 1e-12);
}
