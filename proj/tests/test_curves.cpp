#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "triplink/curves.hpp"
#include "triplink/errors.hpp"
#include "triplink/io.hpp"

using namespace triplink;

TEST_CASE("unit circle evaluation hits the cardinal points") {
  auto c = circle_xy({0, 0, 0}, 1.0);
  auto p0 = c.eval(0.0);
  CHECK(p0.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p0.y == doctest::Approx(0.0));
  auto p1 = c.eval(kPi / 2);
  CHECK(p1.x == doctest::Approx(0.0));
  CHECK(p1.y == doctest::Approx(1.0).epsilon(1e-14));
  // periodicity
  auto a = c.eval(1.234), b = c.eval(1.234 + kTwoPi);
  CHECK(norm(a - b) < 1e-12);
  // analytic derivative
  auto d = c.deriv(0.7);
  CHECK(d.x == doctest::Approx(-std::sin(0.7)).epsilon(1e-13));
  CHECK(d.y == doctest::Approx(std::cos(0.7)).epsilon(1e-13));
}

TEST_CASE("second derivatives and curvature of a circle") {
  auto c = circle_xy({2, -1, 3}, 2.5);
  Vec3 p, d1, d2;
  c.eval2(1.1, p, d1, d2);
  CHECK(norm(d1) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(norm(d2) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(c.max_curvature() == doctest::Approx(1.0 / 2.5).epsilon(1e-10));
  CHECK(c.length() == doctest::Approx(kTwoPi * 2.5).epsilon(1e-12));
  CHECK(c.min_speed() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("constructor rejects malformed coefficients") {
  ParametricCurve::Coeffs even;
  for (auto& ax : even) ax.assign(4, 0.0);
  CHECK_THROWS_AS(ParametricCurve(std::move(even)), DomainError);

  // broken conjugate symmetry
  ParametricCurve::Coeffs asym;
  for (auto& ax : asym) ax.assign(3, 0.0);
  asym[0][2] = {1.0, 0.0};
  asym[0][0] = {0.0, 0.5};
  CHECK_THROWS_AS(ParametricCurve(std::move(asym)), DomainError);

  // constant curve has zero speed
  ParametricCurve::Coeffs point;
  for (auto& ax : point) ax.assign(3, 0.0);
  point[0][1] = 1.0;
  CHECK_THROWS_AS(ParametricCurve(std::move(point)), RegularityError);
}

TEST_CASE("from_samples reproduces a trig curve and picks a small degree") {
  const int N = 256;
  std::vector<Vec3> pts(N);
  for (int k = 0; k < N; ++k) {
    const double s = kTwoPi * k / N;
    pts[k] = {std::cos(s) + 0.2 * std::cos(3 * s), std::sin(s), 0.1 * std::sin(2 * s)};
  }
  auto c = ParametricCurve::from_samples(pts);
  CHECK(c.modes() >= 3);
  CHECK(c.modes() <= 8);
  for (int k = 0; k < 7; ++k) {
    const double s = 0.913 * k;
    const Vec3 exact{std::cos(s) + 0.2 * std::cos(3 * s), std::sin(s), 0.1 * std::sin(2 * s)};
    CHECK(norm(c.eval(s) - exact) < 1e-10);
  }
}

TEST_CASE("reversed runs the same points backwards") {
  auto [c1, c2] = hopf_standard();
  auto r = c2.reversed();
  for (int k = 0; k < 9; ++k) {
    const double s = 0.7 * k;
    CHECK(norm(r.eval(s) - c2.eval(-s)) < 1e-12);
  }
}

TEST_CASE("rescaled applies scale*(x - center) exactly") {
  auto c = circle_xy({1, 2, 3}, 1.5);
  auto m = c.rescaled(2.0, {1, 2, 3});
  auto p = m.eval(0.4);
  auto q = c.eval(0.4);
  CHECK(norm(p - 2.0 * (q - Vec3{1, 2, 3})) < 1e-13);
}

TEST_CASE("min_separation: parallel circles five apart") {
  auto c1 = circle_xy({0, 0, 0}, 1.0);
  auto c2 = circle_xy({0, 0, 5}, 1.0);
  CHECK(min_separation(c1, c2) == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("min_separation: concentric circles in one plane") {
  auto c1 = circle_xy({0, 0, 0}, 1.0);
  auto c2 = circle_xy({0, 0, 0}, 3.0);
  CHECK(min_separation(c1, c2) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("self_distance of an ellipse is the minor-axis crossing") {
  ParametricCurve::Coeffs c;
  for (auto& ax : c) ax.assign(3, 0.0);
  c[0][2] = 0.5;
  c[0][0] = 0.5;  // x = cos s
  c[1][2] = {0, -0.25};
  c[1][0] = {0, 0.25};  // y = 0.5 sin s
  ParametricCurve ell{std::move(c)};
  CHECK(ell.self_distance() == doctest::Approx(1.0).epsilon(1e-6));

  auto circ = circle_xy({0, 0, 0}, 1.0);
  CHECK(circ.self_distance() == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("standard borromean model: geometry") {
  auto link = borromean_standard(1.0, 0.5);
  const double sep = min_separation(link);
  CHECK(sep > 0.01);
  MESSAGE("borromean (1,0.5) min separation = ", sep);
  // near-degenerate scales must be rejected: the (1,0.999) configuration
  // leaves only ~1e-3 between components
  CHECK_THROWS_AS(borromean_standard(1.0, 0.999), SeparationError);
  CHECK_THROWS_AS(borromean_standard(1.0, 1.2), DomainError);
  CHECK_THROWS_AS(borromean_standard(1.0, 0.0), DomainError);
}

TEST_CASE("link-level separation helpers") {
  auto link = split_unlink_standard();
  // minimizing (10 - cos s)^2 + (1 - |sin s|)^2 over the first pair gives
  // 102 - 2*sqrt(101) for the squared distance
  const double expect = std::sqrt(102.0 - 2.0 * std::sqrt(101.0));
  CHECK(min_separation(link) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(min_separation(link, 0, 1) == doctest::Approx(expect).epsilon(1e-6));
  CHECK_THROWS_AS(min_separation(link, 1, 1), DomainError);
  CHECK(link_diameter(link) > 20.0);
}

TEST_CASE("link construction rejects touching components") {
  auto c1 = circle_xy({0, 0, 0}, 1.0);
  auto c2 = circle_xy({2, 0, 0}, 1.0);  // tangent at (1,0,0)
  auto c3 = circle_xy({0, 0, 9}, 1.0);
  CHECK_THROWS_AS(Link3(c1, c2, c3), SeparationError);
}

TEST_CASE("normalized_to_ball fits the samples inside the ball") {
  auto link = normalized_to_ball(split_unlink_standard(), 0.95);
  double rmax = 0;
  for (int i = 0; i < 3; ++i) {
    auto t = link[i].table(512);
    for (const auto& p : t.p) rmax = std::max(rmax, norm(p));
  }
  CHECK(rmax <= 0.95 + 1e-9);
  CHECK(rmax > 0.90);  // scale actually used, not overshrunk
}

TEST_CASE("fourier perturbation respects the amplitude budget") {
  auto link = borromean_standard(1.0, 0.5);
  auto pert = perturb_fourier(link, 0.1, 20260819);
  for (int i = 0; i < 3; ++i) {
    double sup = 0;
    for (int k = 0; k < 512; ++k) {
      const double s = kTwoPi * k / 512;
      sup = std::max(sup, norm(pert[i].eval(s) - link[i].eval(s)));
    }
    CHECK(sup <= 0.1 + 1e-12);
    CHECK(sup > 0.01);  // perturbation is real
  }
  CHECK(min_separation(pert) > 0.05);
  // deterministic
  auto pert2 = perturb_fourier(link, 0.1, 20260819);
  CHECK(norm(pert2[0].eval(1.0) - pert[0].eval(1.0)) == 0.0);
}

TEST_CASE("hopf and torus models have expected geometry") {
  auto [h1, h2] = hopf_standard();
  CHECK(norm(h2.eval(kPi)) < 1e-12);  // passes through the first circle's center
  const double sep = min_separation(h1, h2);
  CHECK(sep > 0.3);
  MESSAGE("hopf separation = ", sep);

  auto [t1, t2] = torus24_pair();
  for (int k = 0; k < 32; ++k) {
    const double s = kTwoPi * k / 32;
    const Vec3 p = t1.eval(s);
    const double ring = std::hypot(std::hypot(p.x, p.y) - 2.0, p.z);
    CHECK(ring == doctest::Approx(0.5).epsilon(1e-9));  // lies on the torus
  }
  CHECK(min_separation(t1, t2) > 0.3);
}

TEST_CASE("json round trip preserves the curve") {
  auto link = borromean_standard(1.0, 0.5);
  const std::string path = "test_link_roundtrip.json";
  save_link3(link, path);
  auto back = load_link3(path);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 13; ++k) {
      const double s = 0.5 * k;
      CHECK(norm(back[i].eval(s) - link[i].eval(s)) < 1e-12);
    }
  std::remove(path.c_str());
}

TEST_CASE("json loader: orientation flag, polyline import, errors") {
  const char* text = R"({"polyline":[[1,0,0],[0.9238,0.3827,0],[0.7071,0.7071,0],[0.3827,0.9238,0],
    [0,1,0],[-0.3827,0.9238,0],[-0.7071,0.7071,0],[-0.9238,0.3827,0],[-1,0,0],
    [-0.9238,-0.3827,0],[-0.7071,-0.7071,0],[-0.3827,-0.9238,0],[0,-1,0],
    [0.3827,-0.9238,0],[0.7071,-0.7071,0],[0.9238,-0.3827,0]]})";
  auto c = curve_from_json_text(text);
  CHECK(norm(c.eval(0) - Vec3{1, 0, 0}) < 1e-3);
  CHECK(norm(c.eval(kPi / 2) - Vec3{0, 1, 0}) < 1e-3);

  auto flipped = curve_from_json_text(
      R"({"coeffs_x":[[0.5,0],[0,0],[0.5,0]],
          "coeffs_y":[[0,0.5],[0,0],[0,-0.5]],
          "coeffs_z":[[0,0],[0,0],[0,0]],
          "orientation":-1})");
  auto plain = circle_xy({0, 0, 0}, 1.0);
  CHECK(norm(flipped.eval(0.8) - plain.eval(-0.8)) < 1e-12);

  CHECK_THROWS_AS(curve_from_json_text("{\"coeffs_x\":[[1,0]]}"), IoError);
  CHECK_THROWS_AS(curve_from_json_text("not json"), IoError);
  CHECK_THROWS_AS(load_link3("does_not_exist.json"), IoError);
}

TEST_CASE("tube json round trip") {
  auto link = borromean_standard(1.0, 0.5);
  std::vector<TubeSpec> tubes;
  for (int i = 0; i < 3; ++i) tubes.push_back({link[i], 0.15, 1.0});
  const std::string path = "test_tubes_roundtrip.json";
  save_tubes(tubes, path);
  auto back = load_tubes(path);
  REQUIRE(back.size() == 3);
  CHECK(back[1].radius == doctest::Approx(0.15));
  CHECK(back[2].flux == doctest::Approx(1.0));
  CHECK(norm(back[0].core.eval(0.3) - link[0].eval(0.3)) < 1e-12);
  std::remove(path.c_str());
}
