#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "triplink/curves.hpp"
#include "triplink/errors.hpp"
#include "triplink/forms.hpp"
#include "triplink/hodge.hpp"

using namespace triplink;

namespace {

// band-limited random 1-form: every component a trig polynomial with modes
// up to 3 per axis, so all spectral operations on it are exact
DiscreteForm random_trig_oneform(const TorusGrid& g, std::uint64_t seed) {
  DiscreteForm alpha(g, 1);
  CounterRng rng(seed, 0);
  const int n = g.n;
  for (int c = 0; c < alpha.components(); ++c) {
    double amp[3][3], phs[3][3];
    for (int ax = 0; ax < 3; ++ax)
      for (int m = 0; m < 3; ++m) {
        amp[ax][m] = rng.uniform(-1, 1);
        phs[ax][m] = rng.uniform(0, kTwoPi);
      }
    for (long f = 0; f < g.nodes(); ++f) {
      long rem = f;
      int i3 = 0, i2 = 0, i1 = 0;
      if (g.dim == 3) {
        i3 = static_cast<int>(rem % n);
        rem /= n;
      }
      i2 = static_cast<int>(rem % n);
      i1 = static_cast<int>(rem / n);
      const double u[3] = {kTwoPi * i1 / n, kTwoPi * i2 / n, kTwoPi * i3 / n};
      double v = 0;
      for (int ax = 0; ax < g.dim; ++ax)
        for (int m = 0; m < 3; ++m) v += amp[ax][m] * std::sin((m + 1) * u[ax] + phs[ax][m]);
      alpha.comp(c)[f] = v;
    }
  }
  return alpha;
}

double max_diff(const DiscreteForm& a, const DiscreteForm& b) {
  double m = 0;
  for (int c = 0; c < a.components(); ++c)
    for (long k = 0; k < a.grid().nodes(); ++k)
      m = std::max(m, std::fabs(a.comp(c)[k] - b.comp(c)[k]));
  return m;
}

}  // namespace

TEST_CASE("zero input gives zero potential") {
  TorusGrid g(3, 8);
  auto eta = solve_potential(DiscreteForm(g, 2));
  CHECK(eta.max_abs() == 0.0);
  CHECK(eta.degree() == 1);
}

TEST_CASE("round trip on synthesized exact forms") {
  for (int dim : {2, 3}) {
    TorusGrid g(dim, 32);
    auto alpha = random_trig_oneform(g, 40 + dim);
    auto beta = d(alpha);
    auto eta = solve_potential(beta);
    CHECK(max_diff(d(eta), beta) <= 1e-10);
  }
}

TEST_CASE("solver output is in Coulomb gauge with zero harmonic part") {
  TorusGrid g(3, 16);
  auto beta = d(random_trig_oneform(g, 77));
  auto eta = solve_potential(beta);
  // codifferential vanishes: d applied to the dual 2-form of eta is the
  // divergence times the volume form
  DiscreteForm dual(g, 2);
  dual.comp(0) = eta.comp(2);
  for (auto& v : dual.comp(1)) v = 0;
  for (long k = 0; k < g.nodes(); ++k) dual.comp(1)[k] = -eta.comp(1)[k];
  dual.comp(2) = eta.comp(0);
  CHECK(d(dual).max_abs() <= 1e-12);
  // zero mean on every component
  for (int c = 0; c < 3; ++c)
    CHECK(std::fabs(pairwise_sum(eta.comp(c)) / double(g.nodes())) <= 1e-13);
}

TEST_CASE("two runs produce bit-identical potentials") {
  TorusGrid g(3, 16);
  auto beta = d(random_trig_oneform(g, 123));
  auto e1 = solve_potential(beta);
  auto e2 = solve_potential(beta);
  for (int c = 0; c < 3; ++c)
    CHECK(std::memcmp(e1.comp(c).data(), e2.comp(c).data(),
                      sizeof(double) * g.nodes()) == 0);
}

TEST_CASE("linked pair obstructs exactness") {
  auto [h1, h2] = hopf_standard();
  auto beta = pullback_gauss_pair(h1, h2, 32);
  CHECK_THROWS_AS(solve_potential(beta), NonExactFormError);
  try {
    solve_potential(beta);
  } catch (const NonExactFormError& e) {
    CHECK(e.which_period == 0);
    CHECK(std::fabs(std::fabs(e.value) - 1.0) <= 1e-6);
  }
}

TEST_CASE("non-closed input is rejected before solving") {
  TorusGrid g(3, 16);
  DiscreteForm beta(g, 2);
  const int n = g.n;
  for (long f = 0; f < g.nodes(); ++f) {
    const int i3 = static_cast<int>(f % n);
    beta.comp(0)[f] = std::cos(kTwoPi * i3 / n);
  }
  CHECK_THROWS_AS(solve_potential(beta), NotClosedError);
  // periods of this input all vanish, so the closedness check is what fires
  for (double p : periods(beta)) CHECK(std::fabs(p) <= 1e-12);
}

TEST_CASE("periods of reference forms") {
  TorusGrid g(3, 16);
  DiscreteForm vol12(g, 2);
  for (auto& v : vol12.comp(0)) v = 1.0;
  auto per = periods(vol12);
  REQUIRE(per.size() == 3);
  CHECK(per[0] == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-13));
  CHECK(per[1] == 0.0);
  CHECK(per[2] == 0.0);

  auto bor = borromean_standard(1.0, 0.5);
  for (auto [i, j] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{3, 1}}) {
    for (double p : periods(pullback_green(bor, i, j, 32))) CHECK(std::fabs(p) <= 1e-6);
  }

  auto [h1, h2] = hopf_standard();
  auto hper = periods(pullback_gauss_pair(h1, h2, 64));
  REQUIRE(hper.size() == 1);
  CHECK(std::fabs(std::fabs(hper[0]) - 1.0) <= 1e-6);

  CHECK_THROWS_AS(periods(DiscreteForm(g, 1)), DomainError);
}

TEST_CASE("potential ambiguity does not move the paired integral") {
  // beta from the sphere-route composite on the normalized standard rings;
  // adding a constant-coefficient 1-form to eta must leave the total
  // integral of beta wedge eta unchanged because all periods of beta vanish
  auto link = normalized_to_ball(borromean_standard(1.0, 0.5), 0.95);
  auto beta = pullback_hopf(link, 32);
  SolveOptions opts;
  opts.check_closed = false;  // aliasing of the sharp composite, gated by periods
  auto eta = solve_potential(beta, opts);
  const double base = integrate_top(wedge(beta, eta));

  CounterRng rng(9, 2);
  for (int trial = 0; trial < 3; ++trial) {
    auto etap = eta;
    for (int c = 0; c < 3; ++c) {
      const double off = rng.uniform(-2, 2);
      for (auto& v : etap.comp(c)) v += off;
    }
    CHECK(std::fabs(integrate_top(wedge(beta, etap)) - base) <= 1e-6);
  }
}
