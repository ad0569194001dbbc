#include "triplink/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <utility>

#include "triplink/confspace.hpp"
#include "triplink/curves.hpp"
#include "triplink/errors.hpp"
#include "triplink/energy.hpp"
#include "triplink/forms.hpp"
#include "triplink/helicity.hpp"
#include "triplink/hodge.hpp"
#include "triplink/invariants.hpp"
#include "triplink/tubes.hpp"

namespace triplink {
namespace {

constexpr std::array<std::pair<int, int>, 3> kTags = {{{2, 1}, {3, 2}, {3, 1}}};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// band-limited 1-form with three low modes per axis, used to synthesize an
// exact 2-form whose potential the solver must recover up to d
DiscreteForm random_trig_oneform(const TorusGrid& g, unsigned seed) {
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

class Runner {
 public:
  explicit Runner(VerifyReport& report) : report_(report) {}

  // body fills measured/detail and may flip ok; pass = ok && measured <= limit
  void check(const std::string& name, double limit,
             const std::function<void(double& measured, bool& ok, std::string& detail)>& body) {
    VerifyCheck c;
    c.name = name;
    c.limit = limit;
    bool ok = true;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(c.measured, ok, c.detail);
    } catch (const std::exception& e) {
      ok = false;
      c.detail = std::string("threw: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.pass = ok && c.measured <= c.limit;
    report_.checks.push_back(std::move(c));
  }

 private:
  VerifyReport& report_;
};

void quick_checks(Runner& r, Exec exec) {
  r.check("sphere normalization", 1e-6, [&](double& m, bool&, std::string& d) {
    const double total = sphere_total(128);
    m = std::fabs(total - 1.0);
    d = "unit-sphere integral " + fmt(total) + " at n=128";
  });

  r.check("duality matrix", 1e-3, [&](double& m, bool&, std::string& d) {
    for (auto [i, j] : kTags) {
      const SphereCycle c = unit_sphere_cycle(i, j);
      for (auto [k, l] : kTags) {
        const double expected = (i == k && j == l) ? 1.0 : 0.0;
        m = std::max(m, std::fabs(pairing(c, k, l, 64, exec) - expected));
      }
    }
    d = "worst deviation of the 3x3 cycle/kernel matrix from identity at n=64";
  });

  r.check("projection degrees", 1e-3, [&](double& m, bool&, std::string& d) {
    for (int k = 1; k <= 3; ++k)
      for (auto [i, j] : kTags) {
        const double expected = (k != i && k != j) ? 1.0 : 0.0;
        m = std::max(m, std::fabs(proj_degree(k, unit_sphere_cycle(i, j), 32, exec) - expected));
      }
    d = "worst deviation of the nine slot-projection degrees at n=32";
  });

  r.check("relation residual", 1e-3, [&](double& m, bool&, std::string& d) {
    m = relation_residual(32, exec);
    d = "kernel wedge relation integrated over both product 4-cycles at n=32";
  });

  r.check("whitehead brackets", 1e-3, [&](double& m, bool&, std::string& d) {
    const HomotopyClass g21 = generator_class(2, 1);
    const HomotopyClass g32 = generator_class(3, 2);
    const HomotopyClass g31 = generator_class(3, 1);
    m = std::max({std::fabs(whitehead_I(-g21, -g32, 32, exec) - 1.0),
                  std::fabs(whitehead_I(-g32, g31, 32, exec) - 1.0),
                  std::fabs(whitehead_I(g31, -g21, 32, exec) - 1.0),
                  std::fabs(whitehead_I(g21, g21, 32, exec)),
                  std::fabs(whitehead_I(g32, g32, 32, exec)),
                  std::fabs(whitehead_I(g31, g31, 32, exec))});
    d = "cyclic brackets = 1 and self brackets = 0 at n=32";
  });

  r.check("relabeling pairings", 1e-3, [&](double& m, bool&, std::string& d) {
    const std::array<int, 3> swap23 = {1, 3, 2};
    const double a = pairing(permute(unit_sphere_cycle(3, 2), swap23), 3, 2, 32, exec);
    const double b = pairing(permute(unit_sphere_cycle(3, 1), swap23), 2, 1, 32, exec);
    m = std::max(std::fabs(a + 1.0), std::fabs(b - 1.0));
    d = "slot swap (2 3): pairings " + fmt(a) + " vs -1 and " + fmt(b) + " vs +1";
  });

  r.check("pairwise cross-method", 0, [&](double& m, bool& ok, std::string& d) {
    long bad = 0;
    auto compare = [&](const ParametricCurve& a, const ParametricCurve& b, long expected) {
      const InvariantReport g = mu12_gauss(a, b, {32, 64, 128}, exec);
      const long x = mu12_crossings(a, b);
      if (!g.certified || g.integer != x || g.integer != expected) ++bad;
    };
    auto [h1, h2] = hopf_standard();
    compare(h1, h2, -1);
    auto [t1, t2] = torus24_pair();
    compare(t1, t2, -2);
    const Link3 sp = split_unlink_standard();
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) compare(sp[i], sp[j], 0);
    const Link3 bo = borromean_standard(1.0, 0.5);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) compare(bo[i], bo[j], 0);
    m = static_cast<double>(bad);
    ok = bad == 0;
    d = "kernel route vs crossing route on 8 certified pairs (hopf, torus, split, rings)";
  });

  r.check("triple benchmark", 0.25, [&](double& m, bool& ok, std::string& d) {
    TripleOptions opts;
    opts.exec = exec;
    const InvariantReport rep = mu123_hopf(borromean_standard(1.0, 0.5), opts);
    m = rep.residual;
    ok = rep.certified && std::labs(rep.integer) == 1;
    d = "standard rings certify to " + std::to_string(rep.integer) + ", refinement residual " +
        fmt(rep.residual);
  });

  r.check("split zeros", 0.25, [&](double& m, bool& ok, std::string& d) {
    const Link3 sp = split_unlink_standard();
    TripleOptions opts;
    opts.exec = exec;
    const InvariantReport triple = mu123_hopf(sp, opts);
    ok = triple.certified && triple.integer == 0;
    m = std::fabs(triple.extrapolated);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const InvariantReport g = mu12_gauss(sp[i], sp[j], {32, 64, 128}, exec);
        ok = ok && g.certified && g.integer == 0;
        m = std::max(m, std::fabs(g.extrapolated));
      }
    d = "split unlink: triple and all pairwise invariants certify to 0";
  });

  r.check("potential round-trip", 1e-10, [&](double& m, bool&, std::string& d) {
    const TorusGrid g(3, 32);
    const DiscreteForm beta = triplink::d(random_trig_oneform(g, 43));
    m = max_diff(triplink::d(solve_potential(beta)), beta);
    d = "max |d(potential) - input| on a synthesized exact 2-form at n=32";
  });

  r.check("potential ambiguity", 1e-6, [&](double& m, bool&, std::string& d) {
    const Link3 link = normalized_to_ball(borromean_standard(1.0, 0.5), 0.95);
    const DiscreteForm beta = pullback_hopf(link, 32, exec);
    SolveOptions opts;
    opts.check_closed = false;  // aliasing of the sharp composite, gated by periods
    const DiscreteForm eta = solve_potential(beta, opts);
    const double base = integrate_top(wedge(beta, eta));
    CounterRng rng(9, 2);
    for (int trial = 0; trial < 3; ++trial) {
      DiscreteForm etap = eta;
      for (int c = 0; c < 3; ++c) {
        const double off = rng.uniform(-2, 2);
        for (auto& v : etap.comp(c)) v += off;
      }
      m = std::max(m, std::fabs(integrate_top(wedge(beta, etap)) - base));
    }
    d = "paired integral " + fmt(base) + " stable under constant shifts of the potential";
  });
}

void full_checks(Runner& r, Exec exec) {
  r.check("tube helicity benchmark", 0.10, [&](double& m, bool& ok, std::string& d) {
    const Link3 b = borromean_standard(1.0, 0.5);
    const std::array<FluxTube, 3> tubes = {FluxTube(b[0], 0.15, 1.0), FluxTube(b[1], 0.15, 1.0),
                                           FluxTube(b[2], 0.15, 1.0)};
    HelicityOptions opts;
    opts.certify.exec = exec;
    const HelicityResult res = estimate_H123(tubes, opts);
    const HelicityPoint& last = res.series.back();
    const double target = static_cast<double>(res.core_triple.integer);
    m = std::fabs(last.estimate / target - 1.0);
    long aborted = 0;
    for (const auto& p : res.series) aborted += p.aborted_samples;
    ok = res.core_triple.certified && aborted == 0;
    d = "unit-flux ring tubes: estimate " + fmt(last.estimate) + " vs core " + fmt(target) +
        " at T=" + fmt(last.T);
  });

  r.check("cube eigenvalue", 0.05, [&](double& m, bool&, std::string& d) {
    auto always = [](const Vec3&) { return true; };
    const double lam = lambda1_neumann_box(always, {0, 0, 0}, {1, 1, 1}, 0.05, exec);
    m = std::fabs(lam / (kPi * kPi) - 1.0);
    d = "unit-cube first Neumann eigenvalue " + fmt(lam) + " vs pi^2";
  });

  r.check("kernel sup law", 0.01, [&](double& m, bool&, std::string& d) {
    const double slope = sup_kernel_slope({0.5, 1.0, 2.0, 4.0});
    m = std::fabs(slope + 2.0);
    d = "log-log slope of the kernel sup over separations, " + fmt(slope) + " vs -2";
  });

  r.check("dilation exponents", 0.10, [&](double& m, bool&, std::string& d) {
    const Link3 b = borromean_standard(1.0, 0.5);
    const std::array<FluxTube, 3> tubes = {FluxTube(b[0], 0.15, 1.0), FluxTube(b[1], 0.15, 1.0),
                                           FluxTube(b[2], 0.15, 1.0)};
    BoundOptions opts;
    opts.voxel_h = 0.0375;
    opts.norms.samples_pair = 100000;
    opts.norms.samples_wedge = 10000;
    opts.norms.exec = exec;
    opts.audit_samples_pair = 20000;
    opts.audit_samples_wedge = 4000;
    opts.quad.exec = exec;
    const BoundReport rep = compute_bound_report(tubes, opts);
    const auto& e = rep.scaling_exponents;
    m = std::max({std::fabs(e.at("r_T") - 1.0), std::fabs(e.at("lambda1N") + 2.0) / 2.0,
                  std::fabs(e.at("w12") - 1.0), std::fabs(e.at("w23") - 1.0),
                  std::fabs(e.at("w31") - 1.0)});
    d = "worst relative deviation of fitted dilation powers: separation " + fmt(e.at("r_T")) +
        ", eigenvalue " + fmt(e.at("lambda1N")) + ", kernel norms " + fmt(e.at("w12")) + "/" +
        fmt(e.at("w23")) + "/" + fmt(e.at("w31"));
  });
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

double VerifyReport::total_seconds() const {
  double s = 0;
  for (const auto& c : checks) s += c.seconds;
  return s;
}

VerifyReport run_verify(const std::string& level, Exec exec) {
  if (level != "quick" && level != "full") throw DomainError("verify level must be quick or full");
  VerifyReport report;
  report.level = level;
  Runner r(report);
  quick_checks(r, exec);
  if (level == "full") full_checks(r, exec);
  return report;
}

}  // namespace triplink
