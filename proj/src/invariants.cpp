#include "triplink/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "triplink/errors.hpp"
#include "triplink/hodge.hpp"

namespace triplink {

void certify_integer(InvariantReport& rep) {
  if (rep.values.size() < 2)
    throw DomainError("certify_integer: need at least two resolutions");
  std::sort(rep.values.begin(), rep.values.end());

  const size_t m = rep.values.size();
  double ext = rep.values.back().second;
  if (m >= 3) {
    // Aitken delta-squared on the last three values; falls back to the
    // finest value when the differences are too small to extrapolate from
    const double v0 = rep.values[m - 3].second;
    const double v1 = rep.values[m - 2].second;
    const double v2 = rep.values[m - 1].second;
    const double d1 = v1 - v0, d2 = v2 - v1;
    const double den = d2 - d1;
    if (std::fabs(den) > 1e-14 * (std::fabs(v2) + 1.0)) {
      const double candidate = v2 - d2 * d2 / den;
      // extrapolation is only trusted when it stays near the finest value
      if (std::fabs(candidate - v2) <= std::fabs(d2)) ext = candidate;
    }
  }
  rep.extrapolated = ext;
  rep.integer = std::llround(ext);
  rep.residual = std::fabs(ext - static_cast<double>(rep.integer));
  rep.certified = rep.residual < 0.25;
  rep.monotone = true;
  double prev = std::fabs(rep.values.front().second - static_cast<double>(rep.integer));
  for (size_t k = 1; k < m; ++k) {
    const double cur = std::fabs(rep.values[k].second - static_cast<double>(rep.integer));
    if (cur > prev + 1e-12) rep.monotone = false;
    prev = cur;
  }
}

InvariantReport mu12_gauss(const ParametricCurve& c1, const ParametricCurve& c2,
                           const std::vector<int>& ns, Exec exec) {
  const double scale = 1.0 + std::max(c1.length(), c2.length());
  if (min_separation(c1, c2) < kEpsSep * scale)
    throw SeparationError("mu12_gauss: curves touch");
  InvariantReport rep;
  rep.method = "gauss";
  for (int n : ns) rep.values.emplace_back(n, integrate_top(pullback_gauss_pair(c1, c2, n, exec)));
  certify_integer(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// crossing oracle
// ---------------------------------------------------------------------------

namespace {

struct Projected {
  std::vector<double> px, py, z;  // projected coordinates and height
};

Projected project(const ParametricCurve::Table& t, const Vec3& ex, const Vec3& ey,
                  const Vec3& dir) {
  Projected p;
  const size_t n = t.p.size();
  p.px.resize(n);
  p.py.resize(n);
  p.z.resize(n);
  for (size_t k = 0; k < n; ++k) {
    p.px[k] = dot(t.p[k], ex);
    p.py[k] = dot(t.p[k], ey);
    p.z[k] = dot(t.p[k], dir);
  }
  return p;
}

// One attempt at a signed crossing count along `dir`. Returns nullopt when a
// genericity margin is violated (near-tangent crossing, odd total count,
// non-convergent refinement) so the caller can retry with a new direction.
std::optional<long> count_crossings(const ParametricCurve& c1, const ParametricCurve& c2,
                                    const Vec3& dir, double scale) {
  const int N = 2048;
  const double step = kTwoPi / N;
  // orthonormal frame completing dir
  const Vec3 seed = std::fabs(dir.x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 ex = normalized(cross(seed, dir));
  const Vec3 ey = cross(dir, ex);

  const auto t1 = c1.table(N), t2 = c2.table(N);
  const auto p1 = project(t1, ex, ey, dir), p2 = project(t2, ex, ey, dir);

  struct Hit {
    double s, t;
    int eps;
  };
  std::vector<Hit> hits;

  for (int i = 0; i < N; ++i) {
    const int i2 = (i + 1) % N;
    const double ax = p1.px[i], ay = p1.py[i], bx = p1.px[i2], by = p1.py[i2];
    const double alox = std::min(ax, bx), ahix = std::max(ax, bx);
    const double aloy = std::min(ay, by), ahiy = std::max(ay, by);
    for (int j = 0; j < N; ++j) {
      const int j2 = (j + 1) % N;
      const double cx = p2.px[j], cy = p2.py[j], dx = p2.px[j2], dy = p2.py[j2];
      if (std::min(cx, dx) > ahix || std::max(cx, dx) < alox || std::min(cy, dy) > ahiy ||
          std::max(cy, dy) < aloy)
        continue;
      // segment intersection via orientation tests
      const double d1x = bx - ax, d1y = by - ay, d2x = dx - cx, d2y = dy - cy;
      const double den = d1x * d2y - d1y * d2x;
      if (den == 0.0) continue;
      const double sloc = ((cx - ax) * d2y - (cy - ay) * d2x) / den;
      const double tloc = ((cx - ax) * d1y - (cy - ay) * d1x) / den;
      if (sloc < 0.0 || sloc > 1.0 || tloc < 0.0 || tloc > 1.0) continue;

      // polish the chord estimate on the true curves
      double s = (i + sloc) * step, t = (j + tloc) * step;
      bool converged = false;
      for (int it = 0; it < 24; ++it) {
        Vec3 q1, q2, qd1, qd2, unused;
        c1.eval2(s, q1, qd1, unused);
        c2.eval2(t, q2, qd2, unused);
        const Vec3 diff = q1 - q2;
        const double fx = dot(diff, ex), fy = dot(diff, ey);
        if (std::fabs(fx) + std::fabs(fy) < 1e-13 * scale) {
          converged = true;
          break;
        }
        const double j11 = dot(qd1, ex), j12 = -dot(qd2, ex);
        const double j21 = dot(qd1, ey), j22 = -dot(qd2, ey);
        const double jden = j11 * j22 - j12 * j21;
        if (std::fabs(jden) < 1e-14 * scale * scale) break;
        s -= (fx * j22 - fy * j12) / jden;
        t -= (-fx * j21 + fy * j11) / jden;
      }
      if (!converged) return std::nullopt;
      // the true crossing must belong to this segment pair (with slack one
      // cell each way); otherwise it is a duplicate found from a neighbor
      const double ds = std::fabs(wrap_angle(s - (i + 0.5) * step));
      const double dt = std::fabs(wrap_angle(t - (j + 0.5) * step));
      if (ds > 1.5 * step || dt > 1.5 * step) continue;

      Vec3 q1, q2, qd1, qd2, unused;
      c1.eval2(s, q1, qd1, unused);
      c2.eval2(t, q2, qd2, unused);
      const double dz = dot(q2 - q1, dir);
      const double tr = triple(dir, qd1, qd2);
      if (std::fabs(dz) < 1e-6 * scale) return std::nullopt;  // strands too close in depth
      if (std::fabs(tr) < 1e-6 * norm(qd1) * norm(qd2)) return std::nullopt;  // near tangency
      // sign fixed to match the difference-retraction surface integral
      const int eps = -(dz > 0 ? 1 : -1) * (tr > 0 ? 1 : -1);
      hits.push_back({s, t, eps});
    }
  }

  // merge duplicates refined to the same crossing from adjacent cells
  std::vector<Hit> unique;
  for (const auto& h : hits) {
    bool dup = false;
    for (const auto& u : unique)
      if (std::fabs(wrap_angle(h.s - u.s)) < 1e-4 && std::fabs(wrap_angle(h.t - u.t)) < 1e-4) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(h);
  }
  long sum = 0;
  for (const auto& u : unique) sum += u.eps;
  if (sum % 2 != 0) return std::nullopt;  // a crossing was missed: not generic enough
  return sum / 2;
}

}  // namespace

int mu12_crossings(const ParametricCurve& c1, const ParametricCurve& c2, const Vec3& direction) {
  const double scale = 1.0 + std::max(c1.length(), c2.length()) / kTwoPi;
  Vec3 dir = normalized(direction);
  CounterRng rng(0x633055, 7);
  for (int attempt = 0; attempt < 24; ++attempt) {
    if (auto r = count_crossings(c1, c2, dir, scale)) return static_cast<int>(*r);
    const double mag = 0.15 * (1.0 + attempt / 4.0);
    dir = normalized(dir + Vec3{mag * rng.next_gaussian(), mag * rng.next_gaussian(),
                                mag * rng.next_gaussian()});
  }
  throw GenericityError("mu12_crossings: no generic projection found after 24 attempts");
}

// ---------------------------------------------------------------------------
// triple invariant, sphere-map route
// ---------------------------------------------------------------------------

namespace {

// Pairwise gate: the subtorus periods of the degree-2 form are the pairwise
// linking integrals; a Borromean input must zero all of them.
void gate_periods(const DiscreteForm& beta, double tol) {
  static const int pair_of[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  const auto per = periods(beta);
  for (size_t c = 0; c < per.size(); ++c)
    if (std::fabs(per[c]) > tol)
      throw NonBorromeanError(pair_of[c][0], pair_of[c][1], per[c],
                              "triple invariant: pairwise linking integral of components (" +
                                  std::to_string(pair_of[c][0]) + "," +
                                  std::to_string(pair_of[c][1]) + ") is " +
                                  std::to_string(per[c]) + ", not 0");
}

}  // namespace

InvariantReport mu123_hopf(const Link3& link, const TripleOptions& opts) {
  if (opts.ns.size() < 2) throw DomainError("mu123_hopf: need at least two resolutions");
  const Link3 nl = normalized_to_ball(link, opts.ball_radius);
  InvariantReport rep;
  rep.method = "sphere-route";
  SolveOptions sopts;
  sopts.check_closed = false;   // discretization aliasing, not actual non-closedness
  sopts.check_periods = false;  // gated explicitly below with pair attribution
  for (int n : opts.ns) {
    auto beta = pullback_hopf(nl, n, opts.exec);
    gate_periods(beta, opts.tol_period);
    auto eta = solve_potential(beta, sopts);
    rep.values.emplace_back(n, 0.5 * integrate_top(wedge(beta, eta)));
  }
  certify_integer(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// triple invariant, potential route
// ---------------------------------------------------------------------------

double green_conf_eval(const Conf3Vec& x, int i, int j, const Conf3Vec& u, const Conf3Vec& v) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw DomainError("green_conf_eval: indices must be distinct and in 1..3");
  return omega_eval(x[i - 1] - x[j - 1], u[i - 1] - u[j - 1], v[i - 1] - v[j - 1]);
}

namespace {

// (alpha ^ beta)(w0,w1,w2,w3) for 2-forms alpha = w_{a1,a2}, beta = w_{b1,b2}
double wedge22_green(const Conf3Vec& x, int a1, int a2, int b1, int b2, const Conf3Vec& w0,
                     const Conf3Vec& w1, const Conf3Vec& w2, const Conf3Vec& w3) {
  auto A = [&](const Conf3Vec& p, const Conf3Vec& q) { return green_conf_eval(x, a1, a2, p, q); };
  auto B = [&](const Conf3Vec& p, const Conf3Vec& q) { return green_conf_eval(x, b1, b2, p, q); };
  return A(w0, w1) * B(w2, w3) - A(w0, w2) * B(w1, w3) + A(w0, w3) * B(w1, w2) +
         A(w1, w2) * B(w0, w3) - A(w1, w3) * B(w0, w2) + A(w2, w3) * B(w0, w1);
}

}  // namespace

double omega4_eval(const Conf3Vec& x, const Conf3Vec& w0, const Conf3Vec& w1, const Conf3Vec& w2,
                   const Conf3Vec& w3) {
  double s = 0;
  for (int i = 1; i <= 3; ++i) {
    const int ip = i % 3 + 1, ipp = ip % 3 + 1;
    s += wedge22_green(x, i, ip, ip, ipp, w0, w1, w2, w3);
  }
  return s;
}

namespace {

// Central-difference exterior derivative of phi against the cyclic 4-form at
// deterministic random configurations.  The residual is relative to the
// largest 4-form value seen, so the threshold does not depend on the
// configuration scale: a genuine primitive sits at the finite-difference
// floor (~1e-6 relative) while phi = 0 scores 1.
void spot_check_phi(const ThreeForm& phi) {
  CounterRng rng(0xF0121, 3);
  const double h = 1e-3;
  double worst = 0;
  double scale = 0;
  for (int trial = 0; trial < 8; ++trial) {
    // well-separated configuration in a unit-scale box
    Conf3Vec x;
    for (int k = 0; k < 3; ++k)
      x[k] = {rng.uniform(-1, 1) + 3.0 * k, rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Conf3Vec w[4];
    for (auto& wk : w)
      for (int k = 0; k < 3; ++k)
        wk[k] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};

    double fd = 0;
    for (int k = 0; k < 4; ++k) {
      Conf3Vec rest[3];
      int m = 0;
      for (int l = 0; l < 4; ++l)
        if (l != k) rest[m++] = w[l];
      Conf3Vec xp = x, xm = x;
      for (int c = 0; c < 3; ++c) {
        xp[c] = xp[c] + h * w[k][c];
        xm[c] = xm[c] - h * w[k][c];
      }
      const double diff =
          (phi(xp, rest[0], rest[1], rest[2]) - phi(xm, rest[0], rest[1], rest[2])) / (2 * h);
      fd += (k % 2 == 0 ? 1.0 : -1.0) * diff;
    }
    const double ref = omega4_eval(x, w[0], w[1], w[2], w[3]);
    worst = std::max(worst, std::fabs(fd - ref));
    scale = std::max(scale, std::fabs(ref));
  }
  const double rel = worst / std::max(scale, 1e-300);
  if (rel > 1e-4)
    throw PhiInconsistentError(
        rel, "mu123_keylemma: d(phi) disagrees with the cyclic 4-form, relative residual " +
                 std::to_string(rel));
}

}  // namespace

InvariantReport mu123_keylemma(const Link3& link, const ThreeForm& phi,
                               const TripleOptions& opts) {
  if (opts.ns.size() < 2) throw DomainError("mu123_keylemma: need at least two resolutions");
  spot_check_phi(phi);

  InvariantReport rep;
  rep.method = "potential-route";
  // pair composites are spectrally closed so the closedness check stays on;
  // periods are gated explicitly below with pair attribution
  SolveOptions sopts;
  sopts.check_periods = false;
  static const int cyc[3][2] = {{1, 2}, {2, 3}, {3, 1}};

  for (int n : opts.ns) {
    // pairwise gate, then one potential per cyclic pair
    std::array<DiscreteForm, 3> beta{pullback_green(link, 1, 2, n, opts.exec),
                                     pullback_green(link, 2, 3, n, opts.exec),
                                     pullback_green(link, 3, 1, n, opts.exec)};
    for (int c = 0; c < 3; ++c) {
      const auto per = periods(beta[c]);
      double worst = 0;
      for (double p : per) worst = std::max(worst, std::fabs(p));
      if (worst > opts.tol_period)
        throw NonBorromeanError(cyc[c][0], cyc[c][1], worst,
                                "triple invariant: pairwise linking integral of components (" +
                                    std::to_string(cyc[c][0]) + "," + std::to_string(cyc[c][1]) +
                                    ") is " + std::to_string(worst) + ", not 0");
    }
    double total = 0;
    for (int c = 0; c < 3; ++c) {
      // term c pairs F*w_{i,i+1} with the potential of the next cyclic pair
      auto eta = solve_potential(beta[(c + 1) % 3], sopts);
      total += integrate_top(wedge(beta[c], eta));
    }

    // pullback of phi: (F*phi)(u) = phi(x(u))(d1F, d2F, d3F)
    const TorusGrid g(3, n);
    std::array<ParametricCurve::Table, 3> t{link[0].table(n), link[1].table(n), link[2].table(n)};
    DiscreteForm fphi(g, 3);
    double* out = fphi.comp(0).data();
    for_each_index(g.nodes(), opts.exec, [&](std::int64_t f) {
      long rem = f;
      const int i3 = static_cast<int>(rem % n);
      rem /= n;
      const int i2 = static_cast<int>(rem % n);
      const int i1 = static_cast<int>(rem / n);
      const Conf3Vec x{t[0].p[i1], t[1].p[i2], t[2].p[i3]};
      const Conf3Vec v1{t[0].d[i1], Vec3{}, Vec3{}};
      const Conf3Vec v2{Vec3{}, t[1].d[i2], Vec3{}};
      const Conf3Vec v3{Vec3{}, Vec3{}, t[2].d[i3]};
      out[f] = phi(x, v1, v2, v3);
    });
    total -= integrate_top(fphi);
    rep.values.emplace_back(n, total);
  }
  certify_integer(rep);
  return rep;
}

}  // namespace triplink
