#include "triplink/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triplink/errors.hpp"

namespace triplink {

namespace {

constexpr double kHuge = 1e300;

// real trig evaluation of one axis: value, first, second derivative
void axis_eval(const std::vector<std::complex<double>>& c, int M, double s, int order,
               double& f, double& d1, double& d2) {
  f = c[M].real();
  d1 = 0;
  d2 = 0;
  for (int m = 1; m <= M; ++m) {
    const double re = c[M + m].real(), im = c[M + m].imag();
    const double cs = std::cos(m * s), sn = std::sin(m * s);
    f += 2.0 * (re * cs - im * sn);
    if (order >= 1) d1 += 2.0 * m * (-re * sn - im * cs);
    if (order >= 2) d2 += 2.0 * m * m * (-re * cs + im * sn);
  }
}

}  // namespace

ParametricCurve::ParametricCurve(Coeffs coeffs) : c_(std::move(coeffs)) {
  const std::size_t len = c_[0].size();
  if (len == 0 || len % 2 == 0 || c_[1].size() != len || c_[2].size() != len)
    throw DomainError("curve coefficients must be three arrays of equal odd length");
  M_ = int(len / 2);
  double cmax = 0;
  for (const auto& ax : c_)
    for (const auto& z : ax) cmax = std::max(cmax, std::abs(z));
  // closed real curve: enforce conjugate symmetry, reject if badly violated
  for (auto& ax : c_) {
    for (int m = 0; m <= M_; ++m) {
      const auto hi = ax[M_ + m], lo = ax[M_ - m];
      if (std::abs(hi - std::conj(lo)) > 1e-9 * std::max(1.0, cmax))
        throw DomainError("curve coefficients are not conjugate-symmetric");
      const auto sym = 0.5 * (hi + std::conj(lo));
      ax[M_ + m] = sym;
      ax[M_ - m] = std::conj(sym);
    }
  }
  const int probe = std::max(512, 8 * M_);
  double vmin = kHuge, vmax = 0;
  for (int k = 0; k < probe; ++k) {
    const double v = norm(deriv(kTwoPi * k / probe));
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmin < 1e-12 + 1e-9 * vmax)
    throw RegularityError("curve parametrization has (near-)vanishing speed");
}

ParametricCurve ParametricCurve::from_samples(const std::vector<Vec3>& pts, int modes) {
  const int N = int(pts.size());
  if (N < 5) throw DomainError("curve fit needs at least 5 samples");
  const int Mcap = std::min(64, (N - 1) / 2);
  // plain DFT per axis; N is small enough that O(N*M) is immaterial
  auto mode = [&](int axis, int m) {
    std::complex<double> acc = 0;
    for (int k = 0; k < N; ++k) {
      const double ang = -kTwoPi * m * k / N;
      const Vec3& p = pts[k];
      const double v = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
      acc += v * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc / double(N);
  };
  std::array<std::vector<std::complex<double>>, 3> full;
  for (int ax = 0; ax < 3; ++ax) {
    full[ax].resize(2 * Mcap + 1);
    for (int m = -Mcap; m <= Mcap; ++m) full[ax][Mcap + m] = mode(ax, m);
  }
  int M = modes;
  if (M < 0) {
    double total = 0;
    for (int ax = 0; ax < 3; ++ax)
      for (int m = 1; m <= Mcap; ++m) total += std::norm(full[ax][Mcap + m]);
    M = std::min(8, Mcap);
    for (; M < Mcap; ++M) {
      double tail = 0;
      for (int ax = 0; ax < 3; ++ax)
        for (int m = M + 1; m <= Mcap; ++m) tail += std::norm(full[ax][Mcap + m]);
      if (tail <= 1e-10 * total) break;
    }
  }
  M = std::min(M, Mcap);
  Coeffs out;
  for (int ax = 0; ax < 3; ++ax) {
    out[ax].resize(2 * M + 1);
    for (int m = -M; m <= M; ++m) out[ax][M + m] = full[ax][Mcap + m];
  }
  return ParametricCurve(std::move(out));
}

Vec3 ParametricCurve::eval(double s) const {
  Vec3 p;
  double dummy1, dummy2;
  axis_eval(c_[0], M_, s, 0, p.x, dummy1, dummy2);
  axis_eval(c_[1], M_, s, 0, p.y, dummy1, dummy2);
  axis_eval(c_[2], M_, s, 0, p.z, dummy1, dummy2);
  return p;
}

Vec3 ParametricCurve::deriv(double s) const {
  Vec3 d;
  double f, dummy;
  axis_eval(c_[0], M_, s, 1, f, d.x, dummy);
  axis_eval(c_[1], M_, s, 1, f, d.y, dummy);
  axis_eval(c_[2], M_, s, 1, f, d.z, dummy);
  return d;
}

void ParametricCurve::eval2(double s, Vec3& p, Vec3& d1, Vec3& d2) const {
  axis_eval(c_[0], M_, s, 2, p.x, d1.x, d2.x);
  axis_eval(c_[1], M_, s, 2, p.y, d1.y, d2.y);
  axis_eval(c_[2], M_, s, 2, p.z, d1.z, d2.z);
}

ParametricCurve ParametricCurve::reversed() const {
  // gamma(-s): c'_m = c_{-m}, i.e. the coefficient arrays reversed
  Coeffs r = c_;
  for (auto& ax : r) std::reverse(ax.begin(), ax.end());
  return ParametricCurve(std::move(r));
}

ParametricCurve ParametricCurve::rescaled(double scale, const Vec3& center) const {
  Coeffs r = c_;
  for (auto& ax : r)
    for (auto& z : ax) z *= scale;
  r[0][M_] -= scale * center.x;
  r[1][M_] -= scale * center.y;
  r[2][M_] -= scale * center.z;
  return ParametricCurve(std::move(r));
}

ParametricCurve::Table ParametricCurve::table(int n) const {
  Table t;
  t.p.resize(n);
  t.d.resize(n);
  for (int k = 0; k < n; ++k) {
    const double s = kTwoPi * k / n;
    double dummy;
    axis_eval(c_[0], M_, s, 1, t.p[k].x, t.d[k].x, dummy);
    axis_eval(c_[1], M_, s, 1, t.p[k].y, t.d[k].y, dummy);
    axis_eval(c_[2], M_, s, 1, t.p[k].z, t.d[k].z, dummy);
  }
  return t;
}

double ParametricCurve::min_speed(int samples) const {
  double v = kHuge;
  for (int k = 0; k < samples; ++k) v = std::min(v, norm(deriv(kTwoPi * k / samples)));
  return v;
}

double ParametricCurve::max_curvature(int samples) const {
  double kmax = 0;
  for (int k = 0; k < samples; ++k) {
    Vec3 p, d1, d2;
    eval2(kTwoPi * k / samples, p, d1, d2);
    const double sp = norm(d1);
    kmax = std::max(kmax, norm(cross(d1, d2)) / (sp * sp * sp));
  }
  return kmax;
}

double ParametricCurve::length(int samples) const {
  std::vector<double> sp(samples);
  for (int k = 0; k < samples; ++k) sp[k] = norm(deriv(kTwoPi * k / samples));
  return pairwise_sum(sp) * (kTwoPi / samples);
}

double ParametricCurve::self_distance(int samples) const {
  const int n = samples;
  Table t = table(n);
  // doubly critical pairs: chord orthogonal to both tangents. Scan sign
  // changes of the two orthogonality residuals over well-separated pairs,
  // then polish with Newton; grid distance is the fallback when the critical
  // system is degenerate (e.g. the antipodal family of a circle).
  auto g = [&](int i, int j, double& g1, double& g2) {
    const Vec3 ch = t.p[i] - t.p[j];
    g1 = dot(ch, t.d[i]);
    g2 = dot(ch, t.d[j]);
  };
  const int gap_min = n / 16;
  double best = kHuge;
  for (int i = 0; i < n; ++i) {
    for (int j = i + gap_min; j < n && j - i <= n - gap_min; ++j) {
      double a1, a2, b1, b2, c1, c2;
      g(i, j, a1, a2);
      g((i + 1) % n, j, b1, b2);
      g(i, (j + 1) % n, c1, c2);
      if (a1 * b1 > 0 || a2 * c2 > 0) continue;
      // Newton polish of (g1, g2) = 0 from the cell corner
      double s = kTwoPi * i / n, u = kTwoPi * j / n;
      bool ok = true;
      for (int it = 0; it < 12; ++it) {
        Vec3 ps, ds, dds, pu, du, ddu;
        eval2(s, ps, ds, dds);
        eval2(u, pu, du, ddu);
        const Vec3 ch = ps - pu;
        const double f1 = dot(ch, ds), f2 = dot(ch, du);
        const double j11 = dot(ds, ds) + dot(ch, dds), j12 = -dot(du, ds);
        const double j21 = dot(ds, du), j22 = -dot(du, du) + dot(ch, ddu);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-12) {
          ok = false;
          break;
        }
        const double step_s = (f1 * j22 - f2 * j12) / det;
        const double step_u = (j11 * f2 - j21 * f1) / det;
        s -= step_s;
        u -= step_u;
        if (std::abs(step_s) > 3 * kTwoPi / n || std::abs(step_u) > 3 * kTwoPi / n) {
          ok = false;  // wandered: degenerate critical set, keep grid value
          break;
        }
        if (std::abs(step_s) + std::abs(step_u) < 1e-12) break;
      }
      // refuse Newton results that drifted toward the diagonal
      if (ok && std::abs(wrap_angle(s - u)) < 0.5 * gap_min * kTwoPi / n) ok = false;
      const double d_grid = norm(t.p[i] - t.p[j]);
      best = std::min(best, ok ? norm(eval(s) - eval(u)) : d_grid);
    }
  }
  return best;
}

double min_separation(const ParametricCurve& c1, const ParametricCurve& c2, int grid) {
  ParametricCurve::Table t1 = c1.table(grid), t2 = c2.table(grid);
  double best = kHuge;
  int bi = 0, bj = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const Vec3 d = t1.p[i] - t2.p[j];
      const double q = dot(d, d);
      if (q < best) {
        best = q;
        bi = i;
        bj = j;
      }
    }
  best = std::sqrt(best);
  // Newton on |c1(s) - c2(u)|^2 from the grid argmin
  double s = kTwoPi * bi / grid, u = kTwoPi * bj / grid;
  for (int it = 0; it < 20; ++it) {
    Vec3 p1, d1, dd1, p2, d2, dd2;
    c1.eval2(s, p1, d1, dd1);
    c2.eval2(u, p2, d2, dd2);
    const Vec3 ch = p1 - p2;
    const double g1 = 2 * dot(ch, d1), g2 = -2 * dot(ch, d2);
    const double h11 = 2 * (dot(d1, d1) + dot(ch, dd1));
    const double h22 = 2 * (dot(d2, d2) - dot(ch, dd2));
    const double h12 = -2 * dot(d1, d2);
    const double det = h11 * h22 - h12 * h12;
    if (std::abs(det) < 1e-12 || h11 <= 0) break;
    const double step_s = (g1 * h22 - g2 * h12) / det;
    const double step_u = (h11 * g2 - h12 * g1) / det;
    if (std::abs(step_s) > kTwoPi / grid || std::abs(step_u) > kTwoPi / grid) break;
    s -= step_s;
    u -= step_u;
    if (std::abs(step_s) + std::abs(step_u) < 1e-14) break;
  }
  return std::min(best, norm(c1.eval(s) - c2.eval(u)));
}

Link3::Link3(ParametricCurve c1, ParametricCurve c2, ParametricCurve c3, double eps_rel)
    : comp{std::move(c1), std::move(c2), std::move(c3)} {
  const double eps = eps_rel * link_diameter(*this);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double d = triplink::min_separation(comp[i], comp[j]);
      if (d <= eps)
        throw SeparationError("link components " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) + " are closer than the separation floor");
    }
}

double link_diameter(const Link3& link) {
  Vec3 lo{kHuge, kHuge, kHuge}, hi{-kHuge, -kHuge, -kHuge};
  for (int i = 0; i < 3; ++i) {
    auto t = link[i].table(256);
    for (const Vec3& p : t.p) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
  }
  return norm(hi - lo);
}

double min_separation(const Link3& link) {
  double d = kHuge;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) d = std::min(d, min_separation(link.comp[i], link.comp[j]));
  return d;
}

double min_separation(const Link3& link, int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 2 || j > 2)
    throw DomainError("min_separation needs two distinct component indices in 0..2");
  return min_separation(link.comp[i], link.comp[j]);
}

Link3 normalized_to_ball(const Link3& link, double radius) {
  Vec3 lo{kHuge, kHuge, kHuge}, hi{-kHuge, -kHuge, -kHuge};
  for (int i = 0; i < 3; ++i) {
    auto t = link[i].table(2048);
    for (const Vec3& p : t.p) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
  }
  const Vec3 center = 0.5 * (lo + hi);
  double rmax = 0;
  for (int i = 0; i < 3; ++i) {
    auto t = link[i].table(2048);
    for (const Vec3& p : t.p) rmax = std::max(rmax, norm(p - center));
  }
  const double scale = radius / rmax;
  return Link3(link[0].rescaled(scale, center), link[1].rescaled(scale, center),
               link[2].rescaled(scale, center));
}

Link3 perturb_fourier(const Link3& link, double amplitude, std::uint64_t seed) {
  std::array<ParametricCurve, 3> out{link[0], link[1], link[2]};
  for (int i = 0; i < 3; ++i) {
    CounterRng rng(seed, std::uint64_t(i));
    const int Mp = 4;
    const int M = std::max(link[i].modes(), Mp);
    // re-center arrays at the enlarged mode count
    ParametricCurve::Coeffs grown;
    for (int ax = 0; ax < 3; ++ax) {
      grown[ax].assign(2 * M + 1, 0.0);
      const auto& src = link[i].coeffs()[ax];
      const int Ms = link[i].modes();
      for (int m = -Ms; m <= Ms; ++m) grown[ax][M + m] = src[Ms + m];
    }
    // draw the bump, high modes damped, then scale to the requested sup norm
    std::array<std::array<std::complex<double>, Mp>, 3> delta;
    double bound_sq = 0;
    for (int ax = 0; ax < 3; ++ax) {
      double axis_bound = 0;
      for (int m = 1; m <= Mp; ++m) {
        const std::complex<double> z(rng.next_gaussian(), rng.next_gaussian());
        delta[ax][m - 1] = z / double(m * m);
        axis_bound += 2.0 * std::abs(delta[ax][m - 1]);
      }
      bound_sq += axis_bound * axis_bound;
    }
    const double scale = amplitude / std::sqrt(bound_sq);
    for (int ax = 0; ax < 3; ++ax)
      for (int m = 1; m <= Mp; ++m) {
        grown[ax][M + m] += scale * delta[ax][m - 1];
        grown[ax][M - m] += std::conj(scale * delta[ax][m - 1]);
      }
    out[i] = ParametricCurve(std::move(grown));
  }
  return Link3(out[0], out[1], out[2]);
}

ParametricCurve circle_xy(const Vec3& center, double radius) {
  ParametricCurve::Coeffs c;
  for (auto& ax : c) ax.assign(3, 0.0);
  c[0][1] = center.x;
  c[1][1] = center.y;
  c[2][1] = center.z;
  c[0][2] = radius / 2.0;
  c[0][0] = radius / 2.0;
  c[1][2] = std::complex<double>(0, -radius / 2.0);
  c[1][0] = std::complex<double>(0, radius / 2.0);
  return ParametricCurve(std::move(c));
}

namespace {

// ellipse t -> center + cos(t)*u + sin(t)*v
ParametricCurve ellipse(const Vec3& center, const Vec3& u, const Vec3& v) {
  ParametricCurve::Coeffs c;
  for (auto& ax : c) ax.assign(3, 0.0);
  const std::array<double, 3> cc{center.x, center.y, center.z};
  const std::array<double, 3> uu{u.x, u.y, u.z};
  const std::array<double, 3> vv{v.x, v.y, v.z};
  for (int ax = 0; ax < 3; ++ax) {
    c[ax][1] = cc[ax];
    c[ax][2] = std::complex<double>(uu[ax] / 2.0, -vv[ax] / 2.0);
    c[ax][0] = std::conj(c[ax][2]);
  }
  return ParametricCurve(std::move(c));
}

}  // namespace

Link3 borromean_standard(double a, double b) {
  if (!(b > 0) || !(b < a)) throw DomainError("borromean_standard needs 0 < scale_b < scale_a");
  ParametricCurve l1 = ellipse({0, 0, 0}, {a, 0, 0}, {0, b, 0});
  ParametricCurve l2 = ellipse({0, 0, 0}, {0, a, 0}, {0, 0, b});
  ParametricCurve l3 = ellipse({0, 0, 0}, {0, 0, a}, {b, 0, 0});
  Link3 link(std::move(l1), std::move(l2), std::move(l3));
  // near-degenerate scale pairs put components within quadrature-hostile
  // distance; the model enforces a 1% margin rather than the generic floor
  if (min_separation(link) < 0.01 * a)
    throw SeparationError("borromean_standard: components closer than 1% of scale_a");
  return link;
}

std::pair<ParametricCurve, ParametricCurve> hopf_standard() {
  return {circle_xy({0, 0, 0}, 1.0), ellipse({1, 0, 0}, {1, 0, 0}, {0, 0, 1})};
}

std::pair<ParametricCurve, ParametricCurve> torus24_pair() {
  const double R = 2.0, r = 0.5;
  const int N = 64;
  auto make = [&](double phase) {
    std::vector<Vec3> pts(N);
    for (int k = 0; k < N; ++k) {
      const double s = kTwoPi * k / N;
      const double w = R + r * std::cos(2 * s + phase);
      pts[k] = {w * std::cos(s), w * std::sin(s), r * std::sin(2 * s + phase)};
    }
    return ParametricCurve::from_samples(pts, 3);
  };
  return {make(0.0), make(kPi)};
}

Link3 split_unlink_standard() {
  ParametricCurve c1 = circle_xy({0, 0, 0}, 1.0);
  ParametricCurve c2 = ellipse({10, 0, 0}, {0, 1, 0}, {0, 0, 1});
  ParametricCurve c3 = ellipse({20, 0, 0}, {0, 0, 1}, {1, 0, 0});
  return Link3(std::move(c1), std::move(c2), std::move(c3));
}

}  // namespace triplink
