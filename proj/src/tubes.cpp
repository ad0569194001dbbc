#include "triplink/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triplink/errors.hpp"

namespace triplink {

namespace {

std::complex<double> dft_mode(const std::vector<Vec3>& pts, int axis, int m) {
  const int N = int(pts.size());
  std::complex<double> acc = 0;
  for (int k = 0; k < N; ++k) {
    const double ang = -kTwoPi * m * k / N;
    const Vec3& p = pts[k];
    const double v = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
    acc += v * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc / double(N);
}

// reflect v in the plane with (unnormalized) normal n
Vec3 reflect(const Vec3& v, const Vec3& n, double nn) { return v - (2.0 * dot(v, n) / nn) * n; }

}  // namespace

TrigSeries3 TrigSeries3::fit(const std::vector<Vec3>& samples, int modes) {
  const int N = int(samples.size());
  if (N < 9) throw DomainError("trig fit needs at least 9 samples");
  const int Mcap = (N - 1) / 2;
  Coeffs full;
  for (int ax = 0; ax < 3; ++ax) {
    full[ax].resize(2 * Mcap + 1);
    for (int m = -Mcap; m <= Mcap; ++m) full[ax][Mcap + m] = dft_mode(samples, ax, m);
  }
  int M = modes;
  if (M < 0) {
    // include the mean in the scale so constant samples fit with minimal degree
    double total = 0;
    for (int ax = 0; ax < 3; ++ax)
      for (int m = 0; m <= Mcap; ++m) total += std::norm(full[ax][Mcap + m]);
    M = std::min(4, Mcap);
    for (; M < Mcap; ++M) {
      double tail = 0;
      for (int ax = 0; ax < 3; ++ax)
        for (int m = M + 1; m <= Mcap; ++m) tail += std::norm(full[ax][Mcap + m]);
      if (tail <= 1e-12 * std::max(total, 1e-300)) break;
    }
  }
  if (M > Mcap) throw DomainError("trig fit: more modes requested than samples support");
  TrigSeries3 out;
  out.M = M;
  for (int ax = 0; ax < 3; ++ax) {
    out.c[ax].resize(2 * M + 1);
    for (int m = -M; m <= M; ++m) {
      // enforce conjugate symmetry so evaluations are exactly real
      const auto sym = 0.5 * (full[ax][Mcap + m] + std::conj(full[ax][Mcap - m]));
      out.c[ax][M + m] = sym;
    }
  }
  return out;
}

Vec3 TrigSeries3::eval(double s) const {
  Vec3 out{0, 0, 0};
  for (int ax = 0; ax < 3; ++ax) {
    double f = c[ax][M].real();
    for (int m = 1; m <= M; ++m) {
      const double re = c[ax][M + m].real(), im = c[ax][M + m].imag();
      f += 2.0 * (re * std::cos(m * s) - im * std::sin(m * s));
    }
    (ax == 0 ? out.x : ax == 1 ? out.y : out.z) = f;
  }
  return out;
}

Vec3 TrigSeries3::deriv(double s) const {
  Vec3 out{0, 0, 0};
  for (int ax = 0; ax < 3; ++ax) {
    double d = 0;
    for (int m = 1; m <= M; ++m) {
      const double re = c[ax][M + m].real(), im = c[ax][M + m].imag();
      d += 2.0 * m * (-re * std::sin(m * s) - im * std::cos(m * s));
    }
    (ax == 0 ? out.x : ax == 1 ? out.y : out.z) = d;
  }
  return out;
}

double tube_profile(double rho, double a, double flux) {
  if (rho >= a) return 0;
  const double t = 1.0 - (rho / a) * (rho / a);
  return 3.0 * flux / (kPi * a * a) * t * t;
}

FluxTube::FluxTube(ParametricCurve core, double radius, double flux, int frame_samples)
    : core_(std::move(core)), a_(radius), flux_(flux) {
  if (!(a_ > 0)) throw DomainError("tube radius must be positive");
  if (!(flux_ >= 0) || !std::isfinite(flux_))
    throw DomainError("tube flux must be finite and non-negative");
  if (frame_samples < 16) throw DomainError("tube frame needs at least 16 samples");
  length_ = core_.length();
  const double reach = std::min(1.0 / core_.max_curvature(), 0.5 * core_.self_distance());
  if (!(a_ < 0.98 * reach))
    throw ReachError("tube radius exceeds 98% of the core reach (curvature/self-distance)");

  // rotation-minimizing transport of an initial normal by double reflection
  const int n = frame_samples;
  const auto tab = core_.table(n);
  std::vector<Vec3> tang(n), nrm(n);
  for (int k = 0; k < n; ++k) tang[k] = normalized(tab.d[k]);
  {
    // least-aligned coordinate axis, projected into the first normal plane;
    // the tolerance band keeps the pick stable when alignments nearly tie
    const Vec3 t0 = tang[0];
    const double ax = std::abs(t0.x), ay = std::abs(t0.y), az = std::abs(t0.z);
    const double lo = std::min({ax, ay, az}) + 1e-9;
    const Vec3 seed = ax <= lo ? Vec3{1, 0, 0} : ay <= lo ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
    nrm[0] = normalized(seed - dot(seed, t0) * t0);
  }
  for (int k = 0; k + 1 < n; ++k) {
    const Vec3 v1 = tab.p[k + 1] - tab.p[k];
    const double c1 = dot(v1, v1);
    const Vec3 rL = reflect(nrm[k], v1, c1);
    const Vec3 tL = reflect(tang[k], v1, c1);
    const Vec3 v2 = tang[k + 1] - tL;
    const double c2 = dot(v2, v2);
    nrm[k + 1] = c2 > 1e-300 ? reflect(rL, v2, c2) : rL;
  }
  // transport once more across the closing edge to measure the holonomy angle
  Vec3 wrap;
  {
    const Vec3 v1 = tab.p[0] - tab.p[n - 1];
    const double c1 = dot(v1, v1);
    const Vec3 rL = reflect(nrm[n - 1], v1, c1);
    const Vec3 tL = reflect(tang[n - 1], v1, c1);
    const Vec3 v2 = tang[0] - tL;
    const double c2 = dot(v2, v2);
    wrap = c2 > 1e-300 ? reflect(rL, v2, c2) : rL;
  }
  const Vec3 b0 = cross(tang[0], nrm[0]);
  const double holonomy = std::atan2(dot(wrap, b0), dot(wrap, nrm[0]));
  // absorb the holonomy as a uniform twist so sample n would match sample 0
  for (int k = 0; k < n; ++k) {
    const double ang = -holonomy * k / n;
    const Vec3 b = cross(tang[k], nrm[k]);
    nrm[k] = std::cos(ang) * nrm[k] + std::sin(ang) * b;
  }
  n1_series_ = TrigSeries3::fit(nrm);
}

void FluxTube::frame(double s, Vec3& t, Vec3& n1, Vec3& n2) const {
  t = normalized(core_.deriv(s));
  const Vec3 raw = n1_series_.eval(s);
  n1 = normalized(raw - dot(raw, t) * t);
  n2 = cross(t, n1);
}

void FluxTube::frame_jet(double s, Vec3& t, Vec3& n1, Vec3& n2, Vec3& dt, Vec3& dn1,
                         Vec3& dn2) const {
  Vec3 p, d1, d2;
  core_.eval2(s, p, d1, d2);
  const double sp = norm(d1);
  t = (1.0 / sp) * d1;
  dt = (1.0 / sp) * d2 - (dot(d1, d2) / (sp * sp * sp)) * d1;
  const Vec3 raw = n1_series_.eval(s);
  const Vec3 draw = n1_series_.deriv(s);
  const Vec3 w = raw - dot(raw, t) * t;
  const Vec3 dw = draw - (dot(draw, t) + dot(raw, dt)) * t - dot(raw, t) * dt;
  const double wn = norm(w);
  n1 = (1.0 / wn) * w;
  dn1 = (1.0 / wn) * dw - (dot(w, dw) / (wn * wn * wn)) * w;
  n2 = cross(t, n1);
  dn2 = cross(dt, n1) + cross(t, dn1);
}

Vec3 FluxTube::point(double s, double u, double v) const {
  Vec3 t, n1, n2;
  frame(s, t, n1, n2);
  return core_.eval(s) + u * n1 + v * n2;
}

double FluxTube::jacobian(double s, double u, double v) const {
  Vec3 t, n1, n2, dt, dn1, dn2;
  frame_jet(s, t, n1, n2, dt, dn1, dn2);
  return norm(core_.deriv(s)) + u * dot(t, dn1) + v * dot(t, dn2);
}

bool FluxTube::try_invert_near(const Vec3& x, double s_hint, TubeCoords& out) const {
  double s = s_hint;
  // Newton on (x - C(s)).C'(s) = 0; the derivative stays negative inside the
  // reach, so plain iteration with a step clamp is safe
  bool settled = false;
  for (int it = 0; it < 60; ++it) {
    Vec3 p, d1, d2;
    core_.eval2(s, p, d1, d2);
    const Vec3 r = x - p;
    const double g = dot(r, d1);
    const double gp = dot(r, d2) - dot(d1, d1);
    if (!(gp < -1e-300)) return false;
    double step = -g / gp;
    step = std::clamp(step, -0.5, 0.5);
    s += step;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(s))) {
      if (settled) break;
      settled = true;
    } else {
      settled = false;
    }
  }
  if (!settled) return false;
  Vec3 t, n1, n2;
  frame(s, t, n1, n2);
  const Vec3 r = x - core_.eval(s);
  out.s = s;
  out.u = dot(r, n1);
  out.v = dot(r, n2);
  return out.rho() <= a_;
}

bool FluxTube::try_invert(const Vec3& x, TubeCoords& out) const {
  const int grid = std::max(64, 8 * core_.modes());
  double best_s = 0, best_d = std::numeric_limits<double>::max();
  const auto tab = core_.table(grid);
  for (int k = 0; k < grid; ++k) {
    const double d = norm(x - tab.p[k]);
    if (d < best_d) {
      best_d = d;
      best_s = kTwoPi * k / grid;
    }
  }
  return try_invert_near(x, best_s, out);
}

TubeCoords FluxTube::invert(const Vec3& x) const {
  TubeCoords q;
  if (!try_invert(x, q)) throw OutsideTubeError("point is outside the tube");
  return q;
}

bool FluxTube::contains(const Vec3& x) const {
  TubeCoords q;
  return try_invert(x, q);
}

double FluxTube::effective_length(double u, double v, int n) const {
  if (n < 16) throw DomainError("effective length needs at least 16 nodes");
  double acc = 0;
  for (int k = 0; k < n; ++k) acc += jacobian(kTwoPi * k / n, u, v);
  return acc * kTwoPi / n;
}

double FluxTube::transit_time(double u, double v) const {
  const double rho = std::sqrt(u * u + v * v);
  const double f = tube_profile(rho, a_, flux_);
  if (!(f > 0))
    throw DomainError("transit time needs a positive field: inside the boundary, nonzero flux");
  return effective_length(u, v) / f;
}

Vec3 TubeField::eval_coords(const TubeCoords& q) const {
  const double f = tube_profile(q.rho(), tube_.radius(), tube_.flux());
  if (f == 0) return Vec3{0, 0, 0};
  Vec3 t, n1, n2, dt, dn1, dn2;
  tube_.frame_jet(q.s, t, n1, n2, dt, dn1, dn2);
  const Vec3 dxds = tube_.core().deriv(q.s) + q.u * dn1 + q.v * dn2;
  const double J = dot(t, dxds);
  return (f / J) * dxds;
}

Vec3 TubeField::eval(const Vec3& x) const {
  TubeCoords q;
  if (!tube_.try_invert(x, q)) return Vec3{0, 0, 0};
  return eval_coords(q);
}

Vec3 TubeField::eval(const Vec3& x, double s_hint) const {
  TubeCoords q;
  if (!tube_.try_invert_near(x, s_hint, q)) return Vec3{0, 0, 0};
  return eval_coords(q);
}

double TubeField::section_flux(double s0, int nr, int nphi) const {
  if (nr < 2 || nphi < 4) throw DomainError("section flux needs nr >= 2, nphi >= 4");
  Vec3 t, n1, n2;
  tube_.frame(s0, t, n1, n2);
  std::vector<double> rho(nr), w(nr);
  gauss_legendre(nr, rho, w);
  std::vector<double> terms(std::size_t(nr) * nphi);
  const double a = tube_.radius();
  for (int i = 0; i < nr; ++i) {
    const double r = 0.5 * a * (rho[i] + 1.0);
    const double wr = 0.5 * a * w[i];
    for (int j = 0; j < nphi; ++j) {
      const double phi = kTwoPi * j / nphi;
      const Vec3 x = tube_.point(s0, r * std::cos(phi), r * std::sin(phi));
      terms[std::size_t(i) * nphi + j] = wr * (kTwoPi / nphi) * r * dot(eval(x, s0), t);
    }
  }
  return pairwise_sum(terms);
}

TubeField make_tube_field(const FluxTube& tube) { return TubeField(tube); }

double divergence_fd(const TubeField& field, const Vec3& x, double h) {
  if (h <= 0) h = 7e-4 * field.tube().radius();
  double acc = 0;
  for (int ax = 0; ax < 3; ++ax) {
    const Vec3 e{ax == 0 ? 1.0 : 0.0, ax == 1 ? 1.0 : 0.0, ax == 2 ? 1.0 : 0.0};
    auto comp = [&](double step) {
      const Vec3 b = field.eval(x + step * e);
      return ax == 0 ? b.x : ax == 1 ? b.y : b.z;
    };
    acc += (-comp(2 * h) + 8 * comp(h) - 8 * comp(-h) + comp(-2 * h)) / (12 * h);
  }
  return acc;
}

}  // namespace triplink
