#include "triplink/helicity.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "triplink/errors.hpp"

namespace triplink {

namespace {

// cumulative-arclength resample of a closed polyline to n uniform points
std::vector<Vec3> resample_closed(const std::vector<Vec3>& pts, int n) {
  const int m = int(pts.size());
  std::vector<double> cum(m + 1, 0.0);
  for (int k = 0; k < m; ++k) cum[k + 1] = cum[k] + norm(pts[(k + 1) % m] - pts[k]);
  const double total = cum[m];
  std::vector<Vec3> out(n);
  int seg = 0;
  for (int k = 0; k < n; ++k) {
    const double target = total * k / n;
    while (seg + 1 < m && cum[seg + 1] < target) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double t = span > 0 ? (target - cum[seg]) / span : 0.0;
    out[k] = pts[seg] + t * (pts[(seg + 1) % m] - pts[seg]);
  }
  return out;
}

double polyline_length(const std::vector<Vec3>& pts, bool closed) {
  double acc = 0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) acc += norm(pts[k + 1] - pts[k]);
  if (closed && pts.size() > 1) acc += norm(pts.front() - pts.back());
  return acc;
}

// one classical fourth-order step of x' = B(x); s_hint speeds up inversion
Vec3 rk4_step(const TubeField& field, const Vec3& x, double h, double s_hint) {
  const Vec3 k1 = field.eval(x, s_hint);
  const Vec3 k2 = field.eval(x + (0.5 * h) * k1, s_hint);
  const Vec3 k3 = field.eval(x + (0.5 * h) * k2, s_hint);
  const Vec3 k4 = field.eval(x + h * k3, s_hint);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct TubeSampler {
  // Stratified flux-weighted draw: disc offsets with density proportional to
  // the profile, start section uniform. Latin strata decouple the three axes;
  // every stratum assignment is permuted independently per tube, otherwise the
  // tubes' samples share strata and products of per-tube weights pick up a
  // cross-correlation bias.
  std::vector<int> perm_theta, perm_t, perm_phi;

  TubeSampler(std::uint64_t seed, int tube_index, int n)
      : perm_theta(n), perm_t(n), perm_phi(n) {
    for (int k = 0; k < n; ++k) perm_theta[k] = perm_t[k] = perm_phi[k] = k;
    CounterRng rng(seed, 900000 + std::uint64_t(tube_index));
    auto shuffle = [&](std::vector<int>& perm) {
      for (int k = n - 1; k > 0; --k)
        std::swap(perm[k], perm[rng.next_u64() % std::uint64_t(k + 1)]);
    };
    shuffle(perm_theta);
    shuffle(perm_t);
    shuffle(perm_phi);
  }

  TubeCoords draw(std::uint64_t seed, int tube_index, int k, double a) const {
    const int n = int(perm_t.size());
    CounterRng rng(seed, 1000000 * std::uint64_t(tube_index + 1) + std::uint64_t(k));
    const double theta = kTwoPi * (perm_theta[k] + rng.next_double()) / n;
    const double U = (perm_t[k] + rng.next_double()) / n;
    const double t = 1.0 - std::cbrt(1.0 - U);  // density 3(1-t)^2 on (rho/a)^2
    const double rho = a * std::sqrt(t);
    const double phi = kTwoPi * (perm_phi[k] + rng.next_double()) / n;
    return TubeCoords{theta, rho * std::cos(phi), rho * std::sin(phi)};
  }
};

}  // namespace

OrbitClosure integrate_orbit(const TubeField& field, const Vec3& x0, double T, double h0,
                             ShortPathSystem system) {
  const FluxTube& tube = field.tube();
  TubeCoords q0;
  // the margin keeps wall points that invert to radius - ulp out: the field
  // vanishes there and the "orbit" would be a stationary degenerate loop
  if (!tube.try_invert(x0, q0) || !(q0.rho() < tube.radius() * (1 - 1e-9)))
    throw DomainError("orbit start must lie strictly inside the tube");
  if (T < 0) throw DomainError("orbit time must be non-negative");

  OrbitClosure out;
  out.start = x0;
  out.T = T;
  out.system = system;
  out.orbit.push_back(x0);
  out.rho_max = q0.rho();
  if (T == 0) return out;  // degenerate loop, no invariant contribution

  const double transit = tube.transit_time(q0.u, q0.v);
  double h = h0 > 0 ? h0 : transit / 256;
  const double h_floor = 1e-12 * (h0 > 0 ? h0 : transit);
  const double h_cap = transit / 32;

  Vec3 x = x0;
  double s_unwrapped = q0.s;  // Newton from the running value stays on the lifted branch
  double time = 0;
  const double tol = 1e-10;
  while (time < T) {
    const double step = std::min(h, T - time);
    const Vec3 full = rk4_step(field, x, step, s_unwrapped);
    const Vec3 half = rk4_step(field, rk4_step(field, x, 0.5 * step, s_unwrapped), 0.5 * step,
                               s_unwrapped);
    const double err = norm(full - half);
    if (err > tol) {
      if (!(0.5 * step > h_floor))
        throw StepError("orbit step control collapsed below its floor");
      h = 0.5 * step;
      continue;
    }
    x = half;
    time += step;
    TubeCoords q;
    if (!tube.try_invert_near(x, s_unwrapped, q) || !(q.rho() <= tube.radius()))
      throw OutsideTubeError("orbit left its tube: integration failure");
    s_unwrapped = q.s;
    out.orbit.push_back(x);
    out.rho_max = std::max(out.rho_max, q.rho());
    if (err < 0.03 * tol) h = std::min(1.6 * step, h_cap);
  }

  out.closure_gap = norm(x - x0);
  std::vector<Vec3>& path = out.short_path;
  bool chord_ok = false;
  if (system == ShortPathSystem::chord_or_radial) {
    chord_ok = true;
    for (int k = 1; k <= 16 && chord_ok; ++k) {
      TubeCoords q;
      chord_ok = tube.try_invert(x + (k / 17.0) * (x0 - x), q) &&
                 q.rho() <= 0.999 * tube.radius();
    }
    if (chord_ok)
      for (int k = 1; k <= 16; ++k) path.push_back(x + (k / 17.0) * (x0 - x));
  }
  if (!chord_ok) {
    // radially to the core, along the shorter core arc, radially back out
    TubeCoords qe;
    tube.try_invert_near(x, s_unwrapped, qe);
    const Vec3 core_end = tube.core().eval(qe.s);
    const Vec3 core_start = tube.core().eval(q0.s);
    for (int k = 1; k <= 8; ++k) path.push_back(x + (k / 8.0) * (core_end - x));
    const double arc = std::remainder(q0.s - qe.s, kTwoPi);
    const int n_arc = std::max(2, int(std::ceil(std::abs(arc) / (kTwoPi / 96))));
    for (int k = 1; k <= n_arc; ++k) path.push_back(tube.core().eval(qe.s + arc * k / n_arc));
    for (int k = 1; k < 8; ++k) path.push_back(core_start + (k / 8.0) * (x0 - core_start));
  }
  // net winding: unwrap the lifted parameter along the closure back to the start
  double s_run = s_unwrapped;
  for (const Vec3& p : path) {
    TubeCoords q;
    if (tube.try_invert_near(p, s_run, q)) {
      s_run = q.s;
      out.rho_max = std::max(out.rho_max, q.rho());
    }
  }
  {
    TubeCoords q;
    if (tube.try_invert_near(x0, s_run, q)) s_run = q.s;
  }
  out.windings = std::lround((s_run - q0.s) / kTwoPi);

  // smooth refit: uniform-arclength resample, modes grow with loop length
  std::vector<Vec3> closed = out.orbit;
  closed.insert(closed.end(), path.begin(), path.end());
  const double loop_len = polyline_length(closed, true);
  const int modes =
      std::clamp(12 + int(4.0 * loop_len / tube.core_length()), 12, 64);
  const int nfit = std::max(1024, 8 * modes);
  out.loop = ParametricCurve::from_samples(resample_closed(closed, nfit), modes);
  for (int k = 0; k < 512; ++k) {
    TubeCoords q;
    if (tube.try_invert(out.loop->eval(kTwoPi * k / 512), q))
      out.rho_max = std::max(out.rho_max, q.rho());
  }
  return out;
}

HelicityResult estimate_H123(const std::array<FluxTube, 3>& tubes, const HelicityOptions& opts) {
  if (opts.samples < 1) throw DomainError("helicity estimate needs at least one sample");
  if (opts.T_list.empty()) throw DomainError("helicity estimate needs a non-empty T list");
  for (double T : opts.T_list)
    if (!(T > 0)) throw DomainError("helicity flow spans must be positive");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double gap = min_separation(tubes[i].core(), tubes[j].core()) - tubes[i].radius() -
                         tubes[j].radius();
      if (!(gap > 0)) throw SeparationError("tubes overlap: no positive pairwise margin");
    }

  HelicityResult out;
  out.flux = {tubes[0].flux(), tubes[1].flux(), tubes[2].flux()};
  // certify the core triple invariant; NonBorromeanError propagates when the
  // pairwise-unlinked hypothesis fails
  Link3 cores(tubes[0].core(), tubes[1].core(), tubes[2].core());
  out.core_triple = mu123_hopf(cores, opts.certify);
  if (!out.core_triple.certified)
    throw DomainError("core triple invariant failed to certify; refusing to average orbits");
  const double m = double(out.core_triple.integer);

  const int N = opts.samples;
  std::array<TubeSampler, 3> samplers{TubeSampler(opts.seed, 0, N), TubeSampler(opts.seed, 1, N),
                                      TubeSampler(opts.seed, 2, N)};
  std::array<double, 3> tau_core{}, aeff{};
  for (int i = 0; i < 3; ++i) {
    tau_core[i] = tubes[i].core_transit_time();
    aeff[i] = tubes[i].radius();
  }

  // per sample and tube: draw coords, then the flow-span-independent pieces of
  // the weight w * J / (T * tau_core * density)
  std::vector<std::array<TubeCoords, 3>> coords(N);
  std::vector<std::array<double, 3>> jacw(N), turns(N);
  for_each_index(N, Exec::parallel, [&](long k) {
    for (int i = 0; i < 3; ++i) {
      const TubeCoords q = samplers[i].draw(opts.seed, i, int(k), aeff[i]);
      coords[k][i] = q;
      const double f = tube_profile(q.rho(), tubes[i].radius(), tubes[i].flux());
      jacw[k][i] = tubes[i].jacobian(q.s, q.u, q.v) * kTwoPi * tubes[i].flux() /
                   (tau_core[i] * f);
      turns[k][i] = tau_core[i] * f / tubes[i].effective_length(q.u, q.v);
    }
  });

  for (double T : opts.T_list) {
    HelicityPoint pt;
    pt.T = T;
    std::vector<double> q(N);
    for (int k = 0; k < N; ++k) {
      double prod = m;
      for (int i = 0; i < 3; ++i)
        prod *= double(std::lround(T * turns[k][i])) * jacw[k][i] / T;
      q[k] = prod;
    }
    pt.estimate = pairwise_sum(q) / N;
    if (N > 1) {
      std::vector<double> dev(N);
      for (int k = 0; k < N; ++k) dev[k] = (q[k] - pt.estimate) * (q[k] - pt.estimate);
      pt.stderr_ = std::sqrt(pairwise_sum(dev) / (double(N) * (N - 1)));
    }

    // optional slow path: re-derive a handful of per-sample invariants from
    // actually integrated, closed, refit loops
    const int V = std::min(opts.validate_samples, N);
    for (int k = 0; k < V; ++k) {
      std::array<OrbitClosure, 3> loops;
      bool degenerate = false;
      for (int i = 0; i < 3; ++i) {
        TubeField field = make_tube_field(tubes[i]);
        loops[i] = integrate_orbit(field, tubes[i].point(coords[k][i]), T * tau_core[i], 0,
                                   opts.system);
        degenerate = degenerate || !loops[i].loop.has_value();
      }
      if (degenerate) continue;
      try {
        Link3 trio(*loops[0].loop, *loops[1].loop, *loops[2].loop);
        InvariantReport rep = mu123_hopf(trio, opts.certify);
        const double expect =
            m * double(loops[0].windings) * double(loops[1].windings) * double(loops[2].windings);
        if (!rep.certified || double(rep.integer) != expect) ++out.validation_failures;
      } catch (const NonBorromeanError&) {
        ++pt.aborted_samples;  // pairwise misclassification: drop this cross-check
      }
    }
    out.series.push_back(pt);
  }
  return out;
}

VolumeMap::VolumeMap(std::function<Vec3(const Vec3&)> f, std::string name)
    : f_(std::move(f)), name_(std::move(name)) {
  // sampled Jacobian determinant must be 1: volume distortion is rejected here
  CounterRng rng(20260301, 11);
  const double h = 1e-4;
  for (int k = 0; k < 48; ++k) {
    const Vec3 x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec3 dx = (0.5 / h) * (f_(x + Vec3{h, 0, 0}) - f_(x + Vec3{-h, 0, 0}));
    const Vec3 dy = (0.5 / h) * (f_(x + Vec3{0, h, 0}) - f_(x + Vec3{0, -h, 0}));
    const Vec3 dz = (0.5 / h) * (f_(x + Vec3{0, 0, h}) - f_(x + Vec3{0, 0, -h}));
    if (std::abs(triple(dx, dy, dz) - 1.0) > 1e-6)
      throw DomainError("deformation is not volume-preserving near sampled point");
  }
}

VolumeMap VolumeMap::identity() {
  return VolumeMap([](const Vec3& x) { return x; }, "identity");
}

VolumeMap VolumeMap::shear(int moved_axis, int driver_axis, double amplitude, double frequency) {
  if (moved_axis < 0 || moved_axis > 2 || driver_axis < 0 || driver_axis > 2 ||
      moved_axis == driver_axis)
    throw DomainError("shear needs two distinct axes in 0..2");
  auto fn = [=](const Vec3& x) {
    const double d = driver_axis == 0 ? x.x : driver_axis == 1 ? x.y : x.z;
    Vec3 out = x;
    (moved_axis == 0 ? out.x : moved_axis == 1 ? out.y : out.z) +=
        amplitude * std::sin(frequency * d);
    return out;
  };
  return VolumeMap(fn, "shear");
}

VolumeMap VolumeMap::from_function(std::function<Vec3(const Vec3&)> f, std::string name) {
  return VolumeMap(std::move(f), std::move(name));
}

VolumeMap VolumeMap::then(const VolumeMap& next) const {
  auto a = f_, b = next.f_;
  return VolumeMap([a, b](const Vec3& x) { return b(a(x)); }, name_ + "." + next.name_);
}

FluxTube map_tube(const FluxTube& tube, const VolumeMap& map, int samples) {
  if (samples < 64) throw DomainError("tube mapping needs at least 64 core samples");
  std::vector<Vec3> pts(samples);
  for (int k = 0; k < samples; ++k) pts[k] = map(tube.core().eval(kTwoPi * k / samples));
  return FluxTube(ParametricCurve::from_samples(pts), tube.radius(), tube.flux());
}

SdiffReport sdiff_invariance_test(const std::array<FluxTube, 3>& tubes, const VolumeMap& map,
                                  const HelicityOptions& opts) {
  SdiffReport rep;
  std::array<FluxTube, 3> mapped{map_tube(tubes[0], map), map_tube(tubes[1], map),
                                 map_tube(tubes[2], map)};
  rep.before = estimate_H123(tubes, opts);
  rep.after = estimate_H123(mapped, opts);
  const HelicityPoint& b = rep.before.series.back();
  const HelicityPoint& a = rep.after.series.back();
  rep.difference = a.estimate - b.estimate;
  rep.combined_stderr = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
  return rep;
}

}  // namespace triplink
