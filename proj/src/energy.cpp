#include "triplink/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "triplink/curves.hpp"
#include "triplink/errors.hpp"

namespace triplink {

namespace {

// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev initial guess, standard interval [-1, 1]
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 60; ++it) {
      double p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1);
    x[i] = 0.5 * (1 - t);  // descending roots -> ascending nodes on [0, 1]
    w[i] = 1.0 / ((1 - t * t) * dp * dp);
  }
}

double norm_sum(const std::map<std::string, NormEstimate>& norms) {
  double s = 0;
  for (const auto& [k, v] : norms) s += v.value;
  return s;
}

}  // namespace

double tube_energy_L2(const TubeField& field, const EnergyQuadrature& quad) {
  if (quad.n_s < 8 || quad.n_r < 2 || quad.n_phi < 4)
    throw DomainError("energy quadrature needs n_s >= 8, n_r >= 2, n_phi >= 4");
  const FluxTube& tube = field.tube();
  const double a = tube.radius();
  std::vector<double> xr, wr;
  gauss_legendre01(quad.n_r, xr, wr);

  std::vector<double> per_s(quad.n_s);
  for_each_index(quad.n_s, quad.exec, [&](std::int64_t is) {
    const double s = kTwoPi * double(is) / quad.n_s;
    Vec3 t, n1, n2, dt, dn1, dn2;
    tube.frame_jet(s, t, n1, n2, dt, dn1, dn2);
    Vec3 p, d1, d2;
    tube.core().eval2(s, p, d1, d2);
    double acc = 0;
    for (int ir = 0; ir < quad.n_r; ++ir) {
      const double rho = a * xr[ir];
      const double f = tube_profile(rho, a, tube.flux());
      const double wrho = wr[ir] * a * rho;  // radial weight including the area factor
      for (int ip = 0; ip < quad.n_phi; ++ip) {
        const double phi = kTwoPi * ip / quad.n_phi;
        const double u = rho * std::cos(phi), v = rho * std::sin(phi);
        const Vec3 xs = d1 + u * dn1 + v * dn2;
        const double J = dot(t, xs);
        acc += wrho * f * f * dot(xs, xs) / J;
      }
    }
    per_s[is] = acc * (kTwoPi / quad.n_phi);
  });
  return pairwise_sum(per_s) * (kTwoPi / quad.n_s);
}

double energy_L2(const std::array<TubeField, 3>& fields, const EnergyQuadrature& quad) {
  double e = 0;
  for (const auto& f : fields) e += tube_energy_L2(f, quad);
  return e;
}

double sup_kernel(double r) {
  if (!(r > 0)) throw DomainError("kernel sup needs a positive radius");
  return 1.0 / (4 * kPi * r * r);
}

double sup_kernel_slope(const std::vector<double>& r_list) {
  if (r_list.size() < 2) throw DomainError("slope fit needs at least two radii");
  std::vector<double> lx, ly;
  for (double r : r_list) {
    lx.push_back(std::log(r));
    ly.push_back(std::log(sup_kernel(r)));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0)) throw DomainError("slope fit needs at least two distinct radii");
  return sxy / sxx;
}

double tube_gap(const std::array<FluxTube, 3>& tubes) {
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double g = min_separation(tubes[i].core(), tubes[j].core()) - tubes[i].radius() -
                 tubes[j].radius();
      gap = std::min(gap, g);
    }
  }
  return gap;
}

namespace {

struct ChartDraw {
  double s, u, v;
};

// Uniform draw in chart measure ds du dv: s uniform on the circle, (u, v)
// uniform on the disc of radius a.
ChartDraw draw_chart(CounterRng& rng, double a) {
  const double s = kTwoPi * rng.next_double();
  const double rho = a * std::sqrt(rng.next_double());
  const double phi = kTwoPi * rng.next_double();
  return {s, rho * std::cos(phi), rho * std::sin(phi)};
}

// Position and chart volume factor in one pass over the tube series.
void sample_tube(const FluxTube& t, const ChartDraw& q, Vec3& x, double& J) {
  Vec3 tv, n1, n2, dtv, dn1, dn2;
  t.frame_jet(q.s, tv, n1, n2, dtv, dn1, dn2);
  Vec3 p, d1, d2;
  t.core().eval2(q.s, p, d1, d2);
  x = p + q.u * n1 + q.v * n2;
  J = dot(tv, d1 + q.u * dn1 + q.v * dn2);
}

NormEstimate mc_norm(std::vector<double>& vals, double chart_volume) {
  const std::int64_t n = std::int64_t(vals.size());
  const double mean = pairwise_sum(vals) / double(n);
  for (auto& v : vals) v = (v - mean) * (v - mean);
  const double var = pairwise_sum(vals) / double(n - 1);
  const double se_mean = std::sqrt(var / double(n));
  const double m2 = mean * chart_volume;  // estimate of the squared norm
  NormEstimate out;
  out.value = std::sqrt(std::max(0.0, m2));
  out.stderr_ = out.value > 0 ? 0.5 * se_mean * chart_volume / out.value : 0.0;
  return out;
}

}  // namespace

std::map<std::string, NormEstimate> green_l2_norms(const std::array<FluxTube, 3>& tubes,
                                                   const GreenNormOptions& opts) {
  if (opts.samples_pair < 2 || opts.samples_wedge < 2)
    throw DomainError("norm estimation needs at least two samples per term");
  if (!(tube_gap(tubes) > 0))
    throw SeparationError("kernel norms need pairwise disjoint tubes");

  std::array<double, 3> chart_vol;
  for (int i = 0; i < 3; ++i)
    chart_vol[i] = kTwoPi * kPi * tubes[i].radius() * tubes[i].radius();

  std::map<std::string, NormEstimate> out;

  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
  const std::array<std::string, 3> pair_tag{"w12", "w23", "w31"};
  for (int p = 0; p < 3; ++p) {
    const auto [i, j] = pairs[p];
    std::vector<double> vals(opts.samples_pair);
    for_each_index(opts.samples_pair, opts.exec, [&](std::int64_t k) {
      CounterRng rng(opts.seed, (std::uint64_t(1) << 40) | (std::uint64_t(p) << 32) |
                                    std::uint64_t(k));
      Vec3 xi, xj;
      double Ji, Jj;
      sample_tube(tubes[i], draw_chart(rng, tubes[i].radius()), xi, Ji);
      sample_tube(tubes[j], draw_chart(rng, tubes[j].radius()), xj, Jj);
      const double kap = sup_kernel(norm(xj - xi));
      vals[k] = kap * kap * Ji * Jj;
    });
    out[pair_tag[p]] = mc_norm(vals, chart_vol[i] * chart_vol[j]);
  }

  // wedge term meeting at tube i: kernels to the two other tubes, full product
  const std::array<std::string, 3> wedge_tag{"wedge1", "wedge2", "wedge3"};
  for (int i = 0; i < 3; ++i) {
    const int prev = (i + 2) % 3, next = (i + 1) % 3;
    std::vector<double> vals(opts.samples_wedge);
    for_each_index(opts.samples_wedge, opts.exec, [&](std::int64_t k) {
      CounterRng rng(opts.seed, (std::uint64_t(2) << 40) | (std::uint64_t(i) << 32) |
                                    std::uint64_t(k));
      std::array<Vec3, 3> x;
      std::array<double, 3> J;
      for (int t = 0; t < 3; ++t)
        sample_tube(tubes[t], draw_chart(rng, tubes[t].radius()), x[t], J[t]);
      const double kap = sup_kernel(norm(x[prev] - x[i])) * sup_kernel(norm(x[next] - x[i]));
      vals[k] = kap * kap * J[0] * J[1] * J[2];
    });
    out[wedge_tag[i]] = mc_norm(vals, chart_vol[0] * chart_vol[1] * chart_vol[2]);
  }
  return out;
}

namespace {

struct VoxelDomain {
  int nx = 0, ny = 0, nz = 0;
  double h = 0;
  std::vector<std::int32_t> id;  // -1 outside, else compact index
  std::int64_t n = 0;

  std::int64_t cell(int i, int j, int k) const {
    return (std::int64_t(k) * ny + j) * nx + i;
  }
};

VoxelDomain voxelize(const std::function<bool(const Vec3&)>& inside, const Vec3& lo,
                     const Vec3& hi, double h) {
  if (!(h > 0)) throw DomainError("voxel size must be positive");
  VoxelDomain d;
  d.h = h;
  d.nx = std::max(1, int(std::lround((hi.x - lo.x) / h)));
  d.ny = std::max(1, int(std::lround((hi.y - lo.y) / h)));
  d.nz = std::max(1, int(std::lround((hi.z - lo.z) / h)));
  if (std::int64_t(d.nx) * d.ny * d.nz > std::int64_t(64) * 1024 * 1024)
    throw DomainError("voxelization too large; coarsen the grid or shrink the box");
  d.id.assign(std::int64_t(d.nx) * d.ny * d.nz, -1);
  std::int64_t count = 0;
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        Vec3 c{lo.x + (i + 0.5) * h, lo.y + (j + 0.5) * h, lo.z + (k + 0.5) * h};
        if (inside(c)) d.id[d.cell(i, j, k)] = std::int32_t(count++);
      }
  d.n = count;
  return d;
}

// Compact neighbor table; throws when the voxel set is empty, trivial, or
// disconnected (degenerate discretizations make the eigenvalue meaningless).
std::vector<std::array<std::int32_t, 6>> neighbor_table(const VoxelDomain& d) {
  if (d.n < 2) throw DomainError("voxelization resolves fewer than two cells");
  std::vector<std::array<std::int32_t, 6>> nbr(d.n, {-1, -1, -1, -1, -1, -1});
  for (int k = 0; k < d.nz; ++k)
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        std::int32_t p = d.id[d.cell(i, j, k)];
        if (p < 0) continue;
        auto link = [&](int q, int slot) {
          if (q >= 0) nbr[p][slot] = std::int32_t(q);
        };
        link(i > 0 ? d.id[d.cell(i - 1, j, k)] : -1, 0);
        link(i + 1 < d.nx ? d.id[d.cell(i + 1, j, k)] : -1, 1);
        link(j > 0 ? d.id[d.cell(i, j - 1, k)] : -1, 2);
        link(j + 1 < d.ny ? d.id[d.cell(i, j + 1, k)] : -1, 3);
        link(k > 0 ? d.id[d.cell(i, j, k - 1)] : -1, 4);
        link(k + 1 < d.nz ? d.id[d.cell(i, j, k + 1)] : -1, 5);
      }
  // connectivity sweep
  std::vector<char> seen(d.n, 0);
  std::queue<std::int32_t> bfs;
  bfs.push(0);
  seen[0] = 1;
  std::int64_t reached = 1;
  while (!bfs.empty()) {
    std::int32_t p = bfs.front();
    bfs.pop();
    for (std::int32_t q : nbr[p])
      if (q >= 0 && !seen[q]) {
        seen[q] = 1;
        ++reached;
        bfs.push(q);
      }
  }
  if (reached != d.n) throw DomainError("voxelized domain is disconnected");
  return nbr;
}

struct NeumannOperator {
  const std::vector<std::array<std::int32_t, 6>>* nbr;
  double inv_h2;
  Exec exec;

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const auto& nb = *nbr;
    for_each_index(std::int64_t(nb.size()), exec, [&](std::int64_t p) {
      double acc = 0;
      int deg = 0;
      for (std::int32_t q : nb[p])
        if (q >= 0) {
          acc += x[q];
          ++deg;
        }
      y[p] = (deg * x[p] - acc) * inv_h2;
    });
  }
};

double dotv(const std::vector<double>& a, const std::vector<double>& b,
            std::vector<double>& scratch, Exec exec) {
  scratch.resize(a.size());
  for_each_index(std::int64_t(a.size()), exec, [&](std::int64_t i) { scratch[i] = a[i] * b[i]; });
  return pairwise_sum(scratch);
}

void project_out_constant(std::vector<double>& v, std::vector<double>& scratch, Exec exec) {
  scratch.assign(v.size(), 1.0);
  const double mean = dotv(v, scratch, scratch, exec) / double(v.size());
  for_each_index(std::int64_t(v.size()), exec, [&](std::int64_t i) { v[i] -= mean; });
}

// Conjugate gradients for A y = b with b orthogonal to constants; A is
// positive semidefinite with constants as its kernel, so the iteration stays
// in the orthogonal complement.
void cg_solve(const NeumannOperator& A, const std::vector<double>& b, std::vector<double>& y,
              double rel_tol, int max_iter, std::vector<double>& scratch) {
  const std::int64_t n = std::int64_t(b.size());
  y.assign(n, 0.0);
  std::vector<double> r = b, p = b, Ap(n);
  double rr = dotv(r, r, scratch, A.exec);
  const double stop = rel_tol * rel_tol * rr;
  for (int it = 0; it < max_iter && rr > stop; ++it) {
    A.apply(p, Ap);
    const double pAp = dotv(p, Ap, scratch, A.exec);
    if (!(pAp > 0)) break;
    const double alpha = rr / pAp;
    for_each_index(n, A.exec, [&](std::int64_t i) {
      y[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    });
    const double rr_new = dotv(r, r, scratch, A.exec);
    const double beta = rr_new / rr;
    rr = rr_new;
    for_each_index(n, A.exec, [&](std::int64_t i) { p[i] = r[i] + beta * p[i]; });
  }
}

double lambda1_from_nbr(const std::vector<std::array<std::int32_t, 6>>& nbr, double h,
                        Exec exec) {
  const std::int64_t n = std::int64_t(nbr.size());
  NeumannOperator A{&nbr, 1.0 / (h * h), exec};
  std::vector<double> v(n), y, Av(n), scratch;
  CounterRng rng(20260401, 5);
  for (auto& x : v) x = rng.next_gaussian();
  project_out_constant(v, scratch, exec);
  double nv = std::sqrt(dotv(v, v, scratch, exec));
  for_each_index(n, exec, [&](std::int64_t i) { v[i] *= 1.0 / nv; });

  double lambda = 0;
  const int cg_iters = std::max(400, int(6 * std::cbrt(double(n))));
  for (int it = 0; it < 40; ++it) {
    cg_solve(A, v, y, 1e-7, cg_iters, scratch);
    project_out_constant(y, scratch, exec);
    const double ny = std::sqrt(dotv(y, y, scratch, exec));
    if (!(ny > 0)) throw DomainError("inverse iteration collapsed onto the constant mode");
    for_each_index(n, exec, [&](std::int64_t i) { v[i] = y[i] / ny; });
    A.apply(v, Av);
    const double next = dotv(v, Av, scratch, exec);
    if (it > 2 && std::abs(next - lambda) <= 1e-7 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

double lambda1_neumann_box(const std::function<bool(const Vec3&)>& inside, const Vec3& lo,
                           const Vec3& hi, double voxel_h, Exec exec) {
  VoxelDomain d = voxelize(inside, lo, hi, voxel_h);
  auto nbr = neighbor_table(d);
  return lambda1_from_nbr(nbr, voxel_h, exec);
}

double lambda1_neumann_proxy(const FluxTube& tube, double voxel_h, Exec exec) {
  if (!(voxel_h > 0)) throw DomainError("voxel size must be positive");
  if (voxel_h > 2 * tube.radius() / 8)
    throw DomainError("voxelization too coarse: needs >= 8 voxels across the tube diameter");

  // bounding box from core samples padded by the radius
  const auto tab = tube.core().table(512);
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const Vec3& p : tab.p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double pad = tube.radius() + 2 * voxel_h;
  lo = lo - Vec3{pad, pad, pad};
  hi = hi + Vec3{pad, pad, pad};

  // coarse distance prefilter before exact chart membership
  const int nc = int(tab.p.size());
  const double spacing = tube.core_length() / nc;
  const double slack = 0.5 * spacing + 0.87 * voxel_h;
  auto inside = [&](const Vec3& x) {
    double best = 1e300;
    int argmin = 0;
    for (int i = 0; i < nc; ++i) {
      const Vec3 dxv = x - tab.p[i];
      const double d2 = dot(dxv, dxv);
      if (d2 < best) {
        best = d2;
        argmin = i;
      }
    }
    const double dist = std::sqrt(best);
    if (dist > tube.radius() + slack) return false;
    TubeCoords q;
    if (tube.try_invert_near(x, kTwoPi * argmin / nc, q)) return q.rho() < tube.radius();
    return tube.contains(x);
  };
  return lambda1_neumann_box(inside, lo, hi, voxel_h, exec);
}

double lambda1_neumann_product(const std::array<FluxTube, 3>& tubes, double voxel_h, Exec exec) {
  double lam = std::numeric_limits<double>::infinity();
  for (const auto& t : tubes) lam = std::min(lam, lambda1_neumann_proxy(t, voxel_h, exec));
  return lam;
}

std::array<FluxTube, 3> dilate_tubes(const std::array<FluxTube, 3>& tubes, double lambda) {
  if (!(lambda > 0)) throw DomainError("dilation factor must be positive");
  auto make = [&](const FluxTube& t) {
    return FluxTube(t.core().rescaled(lambda, {0, 0, 0}), lambda * t.radius(), t.flux());
  };
  return {make(tubes[0]), make(tubes[1]), make(tubes[2])};
}

BoundReport compute_bound_report(const std::array<FluxTube, 3>& tubes, const BoundOptions& opts) {
  BoundReport rep;
  rep.r_T = tube_gap(tubes);
  if (!(rep.r_T > 0)) throw SeparationError("bound report needs pairwise disjoint tubes");

  const std::array<TubeField, 3> fields{make_tube_field(tubes[0]), make_tube_field(tubes[1]),
                                        make_tube_field(tubes[2])};
  rep.E2 = energy_L2(fields, opts.quad);

  auto norms = green_l2_norms(tubes, opts.norms);
  for (const auto& [k, v] : norms) {
    rep.l2_norms[k] = v.value;
    rep.l2_norm_stderr[k] = v.stderr_;
  }

  rep.lambda1N = lambda1_neumann_product(tubes, opts.voxel_h, opts.norms.exec);
  rep.lambda1N_scalar_proxy = true;

  Link3 cores(tubes[0].core(), tubes[1].core(), tubes[2].core());
  InvariantReport m = mu123_hopf(cores, opts.certify);
  if (!m.certified)
    throw DomainError("core triple invariant failed to certify; cannot assemble the bound");
  rep.h123 = std::abs(double(m.integer)) * tubes[0].flux() * tubes[1].flux() * tubes[2].flux();

  const double sum_norms = norm_sum(norms);
  rep.bound_without_C =
      std::pow(rep.h123 * rep.r_T * rep.r_T * std::sqrt(rep.lambda1N) / sum_norms, 1.5);

  if (opts.scaling_audit) {
    GreenNormOptions audit_norms = opts.norms;
    audit_norms.samples_pair = opts.audit_samples_pair;
    audit_norms.samples_wedge = opts.audit_samples_wedge;
    auto tubes2 = dilate_tubes(tubes, 2.0);

    auto n1 = green_l2_norms(tubes, audit_norms);
    auto n2 = green_l2_norms(tubes2, audit_norms);
    const double inv_log2 = 1.0 / std::log(2.0);
    for (const auto& [k, v] : n1)
      rep.scaling_exponents[k] = std::log(n2.at(k).value / v.value) * inv_log2;

    rep.scaling_exponents["r_T"] = std::log(tube_gap(tubes2) / rep.r_T) * inv_log2;

    const double lam2 = lambda1_neumann_product(tubes2, opts.voxel_h, opts.norms.exec);
    rep.scaling_exponents["lambda1N"] = std::log(lam2 / rep.lambda1N) * inv_log2;

    const std::array<TubeField, 3> fields2{make_tube_field(tubes2[0]), make_tube_field(tubes2[1]),
                                           make_tube_field(tubes2[2])};
    rep.scaling_exponents["E2"] = std::log(energy_L2(fields2, opts.quad) / rep.E2) * inv_log2;
  }
  return rep;
}

}  // namespace triplink
