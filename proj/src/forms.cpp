#include "triplink/forms.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>

#include "triplink/errors.hpp"
#include "triplink/fft.hpp"

namespace triplink {

double omega_eval(const Vec3& x, const Vec3& X, const Vec3& Y) {
  const double r2 = dot(x, x);
  if (r2 < kEpsSep * kEpsSep)
    throw SingularityError(-1, "omega_eval: evaluation point too close to the origin");
  return kInv4Pi * triple(x, X, Y) / (r2 * std::sqrt(r2));
}

SphereQuad::SphereQuad(int n) {
  if (n < 4) throw DomainError("SphereQuad: resolution must be at least 4");
  ntheta = n;
  nphi = 2 * n;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  theta.resize(n);
  wtheta.resize(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = (x[i] + 1.0) * (kPi / 2);
    wtheta[i] = w[i] * (kPi / 2);
  }
}

void SphereQuad::chart(double th, double ph, Vec3& x, Vec3& dth, Vec3& dph) {
  const double st = std::sin(th), ct = std::cos(th);
  const double sp = std::sin(ph), cp = std::cos(ph);
  x = {st * cp, st * sp, ct};
  dth = {ct * cp, ct * sp, -st};
  dph = {-st * sp, st * cp, 0.0};
}

double sphere_total(int n) {
  SphereQuad q(n);
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(q.ntheta) * q.nphi);
  for (int i = 0; i < q.ntheta; ++i)
    for (int j = 0; j < q.nphi; ++j) {
      Vec3 x, dth, dph;
      SphereQuad::chart(q.theta[i], q.phi(j), x, dth, dph);
      terms.push_back(q.wtheta[i] * q.wphi() * omega_eval(x, dth, dph));
    }
  return pairwise_sum(terms);
}

TorusGrid::TorusGrid(int dim_, int n_) : dim(dim_), n(n_) {
  if (dim != 2 && dim != 3) throw DomainError("TorusGrid: dimension must be 2 or 3");
  if (n < 8 || n % 2 != 0) throw DomainError("TorusGrid: resolution must be even and >= 8");
}

long TorusGrid::nodes() const {
  long m = n;
  for (int k = 1; k < dim; ++k) m *= n;
  return m;
}

namespace {

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - i + 1) / i;
  return r;
}

}  // namespace

DiscreteForm::DiscreteForm(const TorusGrid& grid, int degree) : grid_(grid), degree_(degree) {
  if (degree < 0 || degree > grid_.dim) throw DomainError("DiscreteForm: degree out of range");
  comps_.assign(binom(grid_.dim, degree), std::vector<double>(grid_.nodes(), 0.0));
}

double DiscreteForm::max_abs() const {
  double m = 0;
  for (const auto& c : comps_)
    for (double v : c) m = std::max(m, std::fabs(v));
  return m;
}

void DiscreteForm::dump_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("dump_json: cannot open " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "{\"dim\":" << grid_.dim << ",\"n\":" << grid_.n << ",\"degree\":" << degree_
      << ",\"components\":[";
  for (size_t c = 0; c < comps_.size(); ++c) {
    out << (c ? ",[" : "[");
    for (size_t k = 0; k < comps_[c].size(); ++k) out << (k ? "," : "") << comps_[c][k];
    out << "]";
  }
  out << "]}\n";
}

namespace {

void atomic_min_node(std::atomic<long>& slot, long node) {
  long prev = slot.load(std::memory_order_relaxed);
  while ((prev < 0 || node < prev) && !slot.compare_exchange_weak(prev, node)) {
  }
}

// Shared assembly: node_fn fills a MapJet and returns false if its own guard
// tripped. Never throws inside the loop; the lowest offending node wins.
template <class F>
DiscreteForm pullback_impl(const TorusGrid& g, Exec ex, F&& node_fn) {
  DiscreteForm out(g, 2);
  const int dim = g.dim, n = g.n;
  std::atomic<long> bad{-1};
  double* c0 = out.comp(0).data();
  double* c1 = dim == 3 ? out.comp(1).data() : nullptr;
  double* c2 = dim == 3 ? out.comp(2).data() : nullptr;
  for_each_index(g.nodes(), ex, [&](std::int64_t f) {
    std::array<long, 3> idx{};
    long rem = f;
    if (dim == 3) {
      idx[2] = rem % n;
      rem /= n;
    }
    idx[1] = rem % n;
    idx[0] = rem / n;
    MapJet mj;
    if (!node_fn(idx, mj)) {
      atomic_min_node(bad, f);
      return;
    }
    const double r2 = dot(mj.v, mj.v);
    if (r2 < kEpsSep * kEpsSep) {
      atomic_min_node(bad, f);
      return;
    }
    const double scale = kInv4Pi / (r2 * std::sqrt(r2));
    c0[f] = scale * triple(mj.v, mj.dv[0], mj.dv[1]);
    if (dim == 3) {
      c1[f] = scale * triple(mj.v, mj.dv[0], mj.dv[2]);
      c2[f] = scale * triple(mj.v, mj.dv[1], mj.dv[2]);
    }
  });
  const long b = bad.load();
  if (b >= 0) throw SingularityError(b, "pullback: map hit the kernel singular set at a node");
  return out;
}

}  // namespace

DiscreteForm pullback_2form(const TorusGrid& grid, const MapJetFn& map) {
  const double h = grid.h();
  return pullback_impl(grid, Exec::serial, [&](const std::array<long, 3>& idx, MapJet& mj) {
    const std::array<double, 3> u{h * idx[0], h * idx[1], h * idx[2]};
    map(idx, u, mj);
    return true;
  });
}

DiscreteForm pullback_gauss_pair(const ParametricCurve& c1, const ParametricCurve& c2, int n,
                                 Exec exec) {
  const TorusGrid g(2, n);
  const auto t1 = c1.table(n), t2 = c2.table(n);
  return pullback_impl(g, exec, [&](const std::array<long, 3>& idx, MapJet& mj) {
    mj.v = t2.p[idx[1]] - t1.p[idx[0]];
    mj.dv[0] = -t1.d[idx[0]];
    mj.dv[1] = t2.d[idx[1]];
    return true;
  });
}

DiscreteForm pullback_green(const Link3& link, int i, int j, int n, Exec exec) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw DomainError("pullback_green: component indices must be distinct and in 1..3");
  const TorusGrid g(3, n);
  const auto ti = link[i - 1].table(n), tj = link[j - 1].table(n);
  const int a = i - 1, b = j - 1;
  return pullback_impl(g, exec, [&](const std::array<long, 3>& idx, MapJet& mj) {
    mj.v = ti.p[idx[a]] - tj.p[idx[b]];
    mj.dv = {};
    mj.dv[a] = ti.d[idx[a]];
    mj.dv[b] = -tj.d[idx[b]];
    return true;
  });
}

DiscreteForm pullback_hopf(const Link3& link, int n, Exec exec) {
  const TorusGrid g(3, n);
  std::array<ParametricCurve::Table, 3> t{link[0].table(n), link[1].table(n), link[2].table(n)};
  using J = Jet<3>;
  return pullback_impl(g, exec, [&](const std::array<long, 3>& idx, MapJet& mj) {
    Quat<J> q[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = t[k].p[idx[k]];
      const Vec3& dp = t[k].d[idx[k]];
      V3<J> pj{J::seed(p.x, k, dp.x), J::seed(p.y, k, dp.y), J::seed(p.z, k, dp.z)};
      q[k] = embed_s3(pj);
    }
    const Quat<J> a = mul(conj(q[0]), q[1]);
    const Quat<J> b = mul(conj(q[0]), q[2]);
    if (1.0 - a.w.v < kEpsSep || 1.0 - b.w.v < kEpsSep) return false;
    const V3<J> w = stereo(a) - stereo(b);
    mj.v = {w.x.v, w.y.v, w.z.v};
    for (int s = 0; s < 3; ++s) mj.dv[s] = {w.x.d[s], w.y.d[s], w.z.d[s]};
    return true;
  });
}

namespace {

// Spectral partial derivative along one axis. Nyquist bins are annihilated:
// their frequency is sign-ambiguous for real data, and dropping them keeps
// derivatives of real fields real.
std::vector<double> spectral_partial(const std::vector<double>& f, const TorusGrid& g, int axis) {
  const int n = g.n;
  std::vector<std::complex<double>> z(f.begin(), f.end());
  std::vector<int> dims(g.dim, n);
  fft_c2c(z, dims, false);
  const long total = g.nodes();
  for (long fl = 0; fl < total; ++fl) {
    long rem = fl;
    int i3 = 0, i2 = 0, i1 = 0;
    if (g.dim == 3) {
      i3 = static_cast<int>(rem % n);
      rem /= n;
    }
    i2 = static_cast<int>(rem % n);
    i1 = static_cast<int>(rem / n);
    const int bins[3] = {i1, i2, i3};
    const int j = bins[axis];
    if (j == n / 2) {
      z[fl] = 0;
    } else {
      const double k = fft_freq(j, n);
      z[fl] *= std::complex<double>(0.0, k);
    }
  }
  fft_c2c(z, dims, true);
  std::vector<double> out(total);
  for (long fl = 0; fl < total; ++fl) out[fl] = z[fl].real();
  return out;
}

void axpy(std::vector<double>& y, double alpha, const std::vector<double>& x) {
  for (size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

}  // namespace

DiscreteForm d(const DiscreteForm& form) {
  const TorusGrid& g = form.grid();
  const int p = form.degree();
  if (p >= g.dim) throw DomainError("d: top-degree form has no exterior derivative here");
  DiscreteForm out(g, p + 1);
  if (p == 0) {
    for (int a = 0; a < g.dim; ++a) out.comp(a) = spectral_partial(form.comp(0), g, a);
  } else if (p == 1 && g.dim == 2) {
    out.comp(0) = spectral_partial(form.comp(1), g, 0);
    axpy(out.comp(0), -1.0, spectral_partial(form.comp(0), g, 1));
  } else if (p == 1 && g.dim == 3) {
    // components (12), (13), (23) from potentials (1), (2), (3)
    out.comp(0) = spectral_partial(form.comp(1), g, 0);
    axpy(out.comp(0), -1.0, spectral_partial(form.comp(0), g, 1));
    out.comp(1) = spectral_partial(form.comp(2), g, 0);
    axpy(out.comp(1), -1.0, spectral_partial(form.comp(0), g, 2));
    out.comp(2) = spectral_partial(form.comp(2), g, 1);
    axpy(out.comp(2), -1.0, spectral_partial(form.comp(1), g, 2));
  } else {  // p == 2, dim == 3
    out.comp(0) = spectral_partial(form.comp(2), g, 0);
    axpy(out.comp(0), -1.0, spectral_partial(form.comp(1), g, 1));
    axpy(out.comp(0), 1.0, spectral_partial(form.comp(0), g, 2));
  }
  return out;
}

double integrate_top(const DiscreteForm& form) {
  const TorusGrid& g = form.grid();
  if (form.degree() != g.dim) throw DomainError("integrate_top: form degree must equal dimension");
  double weight = 1.0;
  for (int k = 0; k < g.dim; ++k) weight *= g.h();
  return weight * pairwise_sum(form.comp(0));
}

DiscreteForm wedge(const DiscreteForm& a, const DiscreteForm& b) {
  const TorusGrid& g = a.grid();
  if (g.dim != b.grid().dim || g.n != b.grid().n) throw DomainError("wedge: grid mismatch");
  const int p = a.degree(), q = b.degree();
  if (p + q > g.dim) throw DomainError("wedge: degree sum exceeds dimension");
  const long total = g.nodes();

  if (p == 0 || q == 0) {
    const auto& scalar = (p == 0 ? a : b).comp(0);
    const DiscreteForm& other = p == 0 ? b : a;
    DiscreteForm out(g, p + q);
    for (int c = 0; c < other.components(); ++c)
      for (long k = 0; k < total; ++k) out.comp(c)[k] = scalar[k] * other.comp(c)[k];
    return out;
  }

  DiscreteForm out(g, p + q);
  if (p == 1 && q == 1) {
    const auto &a1 = a.comp(0), &a2 = a.comp(1);
    const auto &b1 = b.comp(0), &b2 = b.comp(1);
    if (g.dim == 2) {
      for (long k = 0; k < total; ++k) out.comp(0)[k] = a1[k] * b2[k] - a2[k] * b1[k];
    } else {
      const auto &a3 = a.comp(2), &b3 = b.comp(2);
      for (long k = 0; k < total; ++k) {
        out.comp(0)[k] = a1[k] * b2[k] - a2[k] * b1[k];
        out.comp(1)[k] = a1[k] * b3[k] - a3[k] * b1[k];
        out.comp(2)[k] = a2[k] * b3[k] - a3[k] * b2[k];
      }
    }
    return out;
  }
  if (p == 1 && q == 2 && g.dim == 3) {
    const auto &a1 = a.comp(0), &a2 = a.comp(1), &a3 = a.comp(2);
    const auto &b12 = b.comp(0), &b13 = b.comp(1), &b23 = b.comp(2);
    for (long k = 0; k < total; ++k)
      out.comp(0)[k] = a1[k] * b23[k] - a2[k] * b13[k] + a3[k] * b12[k];
    return out;
  }
  if (p == 2 && q == 1 && g.dim == 3) {
    const auto &a12 = a.comp(0), &a13 = a.comp(1), &a23 = a.comp(2);
    const auto &b1 = b.comp(0), &b2 = b.comp(1), &b3 = b.comp(2);
    for (long k = 0; k < total; ++k)
      out.comp(0)[k] = a12[k] * b3[k] - a13[k] * b2[k] + a23[k] * b1[k];
    return out;
  }
  throw DomainError("wedge: unsupported degree combination");
}

}  // namespace triplink
