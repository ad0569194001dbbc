#include "triplink/confspace.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "triplink/errors.hpp"
#include "triplink/forms.hpp"

namespace triplink {

Vec3 conf_base_point(int which) {
  switch (which) {
    case 1: return {0.0, 0.0, 0.0};
    case 2: return {4.0, 0.0, 0.0};
    case 3: return {8.0, 0.0, 0.0};
    default: throw DomainError("conf_base_point: index must be 1, 2 or 3");
  }
}

Conf3Vec SphereCycle::at(const Vec3& xi) const {
  return {base[0] + coef[0] * xi, base[1] + coef[1] * xi, base[2] + coef[2] * xi};
}

Conf3Vec SphereCycle::tangent(const Vec3& dxi) const {
  return {coef[0] * dxi, coef[1] * dxi, coef[2] * dxi};
}

SphereCycle unit_sphere_cycle(int i, int j) {
  if (j < 1 || i > 3 || j >= i)
    throw DomainError("unit_sphere_cycle: tag must satisfy 1 <= j < i <= 3");
  SphereCycle c;
  for (int s = 0; s < 3; ++s) c.base[s] = conf_base_point(s + 1);
  c.base[i - 1] = conf_base_point(j);
  c.coef[i - 1] = 1.0;
  return c;
}

SphereCycle permute(const SphereCycle& c, const std::array<int, 3>& sigma) {
  std::array<bool, 3> seen{};
  for (int v : sigma) {
    if (v < 1 || v > 3 || seen[v - 1])
      throw DomainError("permute: sigma must list 1, 2, 3 exactly once");
    seen[v - 1] = true;
  }
  SphereCycle out;
  for (int s = 0; s < 3; ++s) {
    out.base[sigma[s] - 1] = c.base[s];
    out.coef[sigma[s] - 1] = c.coef[s];
  }
  return out;
}

double min_slot_gap(const SphereCycle& c, int samples) {
  if (samples < 1) throw DomainError("min_slot_gap: need at least one sample");
  // Fibonacci lattice on the parameter sphere
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double z = 1.0 - (2.0 * s + 1.0) / samples;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 xi = {r * std::cos(ga * s), r * std::sin(ga * s), z};
    const Conf3Vec x = c.at(xi);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) best = std::min(best, norm(x[a] - x[b]));
  }
  return best;
}

double pairing(const SphereCycle& c, int k, int l, int n, Exec exec) {
  if (k < 1 || k > 3 || l < 1 || l > 3 || k == l)
    throw DomainError("pairing: kernel indices must be distinct and in 1..3");
  const SphereQuad q(n);
  const std::int64_t nodes = static_cast<std::int64_t>(q.ntheta) * q.nphi;
  std::vector<double> terms(nodes);
  for_each_index(nodes, exec, [&](std::int64_t id) {
    const int a = static_cast<int>(id / q.nphi);
    const int b = static_cast<int>(id % q.nphi);
    Vec3 xi, dth, dph;
    SphereQuad::chart(q.theta[a], q.phi(b), xi, dth, dph);
    const Conf3Vec x = c.at(xi);
    terms[id] = q.wtheta[a] * q.wphi() *
                green_conf_eval(x, k, l, c.tangent(dth), c.tangent(dph));
  });
  return pairwise_sum(terms);
}

double proj_degree(int k, const SphereCycle& c, int n, Exec exec) {
  if (k < 1 || k > 3) throw DomainError("proj_degree: slot index must be in 1..3");
  // surviving slots in their original order (p before q); the retraction
  // direction is second minus first, which is the (q, p) kernel
  int p = 0, q = 0;
  for (int s = 1; s <= 3; ++s) {
    if (s == k) continue;
    if (p == 0) p = s;
    else q = s;
  }
  return pairing(c, q, p, n, exec);
}

Conf3Vec ProductSphereCycle::at(const Vec3& xi1, const Vec3& xi2) const {
  return {base[0] + coef1[0] * xi1 + coef2[0] * xi2,
          base[1] + coef1[1] * xi1 + coef2[1] * xi2,
          base[2] + coef1[2] * xi1 + coef2[2] * xi2};
}

Conf3Vec ProductSphereCycle::tangent1(const Vec3& dxi) const {
  return {coef1[0] * dxi, coef1[1] * dxi, coef1[2] * dxi};
}

Conf3Vec ProductSphereCycle::tangent2(const Vec3& dxi) const {
  return {coef2[0] * dxi, coef2[1] * dxi, coef2[2] * dxi};
}

ProductSphereCycle relation_test_cycle(int which) {
  ProductSphereCycle c;
  for (int s = 0; s < 3; ++s) c.base[s] = conf_base_point(1);
  c.coef1[1] = 1.0;
  if (which == 0) {
    c.coef2[2] = 5.0;
  } else if (which == 1) {
    c.base[2] = conf_base_point(3);
    c.coef2[2] = 1.0;
  } else {
    throw DomainError("relation_test_cycle: index must be 0 or 1");
  }
  return c;
}

namespace {

// component of the (k, l) pair kernel on one ordered tangent pair; exact
// zero tangents of affine cycles short-circuit the evaluation
inline double kernel_component(const Conf3Vec& x, int k, int l, const Conf3Vec& u,
                               const Conf3Vec& v) {
  const Vec3 ud = u[k - 1] - u[l - 1];
  const Vec3 vd = v[k - 1] - v[l - 1];
  if ((ud.x == 0.0 && ud.y == 0.0 && ud.z == 0.0) ||
      (vd.x == 0.0 && vd.y == 0.0 && vd.z == 0.0))
    return 0.0;
  return omega_eval(x[k - 1] - x[l - 1], ud, vd);
}

// six components of the (k, l) kernel on the tangent pairs
// (01, 02, 03, 12, 13, 23)
inline std::array<double, 6> kernel_components(const Conf3Vec& x, int k, int l,
                                               const std::array<Conf3Vec, 4>& t) {
  return {kernel_component(x, k, l, t[0], t[1]), kernel_component(x, k, l, t[0], t[2]),
          kernel_component(x, k, l, t[0], t[3]), kernel_component(x, k, l, t[1], t[2]),
          kernel_component(x, k, l, t[1], t[3]), kernel_component(x, k, l, t[2], t[3])};
}

// (alpha ^ beta) on four tangents from the six components of each factor
inline double shuffle22(const std::array<double, 6>& A, const std::array<double, 6>& B) {
  return A[0] * B[5] - A[1] * B[4] + A[2] * B[3] + A[3] * B[2] - A[4] * B[1] + A[5] * B[0];
}

// quadrature of a 4-form integrand over a product cycle; the integrand
// receives the configuration and the four chart tangents in the product
// orientation (theta1, phi1, theta2, phi2)
template <class F>
double integrate_product(const ProductSphereCycle& c, int n, Exec exec, F&& f) {
  const SphereQuad q(n);
  const std::int64_t n1 = static_cast<std::int64_t>(q.ntheta) * q.nphi;
  std::vector<double> outer(n1);
  for_each_index(n1, exec, [&](std::int64_t id1) {
    const int a1 = static_cast<int>(id1 / q.nphi);
    const int b1 = static_cast<int>(id1 % q.nphi);
    Vec3 xi1, dth1, dph1;
    SphereQuad::chart(q.theta[a1], q.phi(b1), xi1, dth1, dph1);
    const double w1 = q.wtheta[a1] * q.wphi();
    static thread_local std::vector<double> inner;
    inner.assign(static_cast<std::size_t>(q.ntheta) * q.nphi, 0.0);
    for (int a2 = 0; a2 < q.ntheta; ++a2)
      for (int b2 = 0; b2 < q.nphi; ++b2) {
        Vec3 xi2, dth2, dph2;
        SphereQuad::chart(q.theta[a2], q.phi(b2), xi2, dth2, dph2);
        const Conf3Vec x = c.at(xi1, xi2);
        const std::array<Conf3Vec, 4> t = {c.tangent1(dth1), c.tangent1(dph1),
                                           c.tangent2(dth2), c.tangent2(dph2)};
        inner[static_cast<std::size_t>(a2) * q.nphi + b2] =
            w1 * q.wtheta[a2] * q.wphi() * f(x, t);
      }
    outer[id1] = pairwise_sum(inner);
  });
  return pairwise_sum(outer);
}

}  // namespace

double wedge_pair_integral(const ProductSphereCycle& c, int a1, int a2, int b1, int b2,
                           int n, Exec exec) {
  for (int v : {a1, a2, b1, b2})
    if (v < 1 || v > 3) throw DomainError("wedge_pair_integral: indices must be in 1..3");
  if (a1 == a2 || b1 == b2)
    throw DomainError("wedge_pair_integral: kernel indices must be distinct");
  return integrate_product(c, n, exec, [&](const Conf3Vec& x, const std::array<Conf3Vec, 4>& t) {
    return shuffle22(kernel_components(x, a1, a2, t), kernel_components(x, b1, b2, t));
  });
}

double relation_residual(int n, Exec exec) {
  double worst = 0.0;
  for (int which = 0; which < 2; ++which) {
    const ProductSphereCycle c = relation_test_cycle(which);
    const double val =
        integrate_product(c, n, exec, [&](const Conf3Vec& x, const std::array<Conf3Vec, 4>& t) {
          const auto w21 = kernel_components(x, 2, 1, t);
          const auto w32 = kernel_components(x, 3, 2, t);
          const auto w31 = kernel_components(x, 3, 1, t);
          return shuffle22(w21, w32) - shuffle22(w32, w31) - shuffle22(w31, w21);
        });
    worst = std::max(worst, std::abs(val));
  }
  return worst;
}

HomotopyClass generator_class(int i, int j) {
  if (i == 2 && j == 1) return {{1, 0, 0}};
  if (i == 3 && j == 2) return {{0, 1, 0}};
  if (i == 3 && j == 1) return {{0, 0, 1}};
  throw DomainError("generator_class: tag must be (2,1), (3,2) or (3,1)");
}

HomotopyClass operator+(const HomotopyClass& a, const HomotopyClass& b) {
  return {{a.deg[0] + b.deg[0], a.deg[1] + b.deg[1], a.deg[2] + b.deg[2]}};
}

HomotopyClass operator-(const HomotopyClass& a, const HomotopyClass& b) {
  return {{a.deg[0] - b.deg[0], a.deg[1] - b.deg[1], a.deg[2] - b.deg[2]}};
}

HomotopyClass operator-(const HomotopyClass& a) { return {{-a.deg[0], -a.deg[1], -a.deg[2]}}; }

HomotopyClass operator*(long s, const HomotopyClass& a) {
  return {{s * a.deg[0], s * a.deg[1], s * a.deg[2]}};
}

double whitehead_I(const HomotopyClass& c1, const HomotopyClass& c2, int n, Exec exec) {
  static constexpr std::array<std::pair<int, int>, 3> tags = {{{2, 1}, {3, 2}, {3, 1}}};
  double P[3][3];
  for (int g = 0; g < 3; ++g) {
    const SphereCycle cyc = unit_sphere_cycle(tags[g].first, tags[g].second);
    for (int m = 0; m < 3; ++m)
      P[g][m] = pairing(cyc, tags[m].first, tags[m].second, n, exec);
  }
  // kernel integrals over a class, converted to the ascending-index pairs
  // (1,2), (2,3), (3,1) used by the cyclic formula
  const auto components = [&](const HomotopyClass& f, double out[3]) {
    double s[3] = {0.0, 0.0, 0.0};
    for (int m = 0; m < 3; ++m)
      for (int g = 0; g < 3; ++g) s[m] += static_cast<double>(f.deg[g]) * P[g][m];
    out[0] = -s[0];
    out[1] = -s[1];
    out[2] = s[2];
  };
  double a[3], b[3];
  components(c1, a);
  components(c2, b);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int ip = (i + 1) % 3;
    total += a[i] * b[ip] + a[ip] * b[i];
  }
  return total;
}

Conf3Vec based_cycle_point(int i, int j, const DiskPoint& x) {
  if (j < 1 || i > 3 || j >= i)
    throw DomainError("based_cycle_point: tag must satisfy 1 <= j < i <= 3");
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
  if (r > 1.0 + 1e-9) throw DomainError("based_cycle_point: point outside the unit disk");
  const double t = std::atan2(x[1], x[0]);
  const Vec3 qi = conf_base_point(i), qj = conf_base_point(j);
  const Vec3 u0 = normalized(qi - qj);
  const Vec3 u1 = {0.0, 1.0, 0.0}, u2 = {0.0, 0.0, 1.0};
  // colatitude pi at the center, 0 (the parking axis) at the boundary; the
  // azimuth runs clockwise so the swept class carries coefficient +1
  const double psi = kPi * (1.0 - std::min(r, 1.0));
  const Vec3 dir = std::cos(psi) * u0 + (std::sin(psi) * std::cos(t)) * u1 -
                   (std::sin(psi) * std::sin(t)) * u2;
  const double rho = 1.0 + (norm(qi - qj) - 1.0) * std::min(r, 1.0);
  Conf3Vec out = {conf_base_point(1), conf_base_point(2), conf_base_point(3)};
  out[i - 1] = qj + rho * dir;
  return out;
}

Conf3Vec whitehead_map_point(std::pair<int, int> tag1, std::pair<int, int> tag2,
                             const DiskPoint& x1, const DiskPoint& x2) {
  const double r1 = std::sqrt(x1[0] * x1[0] + x1[1] * x1[1]);
  const double r2 = std::sqrt(x2[0] * x2[0] + x2[1] * x2[1]);
  if (std::abs(r2 - 1.0) <= 1e-9) return based_cycle_point(tag1.first, tag1.second, x1);
  if (std::abs(r1 - 1.0) <= 1e-9) return based_cycle_point(tag2.first, tag2.second, x2);
  throw DomainError("whitehead_map_point: neither factor lies on its boundary circle");
}

}  // namespace triplink
