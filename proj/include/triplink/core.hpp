#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace triplink {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kFourPi = 2.0 * kTwoPi;
inline constexpr double kInv4Pi = 1.0 / kFourPi;

// Execution mode for the grid kernels. Every parallel kernel has the same
// code path run serially when Exec::serial is requested; results are
// bit-identical between the two because nodes write disjoint slots and all
// reductions go through pairwise_sum.
enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::int64_t count, Exec ex, F&& body) {
  if (ex == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < count; ++i) body(i);
  }
}

// Fixed-tree pairwise summation. The tree shape depends only on n, never on
// thread count, so reductions stay deterministic under any schedule.
double pairwise_sum(const double* a, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

// wraps to (-pi, pi]
double wrap_angle(double a);

// C^2 step, s(0)=0, s(1)=1, zero first and second derivatives at both ends
inline double smoothstep5(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// ---------------------------------------------------------------------------
// forward-mode jet: value plus N partial derivatives
// ---------------------------------------------------------------------------

template <int N>
struct Jet {
  double v = 0;
  std::array<double, N> d{};

  Jet() = default;
  Jet(double value) : v(value) {}  // constant, zero derivative
  static Jet seed(double value, int slot, double dval = 1.0) {
    Jet j(value);
    j.d[slot] = dval;
    return j;
  }

  Jet operator-() const {
    Jet r(-v);
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
};

template <int N>
inline Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
inline Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }

template <int N>
inline Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
template <int N>
inline Jet<N> operator*(double s, const Jet<N>& a) {
  Jet<N> r(s * a.v);
  for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
  return r;
}
template <int N>
inline Jet<N> operator*(const Jet<N>& a, double s) { return s * a; }

template <int N>
inline Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  const double inv = 1.0 / b.v;
  Jet<N> r(a.v * inv);
  for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
  return r;
}
template <int N>
inline Jet<N> operator/(const Jet<N>& a, double s) { return a * (1.0 / s); }

template <int N>
inline Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> r(std::sqrt(a.v));
  const double half_inv = 0.5 / r.v;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * half_inv;
  return r;
}

// ---------------------------------------------------------------------------
// 3-vectors and quaternions, templated over the scalar so the same formulas
// run on double and on jets
// ---------------------------------------------------------------------------

template <class T>
struct V3 {
  T x{}, y{}, z{};
};

using Vec3 = V3<double>;

template <class T>
inline V3<T> operator+(const V3<T>& a, const V3<T>& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
template <class T>
inline V3<T> operator-(const V3<T>& a, const V3<T>& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
template <class T>
inline V3<T> operator-(const V3<T>& a) { return {-a.x, -a.y, -a.z}; }
template <class T, class S>
inline V3<T> operator*(const S& s, const V3<T>& a) { return {s * a.x, s * a.y, s * a.z}; }

template <class T>
inline T dot(const V3<T>& a, const V3<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
template <class T>
inline V3<T> cross(const V3<T>& a, const V3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
// det[a b c] = a . (b x c)
template <class T>
inline T triple(const V3<T>& a, const V3<T>& b, const V3<T>& c) { return dot(a, cross(b, c)); }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

// Hamilton quaternions, component order (w, x, y, z); unit inverse = conj.
template <class T>
struct Quat {
  T w{}, x{}, y{}, z{};
};

template <class T>
inline Quat<T> conj(const Quat<T>& q) { return {q.w, -q.x, -q.y, -q.z}; }

template <class T>
inline Quat<T> mul(const Quat<T>& a, const Quat<T>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// Round-sphere chart pair used by the triple-invariant pipeline.
// embed_s3: R^3 -> S^3 \ {1},  p -> ((|p|^2 - 1) + 2p) / (|p|^2 + 1);
// the origin lands at -1, the antipode of the projection pole.
template <class T>
inline Quat<T> embed_s3(const V3<T>& p) {
  const T r2 = dot(p, p);
  const T inv = T(1.0) / (r2 + T(1.0));
  return {(r2 - T(1.0)) * inv, (T(2.0) * p.x) * inv, (T(2.0) * p.y) * inv, (T(2.0) * p.z) * inv};
}

// stereographic projection from the pole 1: q -> (q.x, q.y, q.z)/(1 - q.w)
template <class T>
inline V3<T> stereo(const Quat<T>& q) {
  const T inv = T(1.0) / (T(1.0) - q.w);
  return {q.x * inv, q.y * inv, q.z * inv};
}

// ---------------------------------------------------------------------------
// counter-based RNG: the k-th draw of stream s under seed x is a pure
// function of (x, s, k), so parallel sampling is schedule-independent
// ---------------------------------------------------------------------------

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(mix(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  std::uint64_t next_u64() { return mix(key_ + 0xbf58476d1ce4e5b9ULL * ++counter_); }
  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
  double next_gaussian() {
    // Box-Muller; consumes exactly two draws per call
    const double u1 = std::max(next_double(), 0x1.0p-60);
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace triplink
