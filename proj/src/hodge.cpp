#include "triplink/hodge.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "triplink/errors.hpp"
#include "triplink/fft.hpp"

namespace triplink {

std::vector<double> periods(const DiscreteForm& beta) {
  if (beta.degree() != 2) throw DomainError("periods: degree-2 form expected");
  const TorusGrid& g = beta.grid();
  std::vector<double> out;
  const double h2 = g.h() * g.h();
  if (g.dim == 2) {
    out.push_back(h2 * pairwise_sum(beta.comp(0)));
  } else {
    // sum over all nodes x h^3 / (2pi) = subtorus integral averaged over the
    // transverse circle
    const double w = h2 * g.h() / kTwoPi;
    for (int c = 0; c < 3; ++c) out.push_back(w * pairwise_sum(beta.comp(c)));
  }
  return out;
}

DiscreteForm solve_potential(const DiscreteForm& beta, const SolveOptions& opts) {
  if (beta.degree() != 2) throw DomainError("solve_potential: degree-2 form expected");
  const TorusGrid& g = beta.grid();

  if (opts.check_closed && beta.degree() < g.dim) {
    const double r = d(beta).max_abs();
    if (r > opts.tol_closed)
      throw NotClosedError("solve_potential: ||d beta||_inf = " + std::to_string(r) +
                           " exceeds tol_closed");
  }
  if (opts.check_periods) {
    static const char* names2[] = {"(12)"};
    static const char* names3[] = {"(12)", "(13)", "(23)"};
    const auto per = periods(beta);
    for (size_t c = 0; c < per.size(); ++c)
      if (std::fabs(per[c]) > opts.tol_period)
        throw NonExactFormError(static_cast<int>(c), per[c],
                                std::string("solve_potential: period over the ") +
                                    (g.dim == 2 ? names2[c] : names3[c]) +
                                    " subtorus is " + std::to_string(per[c]));
  }

  const int n = g.n;
  const long total = g.nodes();
  std::vector<int> dims(g.dim, n);

  std::vector<std::vector<std::complex<double>>> bh(beta.components());
  for (int c = 0; c < beta.components(); ++c) {
    bh[c].assign(beta.comp(c).begin(), beta.comp(c).end());
    fft_c2c(bh[c], dims, false);
  }

  DiscreteForm eta(g, 1);
  std::vector<std::complex<double>> work(total);
  for (int b = 0; b < g.dim; ++b) {
    for (long f = 0; f < total; ++f) {
      long rem = f;
      int i3 = 0, i2 = 0, i1 = 0;
      if (g.dim == 3) {
        i3 = static_cast<int>(rem % n);
        rem /= n;
      }
      i2 = static_cast<int>(rem % n);
      i1 = static_cast<int>(rem / n);
      const int bins[3] = {i1, i2, i3};
      bool nyquist = false;
      double k[3] = {0, 0, 0};
      double k2 = 0;
      for (int a = 0; a < g.dim; ++a) {
        if (bins[a] == n / 2) nyquist = true;
        k[a] = fft_freq(bins[a], n);
        k2 += k[a] * k[a];
      }
      if (nyquist || k2 == 0) {
        work[f] = 0;
        continue;
      }
      // sum_a k_a A_ab over the antisymmetric extension of the stored comps
      std::complex<double> s{0, 0};
      if (g.dim == 2) {
        if (b == 0) s = -k[1] * bh[0][f];
        else s = k[0] * bh[0][f];
      } else {
        if (b == 0) s = -k[1] * bh[0][f] - k[2] * bh[1][f];
        else if (b == 1) s = k[0] * bh[0][f] - k[2] * bh[2][f];
        else s = k[0] * bh[1][f] + k[1] * bh[2][f];
      }
      work[f] = std::complex<double>(0.0, -1.0 / k2) * s;
    }
    fft_c2c(work, dims, true);
    for (long f = 0; f < total; ++f) eta.comp(b)[f] = work[f].real();
  }
  return eta;
}

}  // namespace triplink
