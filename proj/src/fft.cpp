#include "triplink/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "triplink/errors.hpp"

namespace triplink {

int fft_freq(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }

namespace {

struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  size_t count = 0;

  ~PlanEntry() {
    if (plan) fftw_destroy_plan(plan);
    if (buf) fftw_free(buf);
  }
};

// FFTW planning is not thread-safe and the cached buffers are shared, so the
// whole transform is guarded by one mutex.
std::mutex g_fft_mutex;
std::map<std::pair<std::vector<int>, bool>, PlanEntry> g_plans;

}  // namespace

void fft_c2c(std::vector<std::complex<double>>& data, const std::vector<int>& dims,
             bool inverse) {
  if (dims.size() != 2 && dims.size() != 3) throw DomainError("fft_c2c: rank must be 2 or 3");
  size_t total = 1;
  for (int d : dims) {
    if (d < 1) throw DomainError("fft_c2c: bad dimension");
    total *= static_cast<size_t>(d);
  }
  if (total != data.size()) throw DomainError("fft_c2c: shape does not match data size");

  std::lock_guard<std::mutex> lock(g_fft_mutex);
  auto& entry = g_plans[{dims, inverse}];
  if (!entry.plan) {
    entry.count = total;
    entry.buf = fftw_alloc_complex(total);
    entry.plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), entry.buf, entry.buf,
                               inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    if (!entry.plan) throw Error("fft_c2c: plan creation failed");
  }
  // std::complex<double> is layout-compatible with double[2]
  std::memcpy(static_cast<void*>(entry.buf), static_cast<const void*>(data.data()),
              total * sizeof(fftw_complex));
  fftw_execute(entry.plan);
  std::memcpy(static_cast<void*>(data.data()), static_cast<const void*>(entry.buf),
              total * sizeof(fftw_complex));
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(total);
    for (auto& z : data) z *= scale;
  }
}

}  // namespace triplink
