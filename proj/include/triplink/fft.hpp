#pragma once

#include <complex>
#include <vector>

namespace triplink {

// Signed frequency of DFT bin j for length n: j for j < (n+1)/2, else j - n.
int fft_freq(int j, int n);

// In-place complex DFT on row-major data. dims has 2 or 3 entries and their
// product must equal data.size(). Forward is unscaled; inverse divides by N,
// so inverse(forward(x)) == x up to rounding. Plans are cached per shape and
// the call is serialized internally, so it is safe from parallel regions.
void fft_c2c(std::vector<std::complex<double>>& data, const std::vector<int>& dims,
             bool inverse);

}  // namespace triplink
