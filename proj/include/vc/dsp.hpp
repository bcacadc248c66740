#pragma once

#include <complex>
#include <vector>

namespace vc {

// Iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x, bool inverse);

// Periodic Hann window of the given length.
std::vector<double> hann_window(size_t length);

}  // namespace vc
