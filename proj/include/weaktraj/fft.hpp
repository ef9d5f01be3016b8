#pragma once
#include <complex>
#include <vector>

namespace weaktraj {

/// In-place forward/inverse DFT. Power-of-two lengths use the iterative
/// radix-2 algorithm; other lengths go through Bluestein's chirp transform.
/// The inverse applies the 1/N factor.
void fft(std::vector<std::complex<double>>& data, bool inverse);

/// Unshifted spatial frequencies (rad per x-unit) matching fft ordering.
std::vector<double> fft_freq(std::size_t n, double dx);

}  // namespace weaktraj
