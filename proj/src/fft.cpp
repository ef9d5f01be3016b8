#include "weaktraj/fft.hpp"

#include <cmath>
#include <numbers>

namespace weaktraj {

namespace {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
    cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& v : a) v /= double(n);
}

void fft_bluestein(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n + 1) m <<= 1;

  std::vector<cplx> chirp(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the chirp phase argument small
    std::size_t k2 = (k * k) % (2 * n);
    double ang = sign * std::numbers::pi * double(k2) / double(n);
    chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<cplx> u(m, cplx(0.0, 0.0)), v(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = std::conj(chirp[k]);
    if (k != 0) v[m - k] = std::conj(chirp[k]);
  }
  fft_radix2(u, false);
  fft_radix2(v, false);
  for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
  fft_radix2(u, true);
  for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * chirp[k];
  if (inverse)
    for (auto& x : a) x /= double(n);
}

}  // namespace

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.size() < 2) return;
  if (is_pow2(data.size()))
    fft_radix2(data, inverse);
  else
    fft_bluestein(data, inverse);
}

std::vector<double> fft_freq(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / (double(n) * dx);
  for (std::size_t i = 0; i < n; ++i) {
    double idx = (i <= (n - 1) / 2) ? double(i) : double(i) - double(n);
    k[i] = idx * dk;
  }
  return k;
}

}  // namespace weaktraj
