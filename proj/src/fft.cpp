#include "trihyp/fft.hpp"

#include <cmath>

#include "trihyp/errors.hpp"

namespace trihyp {

void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw InputError("FFT length must be a power of two");
  // bit reversal
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * M_PI / double(len);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        auto u = a[i + k];
        auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& u) {
  auto c = u;
  fft_radix2(c, -1);
  double inv = 1.0 / double(u.size());
  for (auto& z : c) z *= inv;
  return c;
}

std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>>& c) {
  auto u = c;
  fft_radix2(u, +1);
  return u;
}

}  // namespace trihyp
