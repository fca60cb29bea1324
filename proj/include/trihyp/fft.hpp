#pragma once

#include <complex>
#include <vector>

namespace trihyp {

/// In-place radix-2 FFT. sign = -1 forward, +1 inverse (unnormalized;
/// callers divide by n after the inverse... see fft_forward/fft_inverse).
void fft_radix2(std::vector<std::complex<double>>& a, int sign);

/// u (values) -> spectral coefficients c with u_j = sum_k c_k e^{2pi i k j/n}.
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& u);
std::vector<std::complex<double>> fft_inverse(const std::vector<std::complex<double>>& c);

}  // namespace trihyp
