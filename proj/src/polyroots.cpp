#include "trihyp/polyroots.hpp"

#include <algorithm>
#include <cmath>

namespace trihyp {

cplx polish_monic(const double* c, int n, cplx z, int iters) {
  for (int it = 0; it < iters; ++it) {
    cplx p = 1.0, dp = 0.0;
    // Horner for p and p' simultaneously, highest coefficient is 1.
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
    if (std::abs(dp) == 0.0) break;
    cplx step = p / dp;
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return z;
}

std::array<cplx, 3> cubic_roots(double a, double b, double c) {
  // Depress: tau = s - a/3, s^3 + p s + q = 0.
  double p = b - a * a / 3.0;
  double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  double shift = a / 3.0;

  double scale = std::max({1.0, std::fabs(a), std::sqrt(std::fabs(b)),
                           std::cbrt(std::fabs(c))});
  double tiny = 1e-14 * scale * scale;  // threshold on |p| ~ root^2 scale

  std::array<cplx, 3> s;
  if (std::fabs(p) < tiny && std::fabs(q) < tiny * scale) {
    // Near-triple root: C in Cardano would be ~0, use the closed form.
    s = {cplx(0.0), cplx(0.0), cplx(0.0)};
  } else {
    double D = q * q / 4.0 + p * p * p / 27.0;
    // degenerate only when the two contributions cancel to rounding level
    double Dtol = 1e-14 * (q * q / 4.0 + std::fabs(p * p * p) / 27.0);
    if (std::fabs(D) <= Dtol) {
      // One double and one simple root.
      double u = std::cbrt(-q / 2.0);
      s = {cplx(2.0 * u), cplx(-u), cplx(-u)};
    } else if (D < 0.0) {
      // Three distinct real roots, trigonometric form.
      double m = 2.0 * std::sqrt(-p / 3.0);
      double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
      double phi = std::acos(arg) / 3.0;
      s = {cplx(m * std::cos(phi)), cplx(m * std::cos(phi - 2.0 * M_PI / 3.0)),
           cplx(m * std::cos(phi - 4.0 * M_PI / 3.0))};
    } else {
      // One real root and a complex pair.
      double sq = std::sqrt(D);
      double u = std::cbrt(-q / 2.0 + sq);
      double v = std::cbrt(-q / 2.0 - sq);
      double re = -(u + v) / 2.0;
      double im = (u - v) * std::sqrt(3.0) / 2.0;
      s = {cplx(u + v), cplx(re, im), cplx(re, -im)};
    }
  }

  double coeffs[3] = {c, b, a};
  std::array<cplx, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = polish_monic(coeffs, 3, s[i] - shift);

  // Keep conjugate symmetry exact for the complex pair.
  for (int i = 0; i < 3; ++i)
    if (std::fabs(r[i].imag()) < 1e-13 * (1.0 + std::abs(r[i]))) r[i].imag(0.0);
  return r;
}

std::array<cplx, 4> quartic_roots(double a3, double a2, double a1, double a0) {
  // Even-part seed: z^4 + a2 z^2 + a0 = 0 solved as a quadratic in z^2.
  cplx disc = cplx(a2 * a2 - 4.0 * a0);
  cplx sq = std::sqrt(disc);
  cplx w1 = (-a2 + sq) / 2.0, w2 = (-a2 - sq) / 2.0;
  std::array<cplx, 4> z = {std::sqrt(w1), -std::sqrt(w1), std::sqrt(w2), -std::sqrt(w2)};

  double coeffs[4] = {a0, a1, a2, a3};
  for (auto& zi : z) {
    zi = polish_monic(coeffs, 4, zi, 40);
    if (std::fabs(zi.imag()) < 1e-12 * (1.0 + std::abs(zi))) zi.imag(0.0);
    if (std::fabs(zi.real()) < 1e-12 * (1.0 + std::abs(zi))) zi.real(0.0);
  }
  return z;
}

}  // namespace trihyp
