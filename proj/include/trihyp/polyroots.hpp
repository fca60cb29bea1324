#pragma once

#include <array>
#include <complex>

namespace trihyp {

using cplx = std::complex<double>;

/// Roots of tau^3 + a*tau^2 + b*tau + c = 0 by Cardano with a closed-form
/// switch on the sign of the depressed discriminant and a Newton polish.
/// Degenerate (near triple / double) cases take the explicit closed forms.
std::array<cplx, 3> cubic_roots(double a, double b, double c);

/// Roots of z^4 + a3 z^3 + a2 z^2 + a1 z + a0 = 0. Initial values come
/// from the resolvent factorization of the even part (the use case is
/// characteristic polynomials of 4x4 Hamilton matrices, which are close
/// to even), then every root is Newton-polished on the full quartic.
std::array<cplx, 4> quartic_roots(double a3, double a2, double a1, double a0);

/// One complex Newton pass on a monic polynomial given by its
/// coefficients (c[0] + c[1] z + ... + c[n-1] z^{n-1} + z^n).
cplx polish_monic(const double* coeffs, int degree, cplx z, int iters = 12);

}  // namespace trihyp
