#pragma once

#include "trihyp/reduction.hpp"
#include "trihyp/symbols.hpp"

namespace trihyp {

/// Worked effective model: p3 = tau^3 - (t + x^2) xi^2 tau + t^2 xi^3,
/// i.e. a2 = xi^2, alpha = x^2 xi^2, b3 = xi^3, with an optional b2 = c xi^2.
OperatorModel effective_model(double b2_coeff = 0.0);

/// Its reduced form, written down directly.
ReducedOperator effective_reduced(double b2_coeff = 0.0);

/// x-frozen variant at the triple point (alpha == 0), used by the
/// factorization and frequency suites.
ReducedOperator effective_reduced_frozen(double b2_coeff = 0.0);

/// Scaled form of the worked model for the periodic spectral realization:
/// alpha^eps is eps^2 (2 sin(x/2))^2 xi^2, which equals (eps x)^2 xi^2 up to
/// O(eps^2 x^4) at the locus, stays nonnegative with the same Hessian, and
/// is smooth on the torus (spectra spread by at most one mode). a2, b3, b2
/// are x-independent, so the eps substitution leaves them unchanged.
ReducedOperator effective_scaled_periodic(double eps, double b2_coeff = 0.0);

/// Strictly hyperbolic control p3 = tau^3 - xi^2 tau.
OperatorModel strict_model();

/// Non-effective contrast p3 = tau^3 - t^2 xi^2 tau + c xi^2 (F == 0 at the
/// triple point; violates the effectivity hypothesis by construction).
OperatorModel contrast_model(double c);

}  // namespace trihyp
