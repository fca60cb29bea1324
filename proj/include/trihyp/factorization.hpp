#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "trihyp/reduction.hpp"

namespace trihyp {

/// Tabulated factorization p3 = ((tau - a)^2 - b)(tau - gamma) with
/// gamma = t rho, rho solving t rho^3 - a2 rho + b3 = 0.
struct FactorizationResult {
  struct Entry {
    double t, x, xi;
    double rho, gamma, a, b;
    int newton_iters;
    bool converged;
  };
  std::vector<Entry> entries;
  double residual = 0.0;  // sup |p3 - ((tau-a)^2 - b)(tau-gamma)| over tau samples
  double min_b = 0.0;     // b >= -tol is the D >= 0 condition
  int max_newton_iters = 0;
  std::vector<size_t> failed;  // indices of non-converged entries
};

/// Newton construction of the smooth real root for alpha == 0 models.
FactorizationResult smooth_root(const ReducedOperator& r,
                                const std::vector<double>& ts,
                                const std::vector<double>& xs);

/// Scalar Newton on t rho^3 - a2 rho + b3 = 0 from rho0 = b3/a2.
struct NewtonRoot {
  double rho = 0.0;
  int iters = 0;
  bool converged = false;
};
NewtonRoot solve_rho(double t, double a2, double b3, int max_iters = 50);

struct CardanoBranch {
  std::array<cplx, 3> roots{};
  cplx C;
  int real_branch = -1;  // index matching the smooth root, -1 if none
  bool complex_pair = false;
};

/// Explicit three-root formula with C = ((27 t^2 b3 + sqrt(-27 Delta))/2)^{1/3}
/// on the principal cube-root branch.
CardanoBranch cardano_branch(const ReducedOperator& r, double t, double x, double xi);

struct DerivativeFit {
  double limit = 0.0;   // b3/a2 at t = 0
  double beta = 0.0;    // fitted exponent of |gamma/t - b3/a2| ~ C t^beta
  double C = 0.0;
  bool exact = false;   // all residuals below 1e-14 (b3 == 0 type cases)
  bool in_band = false; // beta within [0.35, 0.65]
  std::vector<double> ts, devs;
};

/// Dyadic-grid fit of the correction to d/dt gamma(0) = b3/a2.
DerivativeFit derivative_check(const ReducedOperator& r, double x, double xi,
                               int j0 = 4, int j1 = 14);

enum class ProbeStatus { blowup_detected, no_blowup, factorizable_regime };

struct ProbeReport {
  ProbeStatus status = ProbeStatus::no_blowup;
  std::vector<double> quotients;  // divided differences of rho = gamma/t
  double baseline = 0.0;
  double max_quotient = 0.0;
  int detected_at_m = -1;
};

/// Follows the two proof paths t = alpha(x_m)^2 and t = alpha(x_m) along
/// x_m = 2^-m and measures divided-difference quotients of gamma/t; their
/// blow-up is the numerical signature that no smooth root exists.
ProbeReport nonfactorizability_probe(const ReducedOperator& r, double xi0,
                                     int m_max = 16);

}  // namespace trihyp
