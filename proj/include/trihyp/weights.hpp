#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace trihyp {

/// Parameters of the weighted energy machinery.
struct WeightSpec {
  int N = 12;
  double eps = 1.0;
  double lambda = 8.0;
  static constexpr double theta = 1.0 / 3.0;
};

inline double xi_bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

/// Time function f(t, xi) = t/3 + <xi>^{-2/3}.
double f_weight(double t, double xi);

/// f(t,xi)^{-k}, evaluated in log space.
double f_power(double k, double t, double xi);

/// psi(t) = e^{-2 lambda t}/t and the boundary-data weights
/// phi_fwd(t) = t e^{2 lambda t}, phi_bwd(t) = t e^{-2 lambda t}.
double psi_weight(double t, double lambda);
double phi_fwd(double t, double lambda);
double phi_bwd(double t, double lambda);

struct WeightCubeViolation {
  double t, xi, margin;
};

/// Checks the key pointwise bound <xi>^{-2} + t f^2 - f^3 >= -1e-15 on
/// random samples.
std::vector<WeightCubeViolation> weight_cube_inequality_check(unsigned seed, long samples);

struct SymbolClassFit {
  int alpha;     // derivative order
  int N;
  double C;      // smallest C with |d^alpha f^{-N}| <= C N^alpha f^{-N} <xi>^{-alpha}
};

/// Fits the constants of the derivative bounds of f^{-N} for
/// alpha = 0..3 over a sample set, for each requested N.
std::vector<SymbolClassFit> symbol_class_constants(const std::vector<int>& Ns,
                                                   unsigned seed, int samples = 2000);

struct PsiMargins {
  double min_decay_margin;    // -psi' - lambda psi
  double min_square_margin1;  // -psi' - e^{-2 lambda t}/t^2
  double min_square_margin2;  // e^{-2 lambda t}/t^2 - psi^2
  bool pass;
};

PsiMargins psi_inequalities(double lambda, const std::vector<double>& ts);

/// Analytic xi-derivatives of f^{-N} up to order 3 (used by the fit and
/// exposed for tests).
std::array<double, 4> f_power_derivatives(int N, double t, double xi);

}  // namespace trihyp
