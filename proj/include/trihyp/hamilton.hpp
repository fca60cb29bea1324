#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "trihyp/reduction.hpp"
#include "trihyp/symbols.hpp"

namespace trihyp {

/// A characteristic point rho = (t, x, tau, xi).
struct Point4 {
  double t = 0.0, x = 0.0, tau = 0.0, xi = 1.0;
};

/// Generic scalar symbol p(t, x, tau, xi) for paths where the operator is
/// not given in q-form (pullbacks, tests).
using SymbolFn = std::function<double(double, double, double, double)>;

/// Fundamental matrix at a critical characteristic point, variables
/// ordered (t, x | tau, xi):
///   F = [ p_{xi,x}   p_{xi,xi} ]
///       [ -p_{x,x}  -p_{x,xi}  ]
/// where the x-group is (t,x) and the xi-group is (tau,xi).
struct HamiltonMatrix {
  std::array<std::array<double, 4>, 4> m{};
  Point4 point;
  double norm() const;
  double trace() const;
};

struct SpectrumReport {
  std::array<cplx, 4> eigenvalues{};
  double mu = 0.0;
  bool effective = false;
  double residual_imag = 0.0;  // max |Re| over the non-(+-mu) eigenvalues
};

struct SubprincipalValue {
  cplx value;
  Point4 point;
};

struct PiConstant {
  double value = 0.0;
  double sup_x = 0.0;
  double sup_xi = 1.0;
  int N = 0;
};

/// Assembles F from the q-form model; second derivatives come from the
/// coefficient fields (exact when expression-backed). Throws
/// PreconditionError unless p3(rho) ~ 0 and grad p3(rho) ~ 0.
HamiltonMatrix fundamental_matrix(const OperatorModel& m, const Point4& rho);

/// Same, for a black-box symbol; all derivatives by central differences.
HamiltonMatrix fundamental_matrix(const SymbolFn& p, const Point4& rho);

SpectrumReport classify(const HamiltonMatrix& F);

/// Subprincipal symbol p2 + (i/2)(d2 p3/dt dtau + d2 p3/dx dxi) at rho.
SubprincipalValue subprincipal(const OperatorModel& m, const Point4& rho);

/// Reduced-operator shortcut: b2(0,x,xi) - (i/2) a2(0,x,xi).
SubprincipalValue subprincipal(const ReducedOperator& r, double x, double xi);

/// Pi = 2/3 + sup over the sample set of |p2'(0,x,lambda,xi) / mu(x,xi)|,
/// and N = ceil(13 Pi / 2) + N0.
PiConstant compute_Pi(const OperatorModel& m, const std::vector<double>& xs,
                      int N0 = 4);

struct NecessaryConditionsReport {
  bool has_real_eigenvalues = false;
  bool im_subprincipal_zero = true;   // |Im p'| ~ 0 when F is nilpotent/imaginary
  bool re_subprincipal_bound = true;  // |Re p'| <= (1/4) sum |mu_j|
  bool loss_bound = true;             // |Im p' / mu| <= 2 n (M+3)
  double im_value = 0.0;
  double re_margin = 0.0;
  double loss_margin = 0.0;
};

NecessaryConditionsReport necessary_conditions(const OperatorModel& m,
                                               const Point4& rho, double M_loss);

}  // namespace trihyp
