#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "trihyp/fft.hpp"
#include "trihyp/reduction.hpp"

namespace trihyp {

/// Uniform periodic grid on [0, L) with power-of-two point count.
struct Grid1D {
  int n = 0;
  double L = 2.0 * M_PI;
  std::vector<double> x;    // nodes x_j = j L / n
  std::vector<double> xi;   // frequencies in FFT storage order

  Grid1D() = default;
  Grid1D(int n_points, double length);
  double xi_max() const;
};

/// Complex grid function with dual value/coefficient access.
struct Field {
  std::shared_ptr<const Grid1D> grid;
  std::vector<cplx> v;

  Field() = default;
  explicit Field(std::shared_ptr<const Grid1D> g)
      : grid(std::move(g)), v(grid->n, cplx(0.0)) {}

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx c);
  double max_abs() const;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx c, Field a);

/// Fourier multiplier m(xi) applied to v. Throws NumericError if m is not
/// finite at a grid frequency.
Field multiplier(const std::function<double(double)>& m, const Field& v);
Field multiplier_c(const std::function<cplx(double)>& m, const Field& v);

/// L2 inner product <u, v> = sum u conj(v) L/n.
cplx inner(const Field& a, const Field& b);
double norm_l2(const Field& a);

/// H^s norm: sqrt(L sum <xi_k>^{2s} |u_hat_k|^2).
double sobolev_norm(const Field& v, double s);

/// Left-quantized operator with symbol polynomial in xi of degree <= 4:
/// Op(s)u = sum_d c_d(t,x) (D_x^d u). Coefficients are extracted per (t,x)
/// by solving a fixed 5-node Vandermonde system; a dense fallback covers
/// non-polynomial symbols (with a warning flag).
class XiPolyOp {
 public:
  XiPolyOp(CoefficientField sym, std::shared_ptr<const Grid1D> grid);

  Field apply(double t, const Field& u) const;
  bool polynomial() const { return polynomial_; }

 private:
  CoefficientField sym_;
  std::shared_ptr<const Grid1D> grid_;
  bool polynomial_ = true;

  void coeffs_at(double t, std::vector<std::array<double, 5>>& c) const;
};

struct State {
  Field u, u1, u2;  // u, du/dt, d2u/dt2
  double t = 0.0;
};

/// Realization of the scaled operator on the grid; owns the per-term
/// quantized coefficients.
class OperatorP {
 public:
  OperatorP(const ReducedOperator& r, std::shared_ptr<const Grid1D> grid);

  /// P u with the third time derivative supplied by the caller.
  Field apply(const State& s, const Field& uppp) const;

  /// Everything except the i*u''' term (used by the solver closure).
  Field apply_rest(const State& s) const;

  const ReducedOperator& reduced() const { return r_; }
  const std::shared_ptr<const Grid1D>& grid() const { return grid_; }

  /// Step bound h <= c_cfl / (max|xi| sqrt(max a2/xi^2)).
  double cfl_step(double T, double c_cfl = 0.5) const;

  /// False when some coefficient's x-spectrum fails to decay below 1e-12
  /// (relative) at the Nyquist mode, i.e. the grid under-resolves it.
  bool coefficients_resolved(double T) const;

 private:
  ReducedOperator r_;
  std::shared_ptr<const Grid1D> grid_;
  XiPolyOp a2_, alpha_, b3_, b1_, c1_;
  XiPolyOp b2re_, b2im_;
  double e13_, e23_, em23_, e43_, e2_;
};

struct Trajectory {
  std::vector<State> states;
  double dt = 0.0;
};

/// Classical RK4 on the first-order system for (u, u', u''), with u'''
/// solved from P u = F. Data-at-T backward runs are requested by passing
/// t_end < data.t.
Trajectory solve_cauchy(const OperatorP& op, const State& data,
                        const std::function<Field(double)>& forcing, double t_end,
                        int steps);

/// Manufactured product solution u = g(t) phi(x) with exact derivatives:
/// g is a polynomial in (t - t0) with complex coefficients (lowest power
/// >= 3 so the traces vanish at t0).
struct Manufactured {
  std::vector<cplx> coeff;  // g(t) = sum_k coeff[k] (t-t0)^k
  double t0 = 0.0;
  Field phi;

  cplx g(double t, int deriv) const;
  State state(double t) const;
  Field time_derivative3(double t) const;
};

/// Random manufactured solution with spatial spectrum below k_max.
Manufactured random_manufactured(std::shared_ptr<const Grid1D> grid, unsigned seed,
                                 double t0, int k_max = 5);

}  // namespace trihyp
