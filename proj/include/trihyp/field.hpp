#pragma once

#include <functional>
#include <string>
#include <vector>

#include "trihyp/expr.hpp"

namespace trihyp {

/// A smooth coefficient field c(t, x, xi) with a declared homogeneity
/// degree in xi. Backed either by an expression tree (exact partials) or
/// by an arbitrary callable (central-difference partials).
class CoefficientField {
 public:
  using Fn = std::function<double(double, double, double)>;

  CoefficientField() = default;
  CoefficientField(Expr e, int degree);
  CoefficientField(Fn fn, int degree);
  static CoefficientField zero(int degree = 0);
  static CoefficientField parse(const std::string& text, int degree);

  double operator()(double t, double x, double xi) const { return fn_(t, x, xi); }
  double eval(double t, double x, double xi) const { return fn_(t, x, xi); }

  int degree() const { return degree_; }
  bool has_analytic_partials() const { return analytic_; }
  bool is_zero() const;

  /// First partial; var is "t", "x" or "xi".
  double partial(const std::string& var, double t, double x, double xi) const;
  /// Second partial d^2/(dv1 dv2).
  double partial2(const std::string& v1, const std::string& v2, double t, double x,
                  double xi) const;

  /// Samples eval(t,x,s*xi) == s^degree * eval(t,x,xi) at random points.
  /// Returns the worst relative defect.
  double homogeneity_defect(unsigned seed, int samples = 100) const;

  const Expr& expr() const { return expr_; }

 private:
  Fn fn_;
  Expr expr_;          // empty for callable-backed fields
  Expr d_[3];          // dt, dx, dxi when analytic
  Expr d2_[3][3];
  int degree_ = 0;
  bool analytic_ = false;
};

/// Central-difference step scaled to the argument magnitude.
double fd_step(double v);

}  // namespace trihyp
