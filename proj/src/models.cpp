#include "trihyp/models.hpp"
#include <cmath>

namespace trihyp {

OperatorModel effective_model(double b2_coeff) {
  OperatorModel m;
  m.q2 = CoefficientField::parse("-(t + x^2)*xi^2", 2);
  m.q3 = CoefficientField::parse("t^2*xi^3", 3);
  if (b2_coeff != 0.0)
    m.p2_re = CoefficientField(Expr::constant(b2_coeff) * Expr::parse("xi^2"), 2);
  m.domain = {0.12, -1.0, 1.0};
  return m;
}

ReducedOperator effective_reduced(double b2_coeff) {
  ReducedOperator r;
  r.a2 = CoefficientField::parse("xi^2", 2);
  r.alpha = CoefficientField::parse("x^2*xi^2", 2);
  r.b3 = CoefficientField::parse("xi^3", 3);
  if (b2_coeff != 0.0)
    r.b2_re = CoefficientField(Expr::constant(b2_coeff) * Expr::parse("xi^2"), 2);
  r.delta_ellipticity = 1.0;
  r.provenance = "bundled-effective";
  return r;
}

ReducedOperator effective_reduced_frozen(double b2_coeff) {
  ReducedOperator r = effective_reduced(b2_coeff);
  r.alpha = CoefficientField::zero(2);
  r.provenance = "bundled-effective-frozen";
  return r;
}

ReducedOperator effective_scaled_periodic(double eps, double b2_coeff) {
  ReducedOperator r = effective_reduced(b2_coeff);
  r.alpha = CoefficientField(
      [eps](double, double x, double xi) {
        double s = 2.0 * std::sin(x / 2.0);
        return eps * eps * s * s * xi * xi;
      },
      2);
  r.eps = eps;
  r.provenance = "bundled-effective-scaled-periodic";
  return r;
}

OperatorModel strict_model() {
  OperatorModel m;
  m.q2 = CoefficientField::parse("-xi^2", 2);
  m.domain = {0.12, -1.0, 1.0};
  return m;
}

OperatorModel contrast_model(double c) {
  OperatorModel m;
  m.q2 = CoefficientField::parse("-t^2*xi^2", 2);
  if (c != 0.0)
    m.p2_re = CoefficientField(Expr::constant(c) * Expr::parse("xi^2"), 2);
  m.domain = {0.12, -1.0, 1.0};
  return m;
}

}  // namespace trihyp
