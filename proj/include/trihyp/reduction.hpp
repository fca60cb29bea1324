#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trihyp/field.hpp"
#include "trihyp/symbols.hpp"

namespace trihyp {

/// Normal-form data: p3 = tau^3 - (t a2 + alpha) tau + t^2 b3 plus lower
/// order symbols, with the scaling parameter eps recorded. eps = 1 means
/// the unscaled operator.
struct ReducedOperator {
  CoefficientField a2 = CoefficientField::zero(2);
  CoefficientField alpha = CoefficientField::zero(2);
  CoefficientField b3 = CoefficientField::zero(3);
  CoefficientField b2_re = CoefficientField::zero(2);
  CoefficientField b2_im = CoefficientField::zero(2);
  CoefficientField b1 = CoefficientField::zero(1);
  CoefficientField b0 = CoefficientField::zero(0);
  CoefficientField c1 = CoefficientField::zero(1);
  CoefficientField c0 = CoefficientField::zero(0);
  CoefficientField d0 = CoefficientField::zero(0);
  double eps = 1.0;
  double delta_ellipticity = 0.0;
  std::string provenance = "direct";

  /// Principal symbol tau^3 - (t a2 + alpha) tau + t^2 b3.
  double p3(double t, double x, double tau, double xi) const {
    return tau * tau * tau - (t * a2(t, x, xi) + alpha(t, x, xi)) * tau +
           t * t * b3(t, x, xi);
  }
};

struct DepressedForm {
  CoefficientField r2;  // delta0 / 3
  CoefficientField r3;  // delta1 / 27
};

/// Removes the tau^2 term: p3(tau = sigma - q1/3) = sigma^3 - r2 sigma + r3.
DepressedForm depress(const OperatorModel& m);

/// Tabulated solution of the transport system f_t + alpha1(t,x) f_x = 0,
/// f(0,x) = x, on a uniform grid. J is the x-derivative of f.
struct CharacteristicChart {
  std::vector<double> ts, xs;
  std::vector<std::vector<double>> y;  // y[i][j] = f(ts[i], xs[j])
  std::vector<std::vector<double>> jacobian;
  double valid_t = 0.0;
  bool truncated = false;
};

CharacteristicChart transport_coords(const OperatorModel& m, int nt, int nx);

/// sup over interior grid nodes of |f_t + alpha1 f_x| by central differences.
double chart_residual(const OperatorModel& m, const CharacteristicChart& chart);

struct SplitR2 {
  CoefficientField alpha;  // r2(0, x, xi)
  CoefficientField a2;     // (r2 - alpha)/t with the t->0 derivative limit
  double delta = 0.0;      // estimated ellipticity constant of a2
  bool h1_pass = false;    // a2 uniformly elliptic on the samples
};

SplitR2 split_r2(const CoefficientField& r2, const DomainBox& domain,
                 int nt = 32, int nx = 32);

struct B3Extraction {
  bool h2_pass = false;
  CoefficientField b3;      // r3 / t^2 with the second-derivative limit
  double max_r3_at_0 = 0.0;
  double max_dt_r3_at_0 = 0.0;
};

B3Extraction extract_b3(const CoefficientField& r3, const std::vector<double>& xs,
                        double T);

struct AlphaDegeneracyReport {
  bool pass = false;
  double max_gradient = 0.0;
  double min_hessian = 0.0;  // of the x-Hessian over sampled xi
};

/// Confirms grad_x alpha(x0) ~ 0 and a PSD x-Hessian, the content of the
/// quadratic representation of a nonnegative alpha vanishing at x0.
AlphaDegeneracyReport verify_alpha_degenerate(const CoefficientField& alpha,
                                              double x0);

/// Substitutes t -> eps^{2/3} t, x -> eps x into every coefficient field.
/// Term prefactors are attached when the operator is applied.
ReducedOperator scale_epsilon(const ReducedOperator& r, double eps);

/// Full pipeline for a model already free of the tau^2 term (q1 == 0):
/// depress (a no-op shift), split r2, extract b3 under H2, take b2 = p2.
ReducedOperator reduce_model(const OperatorModel& m, int nt = 32, int nx = 32);

}  // namespace trihyp
