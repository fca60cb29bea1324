#pragma once

#include <array>
#include <optional>
#include <vector>

#include "trihyp/field.hpp"
#include "trihyp/polyroots.hpp"

namespace trihyp {

struct DomainBox {
  double T = 1.0;
  double x_lo = -1.0;
  double x_hi = 1.0;

  bool contains(double t, double x) const {
    return t >= 0.0 && t <= T && x >= x_lo && x <= x_hi;
  }
};

/// Third-order operator data: principal cubic tau^3 + q1 tau^2 + q2 tau + q3
/// plus the complex second-order lower symbol p2 = p2_re + i p2_im.
struct OperatorModel {
  CoefficientField q1 = CoefficientField::zero(1);
  CoefficientField q2 = CoefficientField::zero(2);
  CoefficientField q3 = CoefficientField::zero(3);
  CoefficientField p2_re = CoefficientField::zero(2);
  CoefficientField p2_im = CoefficientField::zero(2);
  std::vector<CoefficientField> lower;  // optional first/zeroth order symbols
  DomainBox domain;
  int space_dim = 1;

  double p3(double t, double x, double tau, double xi) const {
    return ((tau + q1(t, x, xi)) * tau + q2(t, x, xi)) * tau + q3(t, x, xi);
  }
};

enum class RootClass { simple, double_root, triple, complex_pair };

const char* root_class_name(RootClass c);

struct DiscriminantReport {
  double delta0 = 0.0;  // q1^2 - 3 q2
  double delta1 = 0.0;  // 27 q3 - 9 q1 q2 + 2 q1^3
  double delta = 0.0;   // -(1/27)(delta1^2 - 4 delta0^3)
  double triple_root_candidate = 0.0;  // -q1/3
  RootClass classification = RootClass::simple;
};

struct RootSet {
  std::array<cplx, 3> roots{};
  bool all_real = false;
  double max_residual = 0.0;
  bool used_degenerate_form = false;
};

/// Discriminant tolerance scaled with the degree-6 homogeneity of delta.
double tol_disc(double xi);

double eval_p3(const OperatorModel& m, double t, double x, double tau, double xi);

DiscriminantReport discriminants(const OperatorModel& m, double t, double x, double xi);

RootSet roots(const OperatorModel& m, double t, double x, double xi);

/// Natural size of the cubic at (t,x,xi): max(1,|q1|,|q2|^(1/2),|q3|^(1/3))^3.
double p3_scale(const OperatorModel& m, double t, double x, double xi);

struct H0Violation {
  double t, x, xi, delta;
};

struct H0Report {
  double min_delta = 0.0;
  bool pass = false;
  std::vector<H0Violation> violations;
};

/// Sweeps delta over [0,T] x [x_lo,x_hi] x {-1,+1}. H0 holds iff
/// min delta >= -tol_disc.
H0Report scan_hyperbolicity(const OperatorModel& m, int nt, int nx);

struct TripleLocusPoint {
  double x = 0.0;
  double lambda = 0.0;    // triple root -q1/3 at xi = +1
  bool all_xi = true;     // triple for every sampled xi (else an H1 violation)
};

struct TripleLocusReport {
  std::vector<TripleLocusPoint> points;
  bool h1_violation = false;
};

/// Scans t = 0 for points x with delta0 ~ 0 and delta ~ 0 on the xi sphere.
TripleLocusReport detect_triple_locus(const OperatorModel& m,
                                      const std::vector<double>& xs);

}  // namespace trihyp
