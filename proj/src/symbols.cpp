#include "trihyp/symbols.hpp"

#include <algorithm>
#include <cmath>

#include "trihyp/errors.hpp"

namespace trihyp {

const char* root_class_name(RootClass c) {
  switch (c) {
    case RootClass::simple: return "simple";
    case RootClass::double_root: return "double";
    case RootClass::triple: return "triple";
    case RootClass::complex_pair: return "complex_pair";
  }
  return "?";
}

double tol_disc(double xi) {
  double b = 1.0 + std::fabs(xi);
  double b2 = b * b;
  return 1e-10 * b2 * b2 * b2;
}

// delta0 is homogeneous of degree 2, so its tolerance scales accordingly.
static double tol_disc0(double xi) {
  double b = 1.0 + std::fabs(xi);
  return 1e-10 * b * b;
}

double eval_p3(const OperatorModel& m, double t, double x, double tau, double xi) {
  if (!m.domain.contains(t, x))
    throw DomainError("point (t,x) outside the configured domain box");
  return m.p3(t, x, tau, xi);
}

DiscriminantReport discriminants(const OperatorModel& m, double t, double x,
                                 double xi) {
  double q1 = m.q1(t, x, xi), q2 = m.q2(t, x, xi), q3 = m.q3(t, x, xi);
  DiscriminantReport r;
  r.delta0 = q1 * q1 - 3.0 * q2;
  r.delta1 = 27.0 * q3 - 9.0 * q1 * q2 + 2.0 * q1 * q1 * q1;
  r.delta = -(r.delta1 * r.delta1 - 4.0 * r.delta0 * r.delta0 * r.delta0) / 27.0;
  r.triple_root_candidate = -q1 / 3.0;

  double tol = tol_disc(xi), tol0 = tol_disc0(xi);
  if (r.delta < -tol) {
    r.classification = RootClass::complex_pair;
  } else if (std::fabs(r.delta) <= tol) {
    r.classification = (std::fabs(r.delta0) <= tol0) ? RootClass::triple
                                                     : RootClass::double_root;
  } else {
    r.classification = RootClass::simple;
  }
  return r;
}

double p3_scale(const OperatorModel& m, double t, double x, double xi) {
  double s = std::max({1.0, std::fabs(m.q1(t, x, xi)),
                       std::sqrt(std::fabs(m.q2(t, x, xi))),
                       std::cbrt(std::fabs(m.q3(t, x, xi)))});
  return s * s * s;
}

RootSet roots(const OperatorModel& m, double t, double x, double xi) {
  double q1 = m.q1(t, x, xi), q2 = m.q2(t, x, xi), q3 = m.q3(t, x, xi);
  RootSet rs;
  rs.roots = cubic_roots(q1, q2, q3);

  auto rep = discriminants(m, t, x, xi);
  rs.used_degenerate_form = rep.classification == RootClass::triple ||
                            rep.classification == RootClass::double_root;

  double scale = p3_scale(m, t, x, xi);
  double tol_im = 1e-7 * std::cbrt(scale);
  rs.all_real = true;
  rs.max_residual = 0.0;
  for (const cplx& r : rs.roots) {
    if (std::fabs(r.imag()) > tol_im) rs.all_real = false;
    cplx p = ((r + q1) * r + q2) * r + q3;
    rs.max_residual = std::max(rs.max_residual, std::abs(p));
  }
  return rs;
}

H0Report scan_hyperbolicity(const OperatorModel& m, int nt, int nx) {
  if (nt < 1 || nx < 1) throw InputError("hyperbolicity scan needs a nonempty grid");
  H0Report rep;
  rep.min_delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nt; ++i) {
    double t = m.domain.T * i / nt;
    for (int j = 0; j <= nx; ++j) {
      double x = m.domain.x_lo + (m.domain.x_hi - m.domain.x_lo) * j / nx;
      for (double xi : {-1.0, 1.0}) {
        auto d = discriminants(m, t, x, xi);
        rep.min_delta = std::min(rep.min_delta, d.delta);
        if (d.delta < -tol_disc(xi)) rep.violations.push_back({t, x, xi, d.delta});
      }
    }
  }
  rep.pass = rep.min_delta >= -tol_disc(1.0);
  return rep;
}

TripleLocusReport detect_triple_locus(const OperatorModel& m,
                                      const std::vector<double>& xs) {
  if (xs.empty()) throw InputError("triple locus scan needs a nonempty x grid");
  TripleLocusReport rep;
  for (double x : xs) {
    int hits = 0, total = 0;
    double lambda = 0.0;
    for (double xi : {-1.0, 1.0}) {
      ++total;
      auto d = discriminants(m, 0.0, x, xi);
      if (d.classification == RootClass::triple) {
        ++hits;
        if (xi > 0) lambda = d.triple_root_candidate;
      }
    }
    if (hits == total) {
      rep.points.push_back({x, lambda, true});
    } else if (hits > 0) {
      rep.points.push_back({x, lambda, false});
      rep.h1_violation = true;
    }
  }
  return rep;
}

}  // namespace trihyp
