#include "trihyp/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "trihyp/errors.hpp"

namespace trihyp {

DepressedForm depress(const OperatorModel& m) {
  DepressedForm d;
  if (m.q1.has_analytic_partials() && m.q2.has_analytic_partials() &&
      m.q3.has_analytic_partials()) {
    Expr q1 = m.q1.expr(), q2 = m.q2.expr(), q3 = m.q3.expr();
    Expr r2 = (q1 * q1 - Expr::constant(3.0) * q2) / Expr::constant(3.0);
    Expr r3 =
        (Expr::constant(27.0) * q3 - Expr::constant(9.0) * q1 * q2 +
         Expr::constant(2.0) * q1 * q1 * q1) /
        Expr::constant(27.0);
    d.r2 = CoefficientField(r2, 2);
    d.r3 = CoefficientField(r3, 3);
  } else {
    auto q1 = m.q1, q2 = m.q2, q3 = m.q3;
    d.r2 = CoefficientField(
        [q1, q2](double t, double x, double xi) {
          double a = q1(t, x, xi);
          return (a * a - 3.0 * q2(t, x, xi)) / 3.0;
        },
        2);
    d.r3 = CoefficientField(
        [q1, q2, q3](double t, double x, double xi) {
          double a = q1(t, x, xi);
          return (27.0 * q3(t, x, xi) - 9.0 * a * q2(t, x, xi) + 2.0 * a * a * a) /
                 27.0;
        },
        3);
  }
  return d;
}

namespace {

// dX/dt = alpha1(t, X) with alpha1 = q1(t,x,1)/3, classical RK4.
double rk4_flow(const CoefficientField& q1, double t0, double x0, double t1,
                int steps) {
  auto a1 = [&](double t, double x) { return q1(t, x, 1.0) / 3.0; };
  double h = (t1 - t0) / steps;
  double x = x0, t = t0;
  for (int i = 0; i < steps; ++i) {
    double k1 = a1(t, x);
    double k2 = a1(t + h / 2, x + h / 2 * k1);
    double k3 = a1(t + h / 2, x + h / 2 * k2);
    double k4 = a1(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

}  // namespace

CharacteristicChart transport_coords(const OperatorModel& m, int nt, int nx) {
  if (nt < 2 || nx < 2) throw InputError("transport grid too small");
  CharacteristicChart ch;
  ch.ts.resize(nt + 1);
  ch.xs.resize(nx + 1);
  for (int i = 0; i <= nt; ++i) ch.ts[i] = m.domain.T * i / nt;
  for (int j = 0; j <= nx; ++j)
    ch.xs[j] = m.domain.x_lo + (m.domain.x_hi - m.domain.x_lo) * j / nx;

  // f(t,x) traces the characteristic through (t,x) back to the initial
  // line; per-node backward RK4 keeps the tabulated values interpolation
  // free (default step T/512, at least 8 substeps per node).
  int base_steps = 512;
  ch.y.assign(nt + 1, std::vector<double>(nx + 1));
  ch.jacobian.assign(nt + 1, std::vector<double>(nx + 1, 1.0));
  for (int i = 0; i <= nt; ++i) {
    double t = ch.ts[i];
    int steps = std::max(8, static_cast<int>(base_steps * (t / std::max(m.domain.T, 1e-12))));
    for (int j = 0; j <= nx; ++j) {
      ch.y[i][j] = (i == 0) ? ch.xs[j] : rk4_flow(m.q1, t, ch.xs[j], 0.0, steps);
    }
  }
  double hx = ch.xs[1] - ch.xs[0];
  for (int i = 0; i <= nt; ++i) {
    for (int j = 0; j <= nx; ++j) {
      if (j == 0)
        ch.jacobian[i][j] = (ch.y[i][1] - ch.y[i][0]) / hx;
      else if (j == nx)
        ch.jacobian[i][j] = (ch.y[i][nx] - ch.y[i][nx - 1]) / hx;
      else
        ch.jacobian[i][j] = (ch.y[i][j + 1] - ch.y[i][j - 1]) / (2 * hx);
    }
  }

  ch.valid_t = m.domain.T;
  for (int i = 0; i <= nt && !ch.truncated; ++i) {
    for (int j = 0; j <= nx; ++j) {
      if (std::fabs(ch.jacobian[i][j]) < 0.1) {
        ch.valid_t = ch.ts[std::max(0, i - 1)];
        ch.truncated = true;
        break;
      }
    }
  }
  return ch;
}

double chart_residual(const OperatorModel& m, const CharacteristicChart& chart) {
  double ht = chart.ts[1] - chart.ts[0];
  double hx = chart.xs[1] - chart.xs[0];
  double worst = 0.0;
  for (size_t i = 1; i + 1 < chart.ts.size(); ++i) {
    for (size_t j = 1; j + 1 < chart.xs.size(); ++j) {
      double ft = (chart.y[i + 1][j] - chart.y[i - 1][j]) / (2 * ht);
      double fx = (chart.y[i][j + 1] - chart.y[i][j - 1]) / (2 * hx);
      double a1 = m.q1(chart.ts[i], chart.xs[j], 1.0) / 3.0;
      worst = std::max(worst, std::fabs(ft + a1 * fx));
    }
  }
  return worst;
}

SplitR2 split_r2(const CoefficientField& r2, const DomainBox& domain, int nt,
                 int nx) {
  SplitR2 out;
  CoefficientField r2c = r2;
  out.alpha = CoefficientField(
      [r2c](double, double x, double xi) { return r2c(0.0, x, xi); }, 2);

  double T = domain.T;
  double h0 = 1e-4 * std::max(T, 1e-8);
  out.a2 = CoefficientField(
      [r2c, h0](double t, double x, double xi) {
        if (t > 0.0) return (r2c(t, x, xi) - r2c(0.0, x, xi)) / t;
        // one-sided second-order derivative at t = 0
        return (-3.0 * r2c(0.0, x, xi) + 4.0 * r2c(h0, x, xi) - r2c(2.0 * h0, x, xi)) /
               (2.0 * h0);
      },
      2);

  // precondition: r2(0,x,xi) >= -tol near the locus
  double alpha_min = 0.0;
  out.delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nt; ++i) {
    double t = T * i / nt;
    for (int j = 0; j <= nx; ++j) {
      double x = domain.x_lo + (domain.x_hi - domain.x_lo) * j / nx;
      for (double xi : {-1.0, 1.0}) {
        alpha_min = std::min(alpha_min, out.alpha(0.0, x, xi));
        out.delta = std::min(out.delta, out.a2(t, x, xi));
      }
    }
  }
  if (alpha_min < -1e-9)
    throw PreconditionError("r2(0,x,xi) is negative on samples: not hyperbolic near the triple locus");
  out.h1_pass = out.delta > 0.0;
  return out;
}

B3Extraction extract_b3(const CoefficientField& r3, const std::vector<double>& xs,
                        double T) {
  if (xs.empty()) throw InputError("extract_b3 needs a nonempty x grid");
  B3Extraction out;
  double h = 1e-4 * std::max(T, 1e-8);
  double scale = 0.0;
  for (double x : xs) {
    for (double xi : {-1.0, 1.0}) {
      double v0 = r3(0.0, x, xi);
      double dt = (-3.0 * v0 + 4.0 * r3(h, x, xi) - r3(2.0 * h, x, xi)) / (2.0 * h);
      out.max_r3_at_0 = std::max(out.max_r3_at_0, std::fabs(v0));
      out.max_dt_r3_at_0 = std::max(out.max_dt_r3_at_0, std::fabs(dt));
      scale = std::max({scale, std::fabs(r3(T, x, xi)), 1.0});
    }
  }
  out.h2_pass = out.max_r3_at_0 <= 1e-6 * scale && out.max_dt_r3_at_0 <= 1e-5 * scale;

  CoefficientField r3c = r3;
  out.b3 = CoefficientField(
      [r3c, h](double t, double x, double xi) {
        if (t > 0.0) return r3c(t, x, xi) / (t * t);
        // (1/2) d^2/dt^2 r3 at 0 by a one-sided second difference
        double d2 = (2.0 * r3c(0.0, x, xi) - 5.0 * r3c(h, x, xi) +
                     4.0 * r3c(2.0 * h, x, xi) - r3c(3.0 * h, x, xi)) /
                    (h * h);
        return 0.5 * d2;
      },
      3);
  return out;
}

AlphaDegeneracyReport verify_alpha_degenerate(const CoefficientField& alpha,
                                              double x0) {
  AlphaDegeneracyReport rep;
  rep.min_hessian = std::numeric_limits<double>::infinity();
  for (double xi : {-1.0, 1.0}) {
    if (alpha(0.0, x0, xi) > 1e-9 || alpha(0.0, x0, xi) < -1e-9)
      throw PreconditionError("alpha(x0, xi) != 0 at the declared locus");
    double g = alpha.partial("x", 0.0, x0, xi);
    double hxx = alpha.partial2("x", "x", 0.0, x0, xi);
    rep.max_gradient = std::max(rep.max_gradient, std::fabs(g));
    rep.min_hessian = std::min(rep.min_hessian, hxx);
  }
  // a nonzero gradient at an interior zero contradicts alpha >= 0
  rep.pass = rep.max_gradient < 1e-5 && rep.min_hessian > -1e-7;
  return rep;
}

ReducedOperator scale_epsilon(const ReducedOperator& r, double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must lie in (0,1]");
  ReducedOperator s = r;
  s.eps = eps;
  s.provenance = r.provenance + ";scaled";
  double e23 = std::pow(eps, 2.0 / 3.0);
  auto subst = [eps, e23](const CoefficientField& f) {
    CoefficientField g = f;
    return CoefficientField(
        [g, eps, e23](double t, double x, double xi) {
          return g(e23 * t, eps * x, xi);
        },
        g.degree());
  };
  auto subst_x = [eps](const CoefficientField& f) {
    CoefficientField g = f;
    return CoefficientField(
        [g, eps](double t, double x, double xi) { return g(t, eps * x, xi); },
        g.degree());
  };
  s.a2 = subst(r.a2);
  s.alpha = subst_x(r.alpha);  // alpha has no t dependence
  s.b3 = subst(r.b3);
  s.b2_re = subst(r.b2_re);
  s.b2_im = subst(r.b2_im);
  s.b1 = subst(r.b1);
  s.b0 = subst(r.b0);
  s.c1 = subst(r.c1);
  s.c0 = subst(r.c0);
  s.d0 = subst(r.d0);
  return s;
}

ReducedOperator reduce_model(const OperatorModel& m, int nt, int nx) {
  auto dep = depress(m);
  auto split = split_r2(dep.r2, m.domain, nt, nx);
  std::vector<double> xs;
  for (int j = 0; j <= nx; ++j)
    xs.push_back(m.domain.x_lo + (m.domain.x_hi - m.domain.x_lo) * j / nx);
  auto b3x = extract_b3(dep.r3, xs, m.domain.T);

  ReducedOperator r;
  r.a2 = split.a2;
  r.alpha = split.alpha;
  r.b3 = b3x.b3;
  r.b2_re = m.p2_re;
  r.b2_im = m.p2_im;
  r.delta_ellipticity = split.delta;
  r.provenance = b3x.h2_pass ? "reduced" : "reduced;H2-failed";
  return r;
}

}  // namespace trihyp
