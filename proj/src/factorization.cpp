#include "trihyp/factorization.hpp"

#include <algorithm>
#include <cmath>

#include "trihyp/errors.hpp"
#include "trihyp/polyroots.hpp"

namespace trihyp {

NewtonRoot solve_rho(double t, double a2, double b3, int max_iters) {
  NewtonRoot out;
  double rho = b3 / a2;
  for (int it = 1; it <= max_iters; ++it) {
    double F = t * rho * rho * rho - a2 * rho + b3;
    double dF = 3.0 * t * rho * rho - a2;
    if (dF == 0.0) break;
    double step = F / dF;
    rho -= step;
    out.iters = it;
    if (std::fabs(step) <= 1e-15 * (1.0 + std::fabs(rho))) {
      out.converged = true;
      break;
    }
  }
  out.rho = rho;
  return out;
}

FactorizationResult smooth_root(const ReducedOperator& r,
                                const std::vector<double>& ts,
                                const std::vector<double>& xs) {
  FactorizationResult res;
  res.min_b = std::numeric_limits<double>::infinity();
  for (double x : xs)
    for (double xi : {-1.0, 1.0})
      if (std::fabs(r.alpha(0.0, x, xi)) > 1e-12)
        throw PreconditionError("smooth_root requires alpha == 0 on the samples");

  for (double t : ts) {
    for (double x : xs) {
      for (double xi : {-1.0, 1.0}) {
        double a2 = r.a2(t, x, xi), b3 = r.b3(t, x, xi);
        auto nr = solve_rho(t, a2, b3);
        FactorizationResult::Entry e;
        e.t = t;
        e.x = x;
        e.xi = xi;
        e.rho = nr.rho;
        e.gamma = t * nr.rho;
        e.a = -e.gamma / 2.0;
        e.b = t * a2 - 3.0 * e.a * e.a;
        e.newton_iters = nr.iters;
        e.converged = nr.converged;
        res.max_newton_iters = std::max(res.max_newton_iters, nr.iters);
        res.min_b = std::min(res.min_b, e.b);
        if (!nr.converged) res.failed.push_back(res.entries.size());
        res.entries.push_back(e);

        // factorization residual over a tau sample set, relative to the
        // natural cubic scale at those tau values
        double tau_scale = std::sqrt(std::fabs(t * a2)) + std::fabs(e.gamma) + 1.0;
        double p3_scale = tau_scale * tau_scale * tau_scale;
        for (int k = -4; k <= 4; ++k) {
          double tau = tau_scale * k / 4.0;
          double p3 = tau * tau * tau - t * a2 * tau + t * t * b3;
          double fac = ((tau - e.a) * (tau - e.a) - e.b) * (tau - e.gamma);
          res.residual = std::max(res.residual, std::fabs(p3 - fac) / p3_scale);
        }
      }
    }
  }
  return res;
}

CardanoBranch cardano_branch(const ReducedOperator& r, double t, double x,
                             double xi) {
  if (!(t > 0.0)) throw PreconditionError("cardano_branch requires t > 0");
  double a2 = r.a2(t, x, xi), b3 = r.b3(t, x, xi);
  double t3 = t * t * t;
  double delta = 4.0 * t3 * a2 * a2 * a2 - 27.0 * t3 * t * b3 * b3;

  CardanoBranch out;
  if (delta < -tol_disc(xi)) {
    out.complex_pair = true;
    return out;
  }
  cplx inner = cplx(27.0 * t * t * b3) + std::sqrt(cplx(-27.0 * delta));
  out.C = std::pow(inner / 2.0, 1.0 / 3.0);  // principal branch, arg in (-pi/3, pi/3]

  const cplx u[3] = {cplx(1.0), cplx(-0.5, std::sqrt(3.0) / 2.0),
                     cplx(-0.5, -std::sqrt(3.0) / 2.0)};
  for (int k = 0; k < 3; ++k) {
    cplx uc = u[k] * out.C;
    out.roots[k] = -(uc + 3.0 * t * a2 / uc) / 3.0;
  }

  auto nr = solve_rho(t, a2, b3);
  double gamma = t * nr.rho;
  double best = 1e300;
  for (int k = 0; k < 3; ++k) {
    if (std::fabs(out.roots[k].imag()) > 1e-7 * (1.0 + std::abs(out.roots[k])))
      continue;
    double d = std::fabs(out.roots[k].real() - gamma);
    if (d < best) {
      best = d;
      out.real_branch = k;
    }
  }
  return out;
}

DerivativeFit derivative_check(const ReducedOperator& r, double x, double xi,
                               int j0, int j1) {
  DerivativeFit fit;
  double a20 = r.a2(0.0, x, xi), b30 = r.b3(0.0, x, xi);
  fit.limit = b30 / a20;

  for (int j = j0; j <= j1; ++j) {
    double t = std::ldexp(1.0, -j);
    double a2 = r.a2(t, x, xi), b3 = r.b3(t, x, xi);
    // stay inside the three-real-roots region
    if (4.0 * a2 * a2 * a2 < 27.0 * t * b3 * b3) continue;
    auto nr = solve_rho(t, a2, b3);
    if (!nr.converged) continue;
    fit.ts.push_back(t);
    fit.devs.push_back(std::fabs(nr.rho - fit.limit));
  }

  bool all_tiny = true;
  for (double d : fit.devs) all_tiny &= (d < 1e-14);
  if (fit.devs.empty() || all_tiny) {
    fit.exact = true;
    return fit;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < fit.ts.size(); ++i) {
    if (fit.devs[i] < 1e-14) continue;
    double lx = std::log(fit.ts[i]), ly = std::log(fit.devs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  fit.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.C = std::exp((sy - fit.beta * sx) / n);
  fit.in_band = fit.beta >= 0.35 && fit.beta <= 0.65;
  return fit;
}

namespace {

// true when tau^3 - (t a2 + alpha) tau + t^2 b3 has three real roots
bool three_real_roots(double t, double a2v, double alphav, double b3v) {
  double r2 = t * a2v + alphav;
  return 4.0 * r2 * r2 * r2 - 27.0 * t * t * t * t * b3v * b3v >= 0.0;
}

double nearest_real_root(double t, double a2v, double alphav, double b3v,
                         double prev) {
  auto rr = cubic_roots(0.0, -(t * a2v + alphav), t * t * b3v);
  double best = prev;
  double bestd = 1e300;
  for (const auto& z : rr) {
    if (std::fabs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) continue;
    double d = std::fabs(z.real() - prev);
    if (d < bestd) {
      bestd = d;
      best = z.real();
    }
  }
  return best;
}

// Numerical branch continuation along a path x -> (t(x), x): geometric
// substeps keep the tracked root on its branch between the coarse path
// points. Returns the root at x_to.
template <typename TimeOfX>
double continue_branch(const ReducedOperator& r, double xi0, TimeOfX t_of_x,
                       double x_from, double x_to, double prev) {
  const int substeps = 32;
  double ratio = std::pow(x_to / x_from, 1.0 / substeps);
  double x = x_from;
  for (int s = 1; s <= substeps; ++s) {
    x = (s == substeps) ? x_to : x * ratio;
    double t = t_of_x(x);
    prev = nearest_real_root(t, r.a2(t, x, xi0), r.alpha(0.0, x, xi0),
                             r.b3(t, x, xi0), prev);
  }
  return prev;
}

// smallest-magnitude real root (the branch through the triple point)
double smallest_real_root(double t, double a2v, double alphav, double b3v) {
  auto rr = cubic_roots(0.0, -(t * a2v + alphav), t * t * b3v);
  double best = 0.0, bestd = 1e300;
  for (const auto& z : rr) {
    if (std::fabs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) continue;
    if (std::abs(z) < bestd) {
      bestd = std::abs(z);
      best = z.real();
    }
  }
  return best;
}

}  // namespace

ProbeReport nonfactorizability_probe(const ReducedOperator& r, double xi0,
                                     int m_max) {
  ProbeReport rep;
  double b3_origin = r.b3(0.0, 0.0, xi0);
  if (std::fabs(b3_origin) < 1e-12)
    throw PreconditionError("probe requires b3(0,0,xi0) != 0");

  bool alpha_zero = true;
  for (int m = 1; m <= m_max && alpha_zero; ++m)
    alpha_zero &= std::fabs(r.alpha(0.0, std::ldexp(1.0, -m), xi0)) < 1e-14;

  if (alpha_zero) {
    // alpha == 0 is exactly the factorizable regime; run the same quotient
    // measurement along the |x_m|-driven paths as a control.
    bool really_zero = true;
    for (double x = -1.0; x <= 1.0; x += 1.0 / 64)
      really_zero &= std::fabs(r.alpha(0.0, x, xi0)) < 1e-14;
    if (!really_zero)
      throw PreconditionError("alpha vanishes along the sample path but not identically");
    rep.status = ProbeStatus::factorizable_regime;
    auto tA_of = [](double x) { return x * x; };
    auto tB_of = [](double x) { return x; };
    double prevA = 0.0, prevB = 0.0, x_prev = 0.0;
    bool started = false;
    for (int m = 2; m <= m_max; ++m) {
      double xm = std::ldexp(1.0, -m);
      double tA = tA_of(xm), tB = tB_of(xm);
      // stay inside the three-real-roots region on both path points
      if (!three_real_roots(tA, r.a2(tA, xm, xi0), 0.0, r.b3(tA, xm, xi0)) ||
          !three_real_roots(tB, r.a2(tB, xm, xi0), 0.0, r.b3(tB, xm, xi0)))
        continue;
      if (!started) {
        prevA = smallest_real_root(tA, r.a2(tA, xm, xi0), 0.0, r.b3(tA, xm, xi0));
        prevB = smallest_real_root(tB, r.a2(tB, xm, xi0), 0.0, r.b3(tB, xm, xi0));
        started = true;
      } else {
        prevA = continue_branch(r, xi0, tA_of, x_prev, xm, prevA);
        prevB = continue_branch(r, xi0, tB_of, x_prev, xm, prevB);
      }
      x_prev = xm;
      double q = std::fabs(prevA / tA - prevB / tB) / std::fabs(tA - tB);
      rep.quotients.push_back(q);
    }
  } else {
    auto alpha_at = [&r, xi0](double x) { return std::fabs(r.alpha(0.0, x, xi0)); };
    auto tA_of = [&](double x) { return alpha_at(x) * alpha_at(x); };
    auto tB_of = [&](double x) { return alpha_at(x); };
    double prevA = 0.0, prevB = 0.0, x_prev = 0.0;
    bool started = false;
    for (int m = 1; m <= m_max; ++m) {
      double xm = std::ldexp(1.0, -m);
      double av = alpha_at(xm);
      if (av < 1e-300)
        throw PreconditionError("alpha vanishes at a path point x_m");
      double tA = tA_of(xm), tB = tB_of(xm);
      if (!three_real_roots(tA, r.a2(tA, xm, xi0), r.alpha(0.0, xm, xi0),
                            r.b3(tA, xm, xi0)) ||
          !three_real_roots(tB, r.a2(tB, xm, xi0), r.alpha(0.0, xm, xi0),
                            r.b3(tB, xm, xi0)))
        continue;
      if (!started) {
        prevA = smallest_real_root(tA, r.a2(tA, xm, xi0), r.alpha(0.0, xm, xi0),
                                   r.b3(tA, xm, xi0));
        prevB = smallest_real_root(tB, r.a2(tB, xm, xi0), r.alpha(0.0, xm, xi0),
                                   r.b3(tB, xm, xi0));
        started = true;
      } else {
        prevA = continue_branch(r, xi0, tA_of, x_prev, xm, prevA);
        prevB = continue_branch(r, xi0, tB_of, x_prev, xm, prevB);
      }
      x_prev = xm;
      if (std::fabs(tA - tB) < 1e-300) continue;
      double q = std::fabs(prevA / tA - prevB / tB) / std::fabs(tA - tB);
      rep.quotients.push_back(q);
    }
  }

  if (!rep.quotients.empty()) {
    rep.baseline = rep.quotients.front();
    for (size_t i = 0; i < rep.quotients.size(); ++i) {
      rep.max_quotient = std::max(rep.max_quotient, rep.quotients[i]);
      if (rep.status != ProbeStatus::factorizable_regime &&
          rep.quotients[i] >= 1e3 * rep.baseline && rep.detected_at_m < 0)
        rep.detected_at_m = static_cast<int>(i) + 1;
    }
    if (rep.status != ProbeStatus::factorizable_regime)
      rep.status = (rep.detected_at_m >= 0) ? ProbeStatus::blowup_detected
                                            : ProbeStatus::no_blowup;
  }
  return rep;
}

}  // namespace trihyp
