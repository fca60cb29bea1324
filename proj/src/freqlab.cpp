#include "trihyp/freqlab.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "trihyp/errors.hpp"
#include "trihyp/parallel.hpp"

namespace trihyp {

using cplx = std::complex<double>;

FrozenModel frozen_effective(double c) {
  FrozenModel m;
  m.id = "effective";
  m.q1 = [](double, double) { return 0.0; };
  m.q2 = [](double t, double xi) { return -t * xi * xi; };
  m.q3 = [](double t, double xi) { return t * t * xi * xi * xi; };
  m.p2 = [c](double, double xi) { return cplx(c * xi * xi); };
  m.b1 = [](double, double) { return cplx(0.0); };
  return m;
}

FrozenModel frozen_strict(double c) {
  FrozenModel m;
  m.id = "strict";
  m.q1 = [](double, double) { return 0.0; };
  m.q2 = [](double, double xi) { return -xi * xi; };
  m.q3 = [](double, double) { return 0.0; };
  m.p2 = [c](double, double xi) { return cplx(c * xi * xi); };
  m.b1 = [](double, double) { return cplx(0.0); };
  return m;
}

FrozenModel frozen_contrast(double c) {
  FrozenModel m;
  m.id = "contrast";
  m.q1 = [](double, double) { return 0.0; };
  m.q2 = [](double t, double xi) { return -t * t * xi * xi; };
  m.q3 = [](double, double) { return 0.0; };
  m.p2 = [c](double, double xi) { return cplx(c * xi * xi); };
  m.b1 = [](double, double) { return cplx(0.0); };
  return m;
}

namespace {

using Vec3 = std::array<cplx, 3>;

Vec3 axpy(const Vec3& y, double h, const Vec3& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

// u''' = -i q1 u'' + (q2 + b1) u' + i (q3 + p2) u, from P u_hat = 0 with
// D_t = -i d/dt.
Vec3 deriv(const FrozenModel& m, double xi, double t, const Vec3& y) {
  cplx u = y[0], u1 = y[1], u2 = y[2];
  cplx I(0.0, 1.0);
  cplx u3 = -I * m.q1(t, xi) * u2 + (m.q2(t, xi) + m.b1(t, xi)) * u1 +
            I * (m.q3(t, xi) + m.p2(t, xi)) * u;
  return {u1, u2, u3};
}

double balanced_norm(const Vec3& y, double xi) {
  double br = std::sqrt(1.0 + xi * xi);
  return std::sqrt(std::norm(y[0]) + std::norm(y[1]) / (br * br) +
                   std::norm(y[2]) / (br * br * br * br));
}

// Dormand-Prince 5(4) on the complex 3-vector.
struct DP54Result {
  double sup_ratio;
  int steps;
};

DP54Result dp54(const FrozenModel& m, double xi, double T, Vec3 y) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640,
                   e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  constexpr double rtol = 1e-10, atol = 1e-13;

  double n0 = balanced_norm(y, xi);
  double sup = 1.0;
  double t = 0.0;
  double h = std::min(T / 64.0, 1.0 / (1.0 + std::fabs(xi)));
  int steps = 0;

  while (t < T) {
    if (t + h > T) h = T - t;
    Vec3 k1 = deriv(m, xi, t, y);
    Vec3 k2 = deriv(m, xi, t + h * a21, axpy(y, h * a21, k1));
    Vec3 y3;
    for (int i = 0; i < 3; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    Vec3 k3 = deriv(m, xi, t + h * 3.0 / 10, y3);
    Vec3 y4;
    for (int i = 0; i < 3; ++i)
      y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    Vec3 k4 = deriv(m, xi, t + h * 4.0 / 5, y4);
    Vec3 y5;
    for (int i = 0; i < 3; ++i)
      y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    Vec3 k5 = deriv(m, xi, t + h * 8.0 / 9, y5);
    Vec3 y6;
    for (int i = 0; i < 3; ++i)
      y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                          a65 * k5[i]);
    Vec3 k6 = deriv(m, xi, t + h, y6);
    Vec3 ynew;
    for (int i = 0; i < 3; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    Vec3 k7 = deriv(m, xi, t + h, ynew);

    double errnorm = 0.0;
    for (int i = 0; i < 3; ++i) {
      cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double r = std::abs(e) / sc;
      errnorm += r * r;
    }
    errnorm = std::sqrt(errnorm / 3.0);

    if (errnorm <= 1.0) {
      t += h;
      y = ynew;
      sup = std::max(sup, balanced_norm(y, xi) / n0);
      ++steps;
    }
    double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-14 * T)
      throw NumericError("per-frequency ODE step underflow at xi = " +
                         std::to_string(xi));
    if (steps > 2000000)
      throw NumericError("per-frequency ODE exceeded the step budget at xi = " +
                         std::to_string(xi));
  }
  return {sup, steps};
}

}  // namespace

OdeRunResult per_frequency_solve(const FrozenModel& m, double xi, double T,
                                 double data_scale) {
  double br2 = 1.0 + xi * xi;
  double ds = data_scale;
  Vec3 data[3] = {{cplx(ds), cplx(0), cplx(0)},
                  {cplx(0), cplx(ds * std::sqrt(br2)), cplx(0)},
                  {cplx(0), cplx(0), cplx(ds * br2)}};
  OdeRunResult out;
  for (const auto& y0 : data) {
    auto r = dp54(m, xi, T, y0);
    out.amplification = std::max(out.amplification, r.sup_ratio);
    out.steps += r.steps;
  }
  return out;
}

FrequencyRun frequency_sweep(const std::function<FrozenModel(double)>& family,
                             double c, const std::vector<double>& xis, double T,
                             int jobs) {
  FrozenModel probe = family(c);
  FrequencyRun run;
  run.model_id = probe.id;
  run.c = c;
  run.xis = xis;
  run.amps.assign(xis.size(), 0.0);
  parallel_for(
      static_cast<int>(xis.size()),
      [&](int i) {
        FrozenModel m = family(c);
        run.amps[i] = per_frequency_solve(m, xis[i], T).amplification;
      },
      jobs);
  return run;
}

LossFit loss_fit(const FrequencyRun& run) {
  if (run.xis.size() < 5)
    throw InputError("loss_fit needs at least 5 dyadic frequencies");
  // top octaves: the largest six frequencies (all, if six or fewer)
  size_t n = run.xis.size();
  size_t use = std::min<size_t>(6, n);
  size_t start = n - use;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = start; i < n; ++i) {
    double lx = std::log2(run.xis[i]);
    double ly = std::log2(std::max(run.amps[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double m = double(use);
  LossFit fit;
  fit.points_used = static_cast<int>(use);
  double denom = m * sxx - sx * sx;
  fit.kappa = (m * sxy - sx * sy) / denom;
  double icpt = (sy - fit.kappa * sx) / m;
  for (size_t i = start; i < n; ++i) {
    double pred = fit.kappa * std::log2(run.xis[i]) + icpt;
    fit.residual = std::max(
        fit.residual, std::fabs(pred - std::log2(std::max(run.amps[i], 1e-300))));
  }
  fit.reliable = fit.residual <= 0.5;
  return fit;
}

std::vector<RobustnessRow> robustness_sweep(
    const std::function<FrozenModel(double)>& family, const std::vector<double>& cs,
    const std::vector<double>& xis, double T, int jobs) {
  std::vector<RobustnessRow> rows(cs.size());
  parallel_for(
      static_cast<int>(cs.size()),
      [&](int i) {
        auto run = frequency_sweep(family, cs[i], xis, T, 1);
        rows[i] = {cs[i], loss_fit(run).kappa};
      },
      jobs);
  return rows;
}

std::vector<double> dyadic_frequencies(int j0, int j1) {
  std::vector<double> xs;
  for (int j = j0; j <= j1; ++j) xs.push_back(std::ldexp(1.0, j));
  return xs;
}

}  // namespace trihyp
