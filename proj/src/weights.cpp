#include "trihyp/weights.hpp"

#include <algorithm>
#include <cmath>

#include "trihyp/rng.hpp"

namespace trihyp {

double f_weight(double t, double xi) {
  return t / 3.0 + std::pow(1.0 + xi * xi, -1.0 / 3.0);
}

double f_power(double k, double t, double xi) {
  // f > 0 always; log-space keeps f^{-k} finite for N up to ~200.
  return std::exp(-k * std::log(f_weight(t, xi)));
}

double psi_weight(double t, double lambda) { return std::exp(-2.0 * lambda * t) / t; }
double phi_fwd(double t, double lambda) { return t * std::exp(2.0 * lambda * t); }
double phi_bwd(double t, double lambda) { return t * std::exp(-2.0 * lambda * t); }

std::vector<WeightCubeViolation> weight_cube_inequality_check(unsigned seed, long samples) {
  Rng rng(seed);
  std::vector<WeightCubeViolation> bad;
  for (long i = 0; i < samples; ++i) {
    double t = rng.uniform(0.0, 4.0);
    if (i % 7 == 0) t = 0.0;  // exercise the equality edge
    double xi = std::tan(M_PI * (rng.uniform01() - 0.5) * 0.999);  // heavy tails
    double f = f_weight(t, xi);
    double lhs = 1.0 / (1.0 + xi * xi) + t * f * f;
    double margin = lhs - f * f * f;
    if (margin < -1e-15) bad.push_back({t, xi, margin});
  }
  return bad;
}

std::array<double, 4> f_power_derivatives(int N, double t, double xi) {
  double br2 = 1.0 + xi * xi;
  double br = std::sqrt(br2);
  double f = t / 3.0 + std::pow(br2, -1.0 / 3.0);
  // g = <xi>^{-2/3}; chain-rule derivatives of f in xi
  double g1 = -(2.0 / 3.0) * xi * std::pow(br, -8.0 / 3.0);
  double g2 = -(2.0 / 3.0) * std::pow(br, -8.0 / 3.0) +
              (16.0 / 9.0) * xi * xi * std::pow(br, -14.0 / 3.0);
  double g3 = (48.0 / 9.0) * xi * std::pow(br, -14.0 / 3.0) -
              (224.0 / 27.0) * xi * xi * xi * std::pow(br, -20.0 / 3.0);

  double FN = std::exp(-N * std::log(f));
  double d1 = -N * FN / f * g1;
  double d2 = N * (N + 1.0) * FN / (f * f) * g1 * g1 - N * FN / f * g2;
  double d3 = -N * (N + 1.0) * (N + 2.0) * FN / (f * f * f) * g1 * g1 * g1 +
              3.0 * N * (N + 1.0) * FN / (f * f) * g1 * g2 - N * FN / f * g3;
  return {FN, d1, d2, d3};
}

std::vector<SymbolClassFit> symbol_class_constants(const std::vector<int>& Ns,
                                                   unsigned seed, int samples) {
  // The sup in the bound lives at the t = 0 large-xi corner, so random
  // samples are augmented with a structured sweep that includes t = 0.
  std::vector<double> ts = {0.0};
  for (int i = -16; i <= 3; ++i) ts.push_back(std::ldexp(1.0, i));
  std::vector<double> xis = {0.0};
  for (int i = -8; i <= 40; ++i) {
    xis.push_back(std::ldexp(1.0, i / 2.0));
    xis.push_back(-std::ldexp(1.0, i / 2.0));
  }

  std::vector<SymbolClassFit> fits;
  for (int N : Ns) {
    double C[4] = {0, 0, 0, 0};
    auto visit = [&](double t, double xi) {
      auto d = f_power_derivatives(N, t, xi);
      double br = xi_bracket(xi);
      for (int a = 0; a < 4; ++a) {
        double bound_unit = std::pow(double(N), a) * d[0] * std::pow(br, -a);
        if (bound_unit > 0.0) C[a] = std::max(C[a], std::fabs(d[a]) / bound_unit);
      }
    };
    for (double t : ts)
      for (double xi : xis) visit(t, xi);
    Rng rng(seed);
    for (int i = 0; i < samples; ++i)
      visit(rng.uniform(0.0, 2.0), std::tan(M_PI * (rng.uniform01() - 0.5) * 0.995));
    for (int a = 0; a < 4; ++a) fits.push_back({a, N, C[a]});
  }
  return fits;
}

PsiMargins psi_inequalities(double lambda, const std::vector<double>& ts) {
  PsiMargins m;
  m.min_decay_margin = m.min_square_margin1 = m.min_square_margin2 =
      std::numeric_limits<double>::infinity();
  for (double t : ts) {
    if (!(t > 0.0)) continue;
    double e = std::exp(-2.0 * lambda * t);
    double psi = e / t;
    double dpsi = -e * (2.0 * lambda * t + 1.0) / (t * t);
    m.min_decay_margin = std::min(m.min_decay_margin, -dpsi - lambda * psi);
    m.min_square_margin1 = std::min(m.min_square_margin1, -dpsi - e / (t * t));
    m.min_square_margin2 = std::min(m.min_square_margin2, e / (t * t) - psi * psi);
  }
  m.pass = m.min_decay_margin > 0.0 && m.min_square_margin1 > 0.0 &&
           m.min_square_margin2 > 0.0;
  return m;
}

}  // namespace trihyp
