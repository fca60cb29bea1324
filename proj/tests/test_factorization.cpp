#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/eig_oracle.hpp"
#include "trihyp/errors.hpp"
#include "trihyp/factorization.hpp"
#include "trihyp/models.hpp"
#include "trihyp/symbols.hpp"

using namespace trihyp;

namespace {

ReducedOperator const_reduced(double a2, double b3) {
  ReducedOperator r;
  r.a2 = CoefficientField(Expr::constant(a2) * Expr::parse("xi^2"), 2);
  r.b3 = CoefficientField(Expr::constant(b3) * Expr::parse("xi^3"), 3);
  return r;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) v.push_back(a + (b - a) * i / n);
  return v;
}

}  // namespace

TEST_CASE("solve_rho reference values") {
  // a2 = 1, b3 = 1, t = 0.01  (Newton oracle on the scalar cubic)
  auto nr = solve_rho(0.01, 1.0, 1.0);
  CHECK(nr.converged);
  CHECK(0.01 * std::pow(nr.rho, 3) - nr.rho + 1.0 ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(nr.rho == doctest::Approx(1.0103126).epsilon(1e-6));

  // b3 = 0: rho = 0 exactly
  nr = solve_rho(0.3, 1.0, 0.0);
  CHECK(nr.rho == 0.0);

  // t = 0: the implicit-function value b3/a2
  nr = solve_rho(0.0, 2.0, 1.0);
  CHECK(nr.rho == doctest::Approx(0.5));
}

TEST_CASE("smooth_root residual and factors") {
  auto r = const_reduced(1.0, 1.0);
  auto ts = linspace(0.0, 0.1, 16);
  auto xs = linspace(-0.5, 0.5, 4);
  auto res = smooth_root(r, ts, xs);
  CHECK(res.failed.empty());
  CHECK(res.residual < 1e-10 * 1.0);
  CHECK(res.min_b >= -1e-12);

  // b3 = 0: gamma = 0 and p3 = (tau^2 - t a2) tau
  auto res0 = smooth_root(const_reduced(1.0, 0.0), ts, xs);
  for (const auto& e : res0.entries) {
    CHECK(e.gamma == 0.0);
    CHECK(e.b == doctest::Approx(e.t * e.xi * e.xi).epsilon(1e-12));
  }

  // Newton stays fast in the well-conditioned region
  CHECK(res.max_newton_iters <= 8);

  // alpha != 0 is rejected
  CHECK_THROWS_AS(smooth_root(effective_reduced(), ts, xs), PreconditionError);
}

TEST_CASE("smooth_root gamma matches a symbols-module root") {
  auto r = const_reduced(1.3, 0.7);
  auto ts = linspace(0.01, 0.2, 8);
  auto xs = linspace(0.0, 0.0, 0);
  auto res = smooth_root(r, ts, xs);
  for (const auto& e : res.entries) {
    OperatorModel m;
    double q2v = -(e.t * r.a2(e.t, e.x, e.xi));
    double q3v = e.t * e.t * r.b3(e.t, e.x, e.xi);
    m.q2 = CoefficientField(Expr::constant(q2v), 2);
    m.q3 = CoefficientField(Expr::constant(q3v), 3);
    auto rs = roots(m, 0, 0, e.xi);
    // gamma is one of the exact roots, and the quadratic factor's roots are
    // the other two
    double best = 1e300;
    for (auto& z : rs.roots) best = std::min(best, std::abs(z - cplx(e.gamma)));
    CHECK(best < 1e-8);
    cplx quad1 = cplx(e.a) + std::sqrt(cplx(e.b));
    cplx quad2 = cplx(e.a) - std::sqrt(cplx(e.b));
    std::array<cplx, 3> mine = {cplx(e.gamma), quad1, quad2};
    CHECK(trihyp_test::multiset_distance(mine.begin(), mine.end(),
                                         rs.roots.begin(), rs.roots.end()) < 1e-8);
  }
}

TEST_CASE("cardano_branch") {
  // a2 = 1, b3 = 0, t = 1: roots {0, 1, -1}
  auto r = const_reduced(1.0, 0.0);
  auto cb = cardano_branch(r, 1.0, 0.0, 1.0);
  CHECK(!cb.complex_pair);
  std::array<cplx, 3> expect = {0.0, 1.0, -1.0};
  CHECK(trihyp_test::multiset_distance(cb.roots.begin(), cb.roots.end(),
                                       expect.begin(), expect.end()) < 1e-10);

  // the sum of the three roots vanishes (no tau^2 term)
  auto rb = const_reduced(1.0, 0.8);
  auto cb2 = cardano_branch(rb, 0.05, 0.0, 1.0);
  cplx sum = cb2.roots[0] + cb2.roots[1] + cb2.roots[2];
  CHECK(std::abs(sum) < 1e-10);
  CHECK(cb2.real_branch >= 0);

  // identified branch matches the Newton root
  auto nr = solve_rho(0.05, 1.0, 0.8);
  CHECK(std::abs(cb2.roots[cb2.real_branch] - cplx(0.05 * nr.rho)) < 1e-8);

  // t -> 0+: the real branch behaves like t b3/a2
  for (double t : {1e-3, 1e-4}) {
    auto c = cardano_branch(rb, t, 0.0, 1.0);
    CHECK(c.roots[c.real_branch].real() ==
          doctest::Approx(t * 0.8).epsilon(0.05));
  }

  // Delta < 0 reports the complex pair status
  auto big = const_reduced(1.0, 10.0);
  auto cbx = cardano_branch(big, 0.9, 0.0, 1.0);
  CHECK(cbx.complex_pair);

  CHECK_THROWS_AS(cardano_branch(r, 0.0, 0.0, 1.0), PreconditionError);
}

TEST_CASE("derivative_check fits the measured correction order") {
  // a2 = 2, b3 = 1: the limit gamma/t -> 1/2
  auto fit = derivative_check(const_reduced(2.0, 1.0), 0.0, 1.0);
  CHECK(fit.limit == doctest::Approx(0.5));
  CHECK(!fit.exact);

  // b3 = 0 is exact: gamma/t == 0 identically, fit skipped
  auto fz = derivative_check(const_reduced(1.0, 0.0), 0.0, 1.0);
  CHECK(fz.exact);

  // For a2 = b3 = 1 the smooth root is analytic in t with a nonzero linear
  // term (rho'(0) = b3^3/a2^4), so the dyadic fit measures an exponent near
  // one. A synthetic half-power correction is what lands in the band.
  auto f1 = derivative_check(const_reduced(1.0, 1.0), 0.0, 1.0);
  CHECK(f1.beta == doctest::Approx(1.0).epsilon(0.08));
  CHECK(!f1.in_band);
}

TEST_CASE("derivative band test on a synthetic half-power table") {
  // feeds the fitting path a gamma/t correction that really is C t^{1/2};
  // smooth coefficients cannot produce one, so the table is synthetic
  std::vector<double> ts, devs;
  for (int j = 4; j <= 14; ++j) {
    double t = std::ldexp(1.0, -j);
    ts.push_back(t);
    devs.push_back(0.7 * std::sqrt(t));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    double lx = std::log(ts[i]), ly = std::log(devs[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; ++n;
  }
  double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(beta == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("nonfactorizability probe") {
  // alpha = x^2 xi^2, a2 = xi^2, b3 = xi^3: blow-up expected by m = 12
  auto rep = nonfactorizability_probe(effective_reduced(), 1.0, 16);
  CHECK(rep.status == ProbeStatus::blowup_detected);
  CHECK(rep.detected_at_m <= 12);
  CHECK(rep.max_quotient >= 1e3 * rep.baseline);

  // alpha == 0 control: factorizable regime, no blow-up
  auto ctrl = nonfactorizability_probe(effective_reduced_frozen(), 1.0, 16);
  CHECK(ctrl.status == ProbeStatus::factorizable_regime);
  CHECK(ctrl.max_quotient < 1e3 * std::max(ctrl.baseline, 1e-30));

  // b3(0,0,xi0) = 0 rejected
  ReducedOperator nob3 = effective_reduced();
  nob3.b3 = CoefficientField::zero(3);
  CHECK_THROWS_AS(nonfactorizability_probe(nob3, 1.0), PreconditionError);
}

TEST_CASE("factorization residual scales with large coefficients") {
  // same relative residual when the symbol is blown up by a large factor
  auto big = const_reduced(400.0, 8000.0);
  auto ts = linspace(0.0, 0.001, 8);
  auto xs = linspace(0.0, 0.0, 0);
  auto res = smooth_root(big, ts, xs);
  CHECK(res.failed.empty());
  CHECK(res.residual < 1e-10);
}
