#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/eig_oracle.hpp"
#include "trihyp/errors.hpp"
#include "trihyp/rng.hpp"
#include "trihyp/symbols.hpp"

using namespace trihyp;

namespace {

OperatorModel const_model(double q1, double q2, double q3) {
  OperatorModel m;
  m.q1 = CoefficientField(Expr::constant(q1), 1);
  m.q2 = CoefficientField(Expr::constant(q2), 2);
  m.q3 = CoefficientField(Expr::constant(q3), 3);
  return m;
}

}  // namespace

TEST_CASE("eval_p3") {
  CHECK(eval_p3(const_model(0, 0, 0), 0, 0, 2, 1) == doctest::Approx(8.0));
  // root of tau^3 - tau at tau = 1
  CHECK(eval_p3(const_model(0, -1, 0), 0, 0, 1, 1) == doctest::Approx(0.0));
  // (tau-1)(tau-2)(tau-3) = tau^3 - 6 tau^2 + 11 tau - 6, root at tau = 2
  CHECK(eval_p3(const_model(-6, 11, -6), 0, 0, 2, 1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(eval_p3(const_model(0, 0, 0), 2.0, 0, 0, 1), DomainError);
  CHECK_THROWS_AS(eval_p3(const_model(0, 0, 0), 0.5, 7.0, 0, 1), DomainError);
}

TEST_CASE("discriminants of reference cubics") {
  auto d = discriminants(const_model(0, 0, 0), 0, 0, 1);
  CHECK(d.delta0 == 0.0);
  CHECK(d.delta1 == 0.0);
  CHECK(d.delta == 0.0);
  CHECK(d.classification == RootClass::triple);

  d = discriminants(const_model(0, -1, 0), 0, 0, 1);
  CHECK(d.delta0 == doctest::Approx(3.0));
  CHECK(d.delta1 == doctest::Approx(0.0));
  CHECK(d.delta == doctest::Approx(4.0));
  CHECK(d.classification == RootClass::simple);

  // shifted copy (tau-1)(tau-2)(tau-3): same depressed invariants
  d = discriminants(const_model(-6, 11, -6), 0, 0, 1);
  CHECK(d.delta0 == doctest::Approx(3.0));
  CHECK(d.delta1 == doctest::Approx(0.0));
  CHECK(d.delta == doctest::Approx(4.0));
  CHECK(d.triple_root_candidate == doctest::Approx(2.0));

  d = discriminants(const_model(0, 1, 0), 0, 0, 1);
  CHECK(d.delta == doctest::Approx(-4.0));
  CHECK(d.classification == RootClass::complex_pair);
}

TEST_CASE("roots of reference cubics") {
  auto rs = roots(const_model(0, -1, 0), 0, 0, 1);
  CHECK(rs.all_real);
  std::array<trihyp_test::cplx, 3> expect = {-1.0, 0.0, 1.0};
  CHECK(trihyp_test::multiset_distance(rs.roots.begin(), rs.roots.end(),
                                       expect.begin(), expect.end()) < 1e-12);

  rs = roots(const_model(0, 0, 0), 0, 0, 1);
  CHECK(rs.all_real);
  for (auto& r : rs.roots) CHECK(std::abs(r) < 1e-12);

  rs = roots(const_model(0, 1, 0), 0, 0, 1);
  CHECK(!rs.all_real);
  expect = {trihyp_test::cplx(0, 0), trihyp_test::cplx(0, 1), trihyp_test::cplx(0, -1)};
  CHECK(trihyp_test::multiset_distance(rs.roots.begin(), rs.roots.end(),
                                       expect.begin(), expect.end()) < 1e-12);
}

TEST_CASE("cardano vs companion-matrix oracle on random cubics") {
  Rng rng(20260809);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10), c = rng.uniform(-10, 10);
    auto rs = roots(const_model(a, b, c), 0, 0, 1);
    auto oracle = trihyp_test::companion_cubic_eigs(a, b, c);
    worst = std::max(worst,
                     trihyp_test::multiset_distance(rs.roots.begin(), rs.roots.end(),
                                                    oracle.begin(), oracle.end()));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("root/discriminant consistency on random cubics") {
  Rng rng(555);
  for (int k = 0; k < 10000; ++k) {
    double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10), c = rng.uniform(-10, 10);
    auto m = const_model(a, b, c);
    auto rs = roots(m, 0, 0, 1);
    auto d = discriminants(m, 0, 0, 1);
    CHECK(rs.all_real == (d.delta >= -tol_disc(1.0)));
    if (d.classification == RootClass::triple) {
      for (auto& r : rs.roots)
        CHECK(std::abs(r - trihyp_test::cplx(d.triple_root_candidate)) < 1e-5);
    }
    // delta equals the product of squared root differences
    trihyp_test::cplx prod = 1.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto diff = rs.roots[i] - rs.roots[j];
        prod *= diff * diff;
      }
    double scale = std::max(1.0, std::fabs(d.delta));
    CHECK(std::fabs(prod.real() - d.delta) / scale < 1e-6);
    CHECK(std::fabs(prod.imag()) / scale < 1e-6);
  }
}

TEST_CASE("residual bound on random cubics") {
  Rng rng(77);
  for (int k = 0; k < 2000; ++k) {
    double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10), c = rng.uniform(-10, 10);
    auto m = const_model(a, b, c);
    auto rs = roots(m, 0, 0, 1);
    CHECK(rs.max_residual <= 1e-8 * p3_scale(m, 0, 0, 1));
  }
}

TEST_CASE("scan_hyperbolicity") {
  // p3 = tau^3 - t xi^2 tau: delta = 4 t^3 xi^6 >= 0
  OperatorModel good;
  good.q2 = CoefficientField::parse("-t*xi^2", 2);
  auto rep = scan_hyperbolicity(good, 16, 16);
  CHECK(rep.pass);
  CHECK(rep.violations.empty());

  // p3 = tau^3 + t xi^2 tau: delta = -4 t^3 xi^6 < 0 for t > 0
  OperatorModel bad;
  bad.q2 = CoefficientField::parse("t*xi^2", 2);
  rep = scan_hyperbolicity(bad, 16, 16);
  CHECK(!rep.pass);
  CHECK(!rep.violations.empty());
  CHECK(rep.min_delta == doctest::Approx(-4.0));

  CHECK_THROWS_AS(scan_hyperbolicity(good, 0, 4), InputError);
}

TEST_CASE("scan at the t = 0 boundary only") {
  // q3(0) = 0 and q2(0) <= 0 make the boundary slice hyperbolic
  OperatorModel m;
  m.q2 = CoefficientField::parse("-x^2*xi^2", 2);
  m.q3 = CoefficientField::parse("t*xi^3", 3);
  m.domain.T = 0.0;
  auto rep = scan_hyperbolicity(m, 4, 16);
  CHECK(rep.pass);
}

TEST_CASE("detect_triple_locus") {
  // p3 = tau^3 - (t+x^2) xi^2 tau: triple locus {x=0} at t=0
  OperatorModel m;
  m.q2 = CoefficientField::parse("-(t+x^2)*xi^2", 2);
  std::vector<double> xs;
  for (int i = -8; i <= 8; ++i) xs.push_back(i / 8.0);
  auto rep = detect_triple_locus(m, xs);
  REQUIRE(rep.points.size() == 1);
  CHECK(rep.points[0].x == doctest::Approx(0.0));
  CHECK(rep.points[0].lambda == doctest::Approx(0.0));
  CHECK(rep.points[0].all_xi);
  CHECK(!rep.h1_violation);

  // p3 = tau^3 - t xi^2 tau: locus = all x
  OperatorModel all;
  all.q2 = CoefficientField::parse("-t*xi^2", 2);
  rep = detect_triple_locus(all, xs);
  CHECK(rep.points.size() == xs.size());

  // strictly hyperbolic at t=0: empty locus
  OperatorModel strict;
  strict.q2 = CoefficientField::parse("-xi^2", 2);
  rep = detect_triple_locus(strict, xs);
  CHECK(rep.points.empty());
}
