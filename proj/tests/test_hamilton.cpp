#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/eig_oracle.hpp"
#include "trihyp/errors.hpp"
#include "trihyp/hamilton.hpp"
#include "trihyp/models.hpp"
#include "trihyp/rng.hpp"

using namespace trihyp;

namespace {

OperatorModel model_with_b3(double b3) {
  // p3 = tau^3 - t xi^2 tau + t^2 b3 xi^3
  OperatorModel m;
  m.q2 = CoefficientField::parse("-t*xi^2", 2);
  m.q3 = CoefficientField(Expr::constant(b3) * Expr::parse("t^2*xi^3"), 3);
  return m;
}

trihyp_test::CMat to_cmat(const HamiltonMatrix& F) {
  auto a = trihyp_test::cmat(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = F.m[i][j];
  return a;
}

}  // namespace

TEST_CASE("fundamental matrix of the worked model") {
  auto m = model_with_b3(0.7);
  Point4 rho{0.0, 0.0, 0.0, 1.0};
  auto F = fundamental_matrix(m, rho);

  // nonzero entries: p_{t tau} = -1 and p_{tt} = 2 b3
  CHECK(F.m[0][0] == doctest::Approx(-1.0));   // p_{tau,t}
  CHECK(F.m[2][0] == doctest::Approx(-1.4));   // -p_{t,t}
  CHECK(F.m[2][2] == doctest::Approx(1.0));    // -p_{t,tau}
  CHECK(std::fabs(F.trace()) < 1e-12);
  int nonzero = 0;
  for (auto& row : F.m)
    for (double v : row) nonzero += std::fabs(v) > 1e-12;
  CHECK(nonzero == 3);
}

TEST_CASE("degenerate fundamental matrices") {
  OperatorModel pure;  // tau^3
  auto F = fundamental_matrix(pure, Point4{0.5, 0.2, 0.0, 1.0});
  CHECK(F.norm() == doctest::Approx(0.0));
  auto spec = classify(F);
  CHECK(!spec.effective);
  CHECK(spec.mu == 0.0);

  auto contrast = contrast_model(0.0);  // tau^3 - t^2 xi^2 tau
  F = fundamental_matrix(contrast, Point4{0.0, 0.0, 0.0, 1.0});
  CHECK(F.norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("precondition rejects non-critical points") {
  auto m = model_with_b3(0.0);
  CHECK_THROWS_AS(fundamental_matrix(m, Point4{0.5, 0.0, 0.4, 1.0}),
                  PreconditionError);
  // t > 0 with tau = 0 is characteristic only if p3 = 0; for this model
  // p3(t,x,0,xi) = 0, but the gradient is nonzero.
  CHECK_THROWS_AS(fundamental_matrix(m, Point4{0.5, 0.0, 0.0, 1.0}),
                  PreconditionError);
}

TEST_CASE("classification of the effective model") {
  auto m = model_with_b3(1.0);
  auto F = fundamental_matrix(m, Point4{0.0, 0.3, 0.0, 1.0});
  auto spec = classify(F);
  CHECK(spec.effective);
  CHECK(spec.mu == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spec.residual_imag < 1e-9);

  std::array<trihyp_test::cplx, 4> expect = {1.0, -1.0, 0.0, 0.0};
  CHECK(trihyp_test::multiset_distance(spec.eigenvalues.begin(),
                                       spec.eigenvalues.end(), expect.begin(),
                                       expect.end()) < 1e-6);

  // at general xi the pair is +-a2(0,x,xi) = +-xi^2
  F = fundamental_matrix(m, Point4{0.0, 0.3, 0.0, 2.0});
  spec = classify(F);
  CHECK(spec.effective);
  CHECK(spec.mu == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("classify matches the QR oracle on random Hamilton matrices") {
  Rng rng(424242);
  for (int trial = 0; trial < 200; ++trial) {
    // random F = J H with H symmetric: guarantees the +-pair structure
    double H[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) H[i][j] = H[j][i] = rng.uniform(-2, 2);
    HamiltonMatrix F;
    for (int j = 0; j < 4; ++j) {
      F.m[0][j] = H[2][j];
      F.m[1][j] = H[3][j];
      F.m[2][j] = -H[0][j];
      F.m[3][j] = -H[1][j];
    }
    auto spec = classify(F);
    auto oracle = trihyp_test::eigenvalues(to_cmat(F));
    CHECK(trihyp_test::multiset_distance(spec.eigenvalues.begin(),
                                         spec.eigenvalues.end(), oracle.begin(),
                                         oracle.end()) < 1e-6);
  }
}

TEST_CASE("symplectic invariance of the spectrum") {
  Rng rng(777);
  auto base = model_with_b3(0.6);
  auto Fref = fundamental_matrix(base, Point4{0.0, 0.0, 0.0, 1.0});
  auto ref = classify(Fref);

  for (int trial = 0; trial < 100; ++trial) {
    // random S in SL(2,R) acting on (x, xi)
    double s11 = rng.uniform(0.5, 2.0), s12 = rng.uniform(-1, 1),
           s21 = rng.uniform(-1, 1);
    double s22 = (1.0 + s12 * s21) / s11;
    auto pull = [&base, s11, s12, s21, s22](double t, double y, double tau,
                                            double eta) {
      return base.p3(t, s11 * y + s12 * eta, tau, s21 * y + s22 * eta);
    };
    // choose (y, eta) mapping to xi = 1, x = 0
    double det = s11 * s22 - s12 * s21;
    double y0 = (s22 * 0.0 - s12 * 1.0) / det;
    double eta0 = (-s21 * 0.0 + s11 * 1.0) / det;
    auto F = fundamental_matrix(pull, Point4{0.0, y0, 0.0, eta0});
    auto spec = classify(F);
    CHECK(trihyp_test::multiset_distance(spec.eigenvalues.begin(),
                                         spec.eigenvalues.end(),
                                         ref.eigenvalues.begin(),
                                         ref.eigenvalues.end()) < 1e-6);
  }
}

TEST_CASE("hyperbolic spectral structure over random models") {
  // every spectrum has at most one real pair; the rest purely imaginary
  Rng rng(90210);
  for (int trial = 0; trial < 200; ++trial) {
    double r = rng.uniform(0.5, 3.0);     // ellipticity coefficient of a2
    double b3 = rng.uniform(-2.0, 2.0);
    double s11 = rng.uniform(0.5, 2.0), s12 = rng.uniform(-1, 1), s21 = rng.uniform(-1, 1);
    double s22 = (1.0 + s12 * s21) / s11;

    OperatorModel m;
    m.q2 = CoefficientField(Expr::constant(r) * Expr::parse("-(t+x^2)*xi^2"), 2);
    m.q3 = CoefficientField(Expr::constant(b3) * Expr::parse("t^2*xi^3"), 3);
    SymbolFn pull = [&m, s11, s12, s21, s22](double t, double y, double tau,
                                             double eta) {
      return m.p3(t, s11 * y + s12 * eta, tau, s21 * y + s22 * eta);
    };
    double det = s11 * s22 - s12 * s21;
    double y0 = -s12 / det, eta0 = s11 / det;
    auto spec = classify(fundamental_matrix(pull, Point4{0.0, y0, 0.0, eta0}));

    int real_count = 0;
    auto F = fundamental_matrix(pull, Point4{0.0, y0, 0.0, eta0});
    double tol = 1e-6 * (1.0 + F.norm());
    for (const auto& z : spec.eigenvalues)
      if (std::fabs(z.imag()) <= tol && std::fabs(z.real()) > tol) ++real_count;
    CHECK(real_count <= 2);
    CHECK(spec.residual_imag <= tol);
    CHECK(spec.effective);
    CHECK(spec.mu == doctest::Approx(r).epsilon(1e-6));
  }
}

TEST_CASE("finite-difference path agrees with the field-derivative path") {
  auto m = model_with_b3(0.8);
  Point4 rho{0.0, 0.1, 0.0, 1.0};
  auto Fa = fundamental_matrix(m, rho);
  SymbolFn p = [&m](double t, double x, double tau, double xi) {
    return m.p3(t, x, tau, xi);
  };
  auto Ff = fundamental_matrix(p, rho);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(Ff.m[i][j] ==
            doctest::Approx(Fa.m[i][j]).epsilon(1e-6).scale(1.0 + Fa.norm()));
}

TEST_CASE("subprincipal symbol") {
  // reduced model a2 = xi^2, b2 = 0: p2' = -i/2 at |xi| = 1
  auto r = effective_reduced();
  auto v = subprincipal(r, 0.0, 1.0);
  CHECK(v.value.real() == doctest::Approx(0.0));
  CHECK(v.value.imag() == doctest::Approx(-0.5));

  // b2 = c xi^2: p2' = c - i/2 at |xi| = 1
  auto rc = effective_reduced(1.7);
  v = subprincipal(rc, 0.0, 1.0);
  CHECK(v.value.real() == doctest::Approx(1.7));
  CHECK(v.value.imag() == doctest::Approx(-0.5));

  // general-formula path on the q-form operator agrees
  auto m = effective_model(1.7);
  auto vg = subprincipal(m, Point4{0.0, 0.0, 0.0, 1.0});
  CHECK(std::abs(vg.value - v.value) < 1e-8);
}

TEST_CASE("compute_Pi reference values") {
  std::vector<double> xs = {0.0};
  auto pi0 = compute_Pi(effective_model(), xs);
  CHECK(pi0.value == doctest::Approx(7.0 / 6.0).epsilon(1e-9));
  CHECK(pi0.N == 12);

  for (double c : {0.5, 2.0, -3.0}) {
    auto pic = compute_Pi(effective_model(c), xs);
    CHECK(pic.value ==
          doctest::Approx(2.0 / 3.0 + std::sqrt(c * c + 0.25)).epsilon(1e-9));
  }
}

TEST_CASE("Pi is invariant under positive rescaling of the symbol") {
  // p3 -> c p3, p2 -> c p2 leaves |p2'/mu| unchanged
  double c = 3.7;
  OperatorModel scaled;
  scaled.q2 = CoefficientField(Expr::constant(c) * Expr::parse("-(t+x^2)*xi^2"), 2);
  scaled.q3 = CoefficientField(Expr::constant(c) * Expr::parse("t^2*xi^3"), 3);
  scaled.p2_re = CoefficientField(Expr::constant(0.9 * c) * Expr::parse("xi^2"), 2);

  std::vector<double> xs = {0.0};
  auto pi_ref = compute_Pi(effective_model(0.9), xs);
  auto pi_scaled = compute_Pi(scaled, xs);
  // the i/2 a2 part of p2' scales with the principal symbol as well, so the
  // full ratio is exactly invariant
  CHECK(std::fabs(pi_ref.value - pi_scaled.value) < 1e-10);
}

TEST_CASE("necessary_conditions") {
  // effective model with N = 12 loss claim
  auto m = effective_model();
  auto rep = necessary_conditions(m, Point4{0.0, 0.0, 0.0, 1.0}, 2.0 * 12 / 3 - 2);
  CHECK(rep.has_real_eigenvalues);
  CHECK(rep.loss_bound);
  CHECK(rep.loss_margin == doctest::Approx(18.0 - 0.5));

  // F = 0, p2' = i: condition (a) fails
  OperatorModel bad;
  bad.q2 = CoefficientField::parse("-t^2*xi^2", 2);
  bad.p2_im = CoefficientField::parse("xi^2", 2);
  rep = necessary_conditions(bad, Point4{0.0, 0.0, 0.0, 1.0}, 6.0);
  CHECK(!rep.has_real_eigenvalues);
  CHECK(!rep.im_subprincipal_zero);

  // F = 0, p2' = 0: both pass
  OperatorModel ok;
  ok.q2 = CoefficientField::parse("-t^2*xi^2", 2);
  rep = necessary_conditions(ok, Point4{0.0, 0.0, 0.0, 1.0}, 6.0);
  CHECK(rep.im_subprincipal_zero);
  CHECK(rep.re_subprincipal_bound);
}
