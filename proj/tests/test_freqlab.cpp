#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "trihyp/errors.hpp"
#include "trihyp/freqlab.hpp"
#include "trihyp/models.hpp"
#include "trihyp/rng.hpp"
#include "trihyp/spectral.hpp"

using namespace trihyp;

TEST_CASE("xi = 0 gives polynomial-kernel growth only") {
  auto m = frozen_effective(0.0);
  double T = 0.25;
  auto r = per_frequency_solve(m, 0.0, T);
  CHECK(r.amplification >= 1.0);
  CHECK(r.amplification <= 1.0 + 3.0 * T);
}

TEST_CASE("strictly hyperbolic control stays bounded") {
  auto runs = frequency_sweep([](double c) { return frozen_strict(c); }, 0.0,
                              dyadic_frequencies(3, 10), 0.12);
  auto fit = loss_fit(runs);
  CHECK(fit.kappa >= -0.1);
  CHECK(fit.kappa <= 0.1);
}

TEST_CASE("effective model with b3 = 0 has kappa <= 2") {
  FrozenModel m;
  m.id = "airy";
  m.q1 = [](double, double) { return 0.0; };
  m.q2 = [](double t, double xi) { return -t * xi * xi; };
  m.q3 = [](double, double) { return 0.0; };
  m.p2 = [](double, double) { return std::complex<double>(0.0); };
  m.b1 = [](double, double) { return std::complex<double>(0.0); };
  auto runs = frequency_sweep([m](double) { return m; }, 0.0,
                              dyadic_frequencies(3, 10), 0.25);
  auto fit = loss_fit(runs);
  CHECK(fit.kappa <= 2.0);
  CHECK(fit.kappa >= -0.1);
}

TEST_CASE("loss_fit self test on a synthetic table") {
  FrequencyRun run;
  run.xis = dyadic_frequencies(3, 10);
  for (double xi : run.xis) run.amps.push_back(xi * xi);
  auto fit = loss_fit(run);
  CHECK(fit.kappa == doctest::Approx(2.0).epsilon(0.005));
  CHECK(fit.residual < 1e-9);
  CHECK(fit.reliable);

  FrequencyRun tiny;
  tiny.xis = {8, 16, 32};
  tiny.amps = {1, 1, 1};
  CHECK_THROWS_AS(loss_fit(tiny), InputError);
}

TEST_CASE("amplification is invariant under data normalization") {
  auto m = frozen_effective(1.0);
  auto base = per_frequency_solve(m, 64.0, 0.12);
  CHECK(base.amplification >= 1.0 - 1e-12);
  for (double scale : {1e-4, 17.0, 1e4}) {
    auto scaled = per_frequency_solve(m, 64.0, 0.12, scale);
    CHECK(scaled.amplification ==
          doctest::Approx(base.amplification).epsilon(1e-6));
  }
  // determinism of a repeated run
  auto again = per_frequency_solve(m, 64.0, 0.12);
  CHECK(base.amplification == again.amplification);
}

TEST_CASE("per-frequency ODE agrees with the spectral solver on one mode") {
  auto g = std::make_shared<const Grid1D>(64, 2.0 * M_PI);
  ReducedOperator r;
  r.a2 = CoefficientField::parse("xi^2", 2);
  r.b3 = CoefficientField::parse("xi^3", 3);
  OperatorP op(r, g);

  int k0 = 8;
  State s;
  s.t = 0.0;
  s.u = Field(g);
  s.u1 = Field(g);
  s.u2 = Field(g);
  for (int j = 0; j < g->n; ++j) {
    double ph = 2.0 * M_PI * k0 * j / g->n;
    s.u.v[j] = cplx(std::cos(ph), std::sin(ph));
  }
  double T = 0.12;
  auto traj = solve_cauchy(op, s, nullptr, T, 4000);

  // same evolution through the frozen-model ODE
  FrozenModel fm = frozen_effective(0.0);
  // reproduce with data (1, 0, 0) scaled by nothing: track to T via dp54
  // (reusing per_frequency machinery is sup-based, so integrate directly here)
  std::array<cplx, 3> y = {cplx(1), cplx(0), cplx(0)};
  int steps = 40000;
  double h = T / steps;
  auto f = [&](double t, const std::array<cplx, 3>& w) {
    cplx I(0, 1);
    cplx u3 = (fm.q2(t, k0) + fm.b1(t, k0)) * w[1] +
              I * (fm.q3(t, k0) + fm.p2(t, k0)) * w[0] - I * fm.q1(t, k0) * w[2];
    return std::array<cplx, 3>{w[1], w[2], u3};
  };
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    auto k1 = f(t, y);
    auto adv = [&](double a, const std::array<cplx, 3>& k) {
      return std::array<cplx, 3>{y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]};
    };
    auto k2 = f(t + h / 2, adv(h / 2, k1));
    auto k3 = f(t + h / 2, adv(h / 2, k2));
    auto k4 = f(t + h, adv(h, k3));
    for (int c = 0; c < 3; ++c)
      y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    t += h;
  }
  // compare the u-amplitude of mode k0
  auto hat = fft_forward(traj.states.back().u.v);
  CHECK(std::abs(hat[k0] - y[0]) < 1e-7 * std::max(1.0, std::abs(y[0])));
}

TEST_CASE("robustness sweep: effective bounded, contrast grows") {
  std::vector<double> cs = {-10, -5, 0, 5, 10};
  // T stays inside the hyperbolic window 4 a2^3/(27 b3^2) = 4/27 of the
  // model; the effective fit needs octaves above the lower-order transient
  // (its sup freezes near xi ~ (c/T^{3/2})^{3/2}), the contrast grows
  // superpolynomially on any window.
  double T = 0.12;
  auto xis_eff = dyadic_frequencies(14, 19);
  auto xis_con = dyadic_frequencies(4, 12);

  auto eff = robustness_sweep([](double c) { return frozen_effective(c); }, cs,
                              xis_eff, T);
  double kmin = 1e300, kmax = -1e300;
  for (const auto& row : eff) {
    kmin = std::min(kmin, row.kappa);
    kmax = std::max(kmax, row.kappa);
  }
  CHECK(kmax - kmin <= 1.0);

  auto con = robustness_sweep([](double c) { return frozen_contrast(c); }, cs,
                              xis_con, T);
  double k0 = 0.0, kend = 0.0;
  for (const auto& row : con) {
    if (row.c == 0.0) k0 = row.kappa;
    if (row.c == 10.0) kend = row.kappa;
  }
  CHECK(kend - k0 >= 2.0);

  // consistency: the c = 0 row equals a plain loss_fit
  auto run0 = frequency_sweep([](double c) { return frozen_contrast(c); }, 0.0,
                              xis_con, T);
  CHECK(loss_fit(run0).kappa == doctest::Approx(k0).epsilon(1e-12));
}
