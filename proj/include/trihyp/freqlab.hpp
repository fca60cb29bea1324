#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace trihyp {

/// x-frozen third-order model: coefficients are functions of (t, xi) only,
/// so each frequency evolves by an independent ODE in t.
struct FrozenModel {
  std::string id;
  std::function<double(double, double)> q1;  // tau^2 coefficient
  std::function<double(double, double)> q2;  // tau coefficient
  std::function<double(double, double)> q3;  // tau-free principal part
  std::function<std::complex<double>(double, double)> p2;  // second order, tau-free
  std::function<std::complex<double>(double, double)> b1;  // first order, times D_t
};

/// worked effective model frozen at its triple point: a2 = xi^2, b3 = xi^3,
/// lower-order term c xi^2.
FrozenModel frozen_effective(double c);
/// strictly hyperbolic control tau^3 - xi^2 tau.
FrozenModel frozen_strict(double c);
/// non-effective contrast tau^3 - t^2 xi^2 tau with lower-order term c xi^2
/// (vanishing fundamental matrix; outside the effective hypotheses).
FrozenModel frozen_contrast(double c);

struct OdeRunResult {
  double amplification = 1.0;  // worst case over the canonical data triples
  int steps = 0;
};

/// Integrates the per-frequency ODE with an embedded Dormand-Prince 5(4)
/// pair (rel tol 1e-10, abs tol 1e-13) and returns the worst-case growth of
/// the balanced state norm ||(u, u'/<xi>, u''/<xi>^2)|| over [0, T].
/// data_scale multiplies the canonical data triples; the amplification is a
/// ratio and does not see it (up to integrator tolerances).
OdeRunResult per_frequency_solve(const FrozenModel& m, double xi, double T,
                                 double data_scale = 1.0);

struct FrequencyRun {
  std::string model_id;
  double c = 0.0;
  std::vector<double> xis;
  std::vector<double> amps;
};

FrequencyRun frequency_sweep(const std::function<FrozenModel(double)>& family,
                             double c, const std::vector<double>& xis, double T,
                             int jobs = 0);

struct LossFit {
  double kappa = 0.0;
  double residual = 0.0;  // max |log2 A - fit| over the fitted points
  bool reliable = true;
  int points_used = 0;
};

/// Least-squares slope of log2 A against log2 xi over the top octaves
/// (at least 5 dyadic points required).
LossFit loss_fit(const FrequencyRun& run);

struct RobustnessRow {
  double c;
  double kappa;
};

/// kappa(c) across a grid of lower-order coefficients.
std::vector<RobustnessRow> robustness_sweep(
    const std::function<FrozenModel(double)>& family, const std::vector<double>& cs,
    const std::vector<double>& xis, double T, int jobs = 0);

/// Dyadic frequency list 2^j for j in [j0, j1].
std::vector<double> dyadic_frequencies(int j0, int j1);

}  // namespace trihyp
