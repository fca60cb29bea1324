#include "trihyp/field.hpp"

#include <cmath>

#include "trihyp/rng.hpp"

namespace trihyp {

namespace {
const std::string kVars[3] = {"t", "x", "xi"};

int var_index(const std::string& v) {
  for (int i = 0; i < 3; ++i)
    if (kVars[i] == v) return i;
  throw ParseError("unknown variable '" + v + "'");
}
}  // namespace

double fd_step(double v) { return 1e-5 * (1.0 + std::fabs(v)); }

CoefficientField::CoefficientField(Expr e, int degree)
    : expr_(e), degree_(degree), analytic_(true) {
  fn_ = [e](double t, double x, double xi) { return e.eval(t, x, xi); };
  for (int i = 0; i < 3; ++i) {
    d_[i] = e.derivative(kVars[i]);
    for (int j = 0; j < 3; ++j) d2_[i][j] = d_[i].derivative(kVars[j]);
  }
}

CoefficientField::CoefficientField(Fn fn, int degree)
    : fn_(std::move(fn)), degree_(degree), analytic_(false) {}

CoefficientField CoefficientField::zero(int degree) {
  return CoefficientField(Expr::constant(0.0), degree);
}

CoefficientField CoefficientField::parse(const std::string& text, int degree) {
  return CoefficientField(Expr::parse(text), degree);
}

bool CoefficientField::is_zero() const {
  return analytic_ && expr_.is_constant(0.0);
}

double CoefficientField::partial(const std::string& var, double t, double x,
                                 double xi) const {
  int i = var_index(var);
  if (analytic_) return d_[i].eval(t, x, xi);
  double p[3] = {t, x, xi};
  double h = fd_step(p[i]);
  double lo[3] = {t, x, xi}, hi[3] = {t, x, xi};
  lo[i] -= h;
  hi[i] += h;
  return (fn_(hi[0], hi[1], hi[2]) - fn_(lo[0], lo[1], lo[2])) / (2.0 * h);
}

double CoefficientField::partial2(const std::string& v1, const std::string& v2,
                                  double t, double x, double xi) const {
  int i = var_index(v1), j = var_index(v2);
  if (analytic_) return d2_[i][j].eval(t, x, xi);
  double p[3] = {t, x, xi};
  if (i == j) {
    double h = fd_step(p[i]);
    double lo[3] = {t, x, xi}, hi[3] = {t, x, xi};
    lo[i] -= h;
    hi[i] += h;
    return (fn_(hi[0], hi[1], hi[2]) - 2.0 * fn_(t, x, xi) + fn_(lo[0], lo[1], lo[2])) /
           (h * h);
  }
  double hi_ = fd_step(p[i]), hj = fd_step(p[j]);
  double pp[3] = {t, x, xi}, pm[3] = {t, x, xi}, mp[3] = {t, x, xi}, mm[3] = {t, x, xi};
  pp[i] += hi_; pp[j] += hj;
  pm[i] += hi_; pm[j] -= hj;
  mp[i] -= hi_; mp[j] += hj;
  mm[i] -= hi_; mm[j] -= hj;
  return (fn_(pp[0], pp[1], pp[2]) - fn_(pm[0], pm[1], pm[2]) -
          fn_(mp[0], mp[1], mp[2]) + fn_(mm[0], mm[1], mm[2])) /
         (4.0 * hi_ * hj);
}

double CoefficientField::homogeneity_defect(unsigned seed, int samples) const {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    double t = rng.uniform(0.0, 1.0);
    double x = rng.uniform(-1.0, 1.0);
    double xi = rng.uniform(0.5, 4.0) * (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    double s = rng.uniform(0.25, 8.0);
    double lhs = fn_(t, x, s * xi);
    double rhs = std::pow(s, degree_) * fn_(t, x, xi);
    double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    worst = std::max(worst, std::fabs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace trihyp
