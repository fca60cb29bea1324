#include "trihyp/hamilton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trihyp/errors.hpp"
#include "trihyp/polyroots.hpp"

namespace trihyp {

double HamiltonMatrix::norm() const {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

double HamiltonMatrix::trace() const { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

namespace {

// Hessian entries of p3 in the (t, x, tau, xi) ordering.
using Hess = std::array<std::array<double, 4>, 4>;

Hess hessian_from_model(const OperatorModel& m, const Point4& r) {
  // p3 = tau^3 + q1 tau^2 + q2 tau + q3, so mixed (t,x,xi) second
  // derivatives act on the q's and tau-derivatives are explicit.
  auto q_dd = [&](const std::string& v1, const std::string& v2) {
    return m.q1.partial2(v1, v2, r.t, r.x, r.xi) * r.tau * r.tau +
           m.q2.partial2(v1, v2, r.t, r.x, r.xi) * r.tau +
           m.q3.partial2(v1, v2, r.t, r.x, r.xi);
  };
  double p_tautau = 6.0 * r.tau + 2.0 * m.q1(r.t, r.x, r.xi);
  auto dtau_of = [&](const std::string& v) {
    return 2.0 * m.q1.partial(v, r.t, r.x, r.xi) * r.tau +
           m.q2.partial(v, r.t, r.x, r.xi);
  };

  Hess h{};
  const std::string vars[3] = {"t", "x", "xi"};
  int idx[3] = {0, 1, 3};  // positions of t, x, xi in the 4-ordering
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) h[idx[a]][idx[b]] = q_dd(vars[a], vars[b]);
  for (int a = 0; a < 3; ++a) {
    h[idx[a]][2] = h[2][idx[a]] = dtau_of(vars[a]);
  }
  h[2][2] = p_tautau;
  return h;
}

Hess hessian_from_symbol(const SymbolFn& p, const Point4& r) {
  double v[4] = {r.t, r.x, r.tau, r.xi};
  Hess h{};
  auto at = [&](const double* w) { return p(w[0], w[1], w[2], w[3]); };
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double hi = fd_step(v[i]), hj = fd_step(v[j]);
      double out;
      if (i == j) {
        double a[4], b[4];
        std::copy(v, v + 4, a);
        std::copy(v, v + 4, b);
        a[i] += hi;
        b[i] -= hi;
        out = (at(a) - 2.0 * at(v) + at(b)) / (hi * hi);
      } else {
        double pp[4], pm[4], mp[4], mm[4];
        std::copy(v, v + 4, pp);
        std::copy(v, v + 4, pm);
        std::copy(v, v + 4, mp);
        std::copy(v, v + 4, mm);
        pp[i] += hi; pp[j] += hj;
        pm[i] += hi; pm[j] -= hj;
        mp[i] -= hi; mp[j] += hj;
        mm[i] -= hi; mm[j] -= hj;
        out = (at(pp) - at(pm) - at(mp) + at(mm)) / (4.0 * hi * hj);
      }
      h[i][j] = h[j][i] = out;
    }
  }
  return h;
}

HamiltonMatrix assemble(const Hess& h, const Point4& rho) {
  // F = [[p_{xi x}, p_{xi xi}], [-p_{x x}, -p_{x xi}]] with the x-group
  // (t,x) in rows 0,1 of the Hessian and the xi-group (tau,xi) in 2,3.
  HamiltonMatrix F;
  F.point = rho;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      F.m[i][j] = h[2 + i][j];        // p_{xi,x}
      F.m[i][2 + j] = h[2 + i][2 + j];  // p_{xi,xi}
      F.m[2 + i][j] = -h[i][j];       // -p_{x,x}
      F.m[2 + i][2 + j] = -h[i][2 + j];  // -p_{x,xi}
    }
  }
  return F;
}

void check_critical(const SymbolFn& p, const Point4& r) {
  double v[4] = {r.t, r.x, r.tau, r.xi};
  double scale = 1.0;
  for (double w : v) scale = std::max(scale, std::fabs(w));
  double tol = 1e-6 * scale * scale * scale;
  double val = p(r.t, r.x, r.tau, r.xi);
  if (std::fabs(val) > tol) {
    std::ostringstream os;
    os << "point is not characteristic: |p3| = " << std::fabs(val);
    throw PreconditionError(os.str());
  }
  for (int i = 0; i < 4; ++i) {
    double h = fd_step(v[i]);
    double a[4], b[4];
    std::copy(v, v + 4, a);
    std::copy(v, v + 4, b);
    a[i] += h;
    b[i] -= h;
    double g = (p(a[0], a[1], a[2], a[3]) - p(b[0], b[1], b[2], b[3])) / (2 * h);
    if (std::fabs(g) > 1e-4 * scale * scale) {
      static const char* names[4] = {"t", "x", "tau", "xi"};
      std::ostringstream os;
      os << "point is not critical: |d p3/d" << names[i] << "| = " << std::fabs(g);
      throw PreconditionError(os.str());
    }
  }
}

}  // namespace

HamiltonMatrix fundamental_matrix(const OperatorModel& m, const Point4& rho) {
  SymbolFn p = [&m](double t, double x, double tau, double xi) {
    return m.p3(t, x, tau, xi);
  };
  check_critical(p, rho);
  return assemble(hessian_from_model(m, rho), rho);
}

HamiltonMatrix fundamental_matrix(const SymbolFn& p, const Point4& rho) {
  check_critical(p, rho);
  return assemble(hessian_from_symbol(p, rho), rho);
}

SpectrumReport classify(const HamiltonMatrix& F) {
  // Characteristic polynomial by Faddeev-LeVerrier.
  const auto& A = F.m;
  auto matmul = [](const Hess& X, const Hess& Y) {
    Hess Z{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += X[i][k] * Y[k][j];
        Z[i][j] = s;
      }
    return Z;
  };
  auto tr = [](const Hess& X) { return X[0][0] + X[1][1] + X[2][2] + X[3][3]; };

  Hess M = A;
  double c3 = -tr(M);
  Hess M2 = M;
  for (int i = 0; i < 4; ++i) M2[i][i] += c3;
  M2 = matmul(A, M2);
  double c2 = -tr(M2) / 2.0;
  Hess M3 = M2;
  for (int i = 0; i < 4; ++i) M3[i][i] += c2;
  M3 = matmul(A, M3);
  double c1 = -tr(M3) / 3.0;
  Hess M4 = M3;
  for (int i = 0; i < 4; ++i) M4[i][i] += c1;
  M4 = matmul(A, M4);
  double c0 = -tr(M4) / 4.0;

  SpectrumReport rep;
  auto z = quartic_roots(c3, c2, c1, c0);

  double tol = 1e-7 * std::max(F.norm(), 1e-30);
  // verify the quartic actually vanished (guards eigen-solver failures)
  for (const cplx& zi : z) {
    cplx p = ((((zi + c3) * zi) + c2) * zi + c1) * zi + c0;
    double zscale = std::pow(std::max(1.0, std::abs(zi)), 4);
    if (std::abs(p) > 1e-6 * std::max(zscale, std::fabs(c0) + 1.0))
      throw NumericError("quartic eigenvalue solve did not converge on the Hamilton matrix");
  }

  std::vector<int> real_idx;
  for (int i = 0; i < 4; ++i) {
    rep.eigenvalues[i] = z[i];
    if (std::fabs(z[i].imag()) <= tol && std::fabs(z[i].real()) > tol)
      real_idx.push_back(i);
  }
  if (real_idx.size() == 2) {
    double m1 = z[real_idx[0]].real(), m2 = z[real_idx[1]].real();
    if (std::fabs(m1 + m2) <= 1e-5 * (std::fabs(m1) + std::fabs(m2))) {
      rep.effective = true;
      rep.mu = (std::fabs(m1) + std::fabs(m2)) / 2.0;
    }
  }
  for (int i = 0; i < 4; ++i) {
    bool is_real_pair = false;
    for (int k : real_idx) is_real_pair |= (k == i);
    if (!is_real_pair)
      rep.residual_imag = std::max(rep.residual_imag, std::fabs(z[i].real()));
  }
  return rep;
}

SubprincipalValue subprincipal(const OperatorModel& m, const Point4& rho) {
  double p_ttau = 2.0 * m.q1.partial("t", rho.t, rho.x, rho.xi) * rho.tau +
                  m.q2.partial("t", rho.t, rho.x, rho.xi);
  double p_xxi_q1 = m.q1.partial2("x", "xi", rho.t, rho.x, rho.xi);
  double p_xxi_q2 = m.q2.partial2("x", "xi", rho.t, rho.x, rho.xi);
  double p_xxi_q3 = m.q3.partial2("x", "xi", rho.t, rho.x, rho.xi);
  double p_xxi = p_xxi_q1 * rho.tau * rho.tau + p_xxi_q2 * rho.tau + p_xxi_q3;
  cplx p2(m.p2_re(rho.t, rho.x, rho.xi), m.p2_im(rho.t, rho.x, rho.xi));
  return {p2 + cplx(0.0, 0.5) * (p_ttau + p_xxi), rho};
}

SubprincipalValue subprincipal(const ReducedOperator& r, double x, double xi) {
  cplx b2(r.b2_re(0.0, x, xi), r.b2_im(0.0, x, xi));
  Point4 rho{0.0, x, 0.0, xi};
  return {b2 - cplx(0.0, 0.5) * r.a2(0.0, x, xi), rho};
}

PiConstant compute_Pi(const OperatorModel& m, const std::vector<double>& xs,
                      int N0) {
  if (xs.empty()) throw InputError("compute_Pi needs a nonempty x sample set");
  PiConstant out;
  double sup = -1.0;
  for (double x : xs) {
    for (double xi : {-1.0, 1.0}) {
      double lambda = -m.q1(0.0, x, xi) / 3.0;
      Point4 rho{0.0, x, lambda, xi};
      auto F = fundamental_matrix(m, rho);
      auto spec = classify(F);
      if (!spec.effective)
        throw PreconditionError("compute_Pi: Hamilton matrix has no nonzero real eigenvalue at a sample point");
      auto p2p = subprincipal(m, rho);
      double ratio = std::abs(p2p.value) / spec.mu;
      if (ratio > sup) {
        sup = ratio;
        out.sup_x = x;
        out.sup_xi = xi;
      }
    }
  }
  out.value = 2.0 / 3.0 + sup;
  out.N = static_cast<int>(std::ceil(6.5 * out.value)) + N0;
  return out;
}

NecessaryConditionsReport necessary_conditions(const OperatorModel& m,
                                               const Point4& rho, double M_loss) {
  auto F = fundamental_matrix(m, rho);
  auto spec = classify(F);
  auto p2p = subprincipal(m, rho);

  NecessaryConditionsReport rep;
  rep.has_real_eigenvalues = spec.effective;
  double tol = 1e-8 * std::max(1.0, std::abs(p2p.value));
  if (!spec.effective) {
    rep.im_value = p2p.value.imag();
    rep.im_subprincipal_zero = std::fabs(p2p.value.imag()) <= tol;
    double sum_mu = 0.0;
    for (const auto& z : spec.eigenvalues) sum_mu += std::abs(z);
    rep.re_margin = 0.25 * sum_mu - std::fabs(p2p.value.real());
    rep.re_subprincipal_bound = rep.re_margin >= -tol;
  }
  if (spec.mu > 0.0) {
    double n = m.space_dim;
    rep.loss_margin = 2.0 * n * (M_loss + 3.0) -
                      std::fabs(p2p.value.imag()) / spec.mu;
    rep.loss_bound = rep.loss_margin >= 0.0;
  }
  return rep;
}

}  // namespace trihyp
