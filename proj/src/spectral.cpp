#include "trihyp/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "trihyp/errors.hpp"
#include "trihyp/rng.hpp"
#include "trihyp/weights.hpp"

namespace trihyp {

Grid1D::Grid1D(int n_points, double length) : n(n_points), L(length) {
  if (n < 16 || (n & (n - 1)) != 0)
    throw InputError("grid size must be a power of two >= 16");
  x.resize(n);
  xi.resize(n);
  for (int j = 0; j < n; ++j) x[j] = L * j / n;
  for (int k = 0; k < n; ++k) {
    int kk = (k < n / 2) ? k : k - n;
    xi[k] = 2.0 * M_PI * kk / L;
  }
}

double Grid1D::xi_max() const { return 2.0 * M_PI * (n / 2) / L; }

Field& Field::operator+=(const Field& o) {
  for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}
Field& Field::operator-=(const Field& o) {
  for (size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}
Field& Field::operator*=(cplx c) {
  for (auto& z : v) z *= c;
  return *this;
}
double Field::max_abs() const {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx c, Field a) { return a *= c; }

Field multiplier_c(const std::function<cplx(double)>& m, const Field& v) {
  auto c = fft_forward(v.v);
  for (int k = 0; k < v.grid->n; ++k) {
    cplx mk = m(v.grid->xi[k]);
    if (!std::isfinite(mk.real()) || !std::isfinite(mk.imag()))
      throw NumericError("multiplier symbol not finite at a grid frequency");
    c[k] *= mk;
  }
  Field out(v.grid);
  out.v = fft_inverse(c);
  return out;
}

Field multiplier(const std::function<double(double)>& m, const Field& v) {
  return multiplier_c([&m](double xi) { return cplx(m(xi)); }, v);
}

cplx inner(const Field& a, const Field& b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * std::conj(b.v[i]);
  return s * (a.grid->L / a.grid->n);
}

double norm_l2(const Field& a) { return std::sqrt(std::abs(inner(a, a).real())); }

double sobolev_norm(const Field& v, double s) {
  auto c = fft_forward(v.v);
  double sum = 0.0;
  for (int k = 0; k < v.grid->n; ++k) {
    double w = std::pow(1.0 + v.grid->xi[k] * v.grid->xi[k], s);
    sum += w * std::norm(c[k]);
  }
  return std::sqrt(v.grid->L * sum);
}

// ---- XiPolyOp ----------------------------------------------------------

namespace {
// Nodes {0, 1, -1, 2, -2} and the inverse Vandermonde for degree <= 4.
constexpr double kNodes[5] = {0.0, 1.0, -1.0, 2.0, -2.0};

void vandermonde_solve(const double y[5], double c[5]) {
  // direct inversion for the fixed node set (columns xi^0..xi^4)
  // Solved once symbolically; rows give c_d as combinations of y.
  c[0] = y[0];
  c[1] = (2.0 / 3.0) * (y[1] - y[2]) - (1.0 / 12.0) * (y[3] - y[4]);
  c[2] = (2.0 / 3.0) * (y[1] + y[2]) - (1.0 / 24.0) * (y[3] + y[4]) - (5.0 / 4.0) * y[0];
  c[3] = (1.0 / 12.0) * (y[3] - y[4]) - (1.0 / 6.0) * (y[1] - y[2]);
  c[4] = (1.0 / 24.0) * (y[3] + y[4]) - (1.0 / 6.0) * (y[1] + y[2]) + (1.0 / 4.0) * y[0];
}
}  // namespace

XiPolyOp::XiPolyOp(CoefficientField sym, std::shared_ptr<const Grid1D> grid)
    : sym_(std::move(sym)), grid_(std::move(grid)) {
  // Probe xi-polynomiality at a few (t,x) points with a 6th node.
  for (double t : {0.0, 0.37}) {
    for (double x : {grid_->x[0], grid_->x[grid_->n / 3]}) {
      double y[5];
      for (int i = 0; i < 5; ++i) y[i] = sym_(t, x, kNodes[i]);
      double c[5];
      vandermonde_solve(y, c);
      double probe = 3.0;
      double pred = (((c[4] * probe + c[3]) * probe + c[2]) * probe + c[1]) * probe + c[0];
      double actual = sym_(t, x, probe);
      double scale = std::max({1.0, std::fabs(pred), std::fabs(actual)});
      if (std::fabs(pred - actual) > 1e-8 * scale) {
        polynomial_ = false;
        return;
      }
    }
  }
}

void XiPolyOp::coeffs_at(double t, std::vector<std::array<double, 5>>& c) const {
  c.resize(grid_->n);
  for (int j = 0; j < grid_->n; ++j) {
    double y[5];
    for (int i = 0; i < 5; ++i) y[i] = sym_(t, grid_->x[j], kNodes[i]);
    vandermonde_solve(y, c[j].data());
  }
}

Field XiPolyOp::apply(double t, const Field& u) const {
  Field out(u.grid);
  if (polynomial_) {
    std::vector<std::array<double, 5>> c;
    coeffs_at(t, c);
    auto hat = fft_forward(u.v);
    for (int d = 0; d <= 4; ++d) {
      bool nonzero = false;
      for (int j = 0; j < grid_->n && !nonzero; ++j) nonzero = c[j][d] != 0.0;
      if (!nonzero) continue;
      auto hd = hat;
      for (int k = 0; k < grid_->n; ++k) hd[k] *= std::pow(grid_->xi[k], d);
      auto vd = fft_inverse(hd);
      for (int j = 0; j < grid_->n; ++j) out.v[j] += c[j][d] * vd[j];
    }
    return out;
  }
  // dense left quantization: Op(s)u(x_j) = sum_k s(t,x_j,xi_k) u_hat_k e^{i xi_k x_j}
  auto hat = fft_forward(u.v);
  for (int j = 0; j < grid_->n; ++j) {
    cplx s = 0.0;
    for (int k = 0; k < grid_->n; ++k) {
      double ph = grid_->xi[k] * grid_->x[j];
      s += sym_(t, grid_->x[j], grid_->xi[k]) * hat[k] * cplx(std::cos(ph), std::sin(ph));
    }
    out.v[j] = s;
  }
  return out;
}

// ---- OperatorP ---------------------------------------------------------

OperatorP::OperatorP(const ReducedOperator& r, std::shared_ptr<const Grid1D> grid)
    : r_(r),
      grid_(grid),
      a2_(r.a2, grid),
      alpha_(r.alpha, grid),
      b3_(r.b3, grid),
      b1_(r.b1, grid),
      c1_(r.c1, grid),
      b2re_(r.b2_re, grid),
      b2im_(r.b2_im, grid) {
  double e = r_.eps;
  e13_ = std::pow(e, 1.0 / 3.0);
  e23_ = std::pow(e, 2.0 / 3.0);
  em23_ = std::pow(e, -2.0 / 3.0);
  e43_ = std::pow(e, 4.0 / 3.0);
  e2_ = e * e;
}

Field OperatorP::apply_rest(const State& s) const {
  const cplx I(0.0, 1.0);
  double t = s.t;
  // i t a2 u' + i eps^{-2/3} alpha u'
  Field out = I * cplx(t) * a2_.apply(t, s.u1);
  if (!r_.alpha.is_zero()) out += (I * cplx(em23_)) * alpha_.apply(t, s.u1);
  // b2 u
  if (!r_.b2_re.is_zero()) out += b2re_.apply(t, s.u);
  if (!r_.b2_im.is_zero()) out += I * b2im_.apply(t, s.u);
  // eps^{1/3} [ t^2 b3 u - i b1 u' ]
  if (!r_.b3.is_zero()) out += cplx(e13_ * t * t) * b3_.apply(t, s.u);
  if (!r_.b1.is_zero()) out += (-I * cplx(e13_)) * b1_.apply(t, s.u1);
  // eps^{2/3} b0 D_t^2 u = -eps^{2/3} b0 u''
  if (!r_.b0.is_zero()) {
    Field f(grid_);
    for (int j = 0; j < grid_->n; ++j)
      f.v[j] = -e23_ * r_.b0(t, grid_->x[j], 0.0) * s.u2.v[j];
    out += f;
  }
  // eps c1 u
  if (!r_.c1.is_zero()) out += cplx(r_.eps) * c1_.apply(t, s.u);
  // eps^{4/3} c0 D_t u + eps^2 d0 u
  if (!r_.c0.is_zero() || !r_.d0.is_zero()) {
    Field f(grid_);
    for (int j = 0; j < grid_->n; ++j) {
      cplx z = 0.0;
      if (!r_.c0.is_zero()) z += -I * e43_ * r_.c0(t, grid_->x[j], 0.0) * s.u1.v[j];
      if (!r_.d0.is_zero()) z += e2_ * r_.d0(t, grid_->x[j], 0.0) * s.u.v[j];
      f.v[j] = z;
    }
    out += f;
  }
  return out;
}

Field OperatorP::apply(const State& s, const Field& uppp) const {
  Field out = apply_rest(s);
  const cplx I(0.0, 1.0);
  for (int j = 0; j < grid_->n; ++j) out.v[j] += I * uppp.v[j];
  return out;
}

bool OperatorP::coefficients_resolved(double T) const {
  const CoefficientField* fields[] = {&r_.a2, &r_.alpha, &r_.b3,
                                      &r_.b2_re, &r_.b2_im, &r_.b1, &r_.c1};
  for (const auto* f : fields) {
    if (f->is_zero()) continue;
    for (double t : {0.0, T}) {
      for (double xi : {1.0, double(grid_->n) / 4.0}) {
        std::vector<cplx> vals(grid_->n);
        for (int j = 0; j < grid_->n; ++j) vals[j] = (*f)(t, grid_->x[j], xi);
        auto hat = fft_forward(vals);
        double peak = 0.0;
        for (const auto& z : hat) peak = std::max(peak, std::abs(z));
        if (peak == 0.0) continue;
        if (std::abs(hat[grid_->n / 2]) > 1e-12 * peak) return false;
      }
    }
  }
  return true;
}

double OperatorP::cfl_step(double T, double c_cfl) const {
  double ximax = grid_->xi_max();
  double cmax = 0.0;
  for (double t : {0.0, T / 2.0, T}) {
    for (int j = 0; j < grid_->n; j += std::max(1, grid_->n / 32)) {
      double x = grid_->x[j];
      double v = T * std::fabs(r_.a2(t, x, ximax)) + em23_ * std::fabs(r_.alpha(t, x, ximax));
      cmax = std::max(cmax, v / (ximax * ximax));
    }
  }
  cmax = std::max(cmax, 1e-12);
  return c_cfl / (ximax * std::sqrt(cmax));
}

Trajectory solve_cauchy(const OperatorP& op, const State& data,
                        const std::function<Field(double)>& forcing, double t_end,
                        int steps) {
  if (steps < 1) throw InputError("solve_cauchy needs at least one step");
  const cplx I(0.0, 1.0);
  auto grid = op.grid();

  // y' = (u', u'', u''') with i u''' = F - rest(u)
  auto rhs = [&](const State& s, Field& du, Field& du1, Field& du2) {
    du = s.u1;
    du1 = s.u2;
    Field rest = op.apply_rest(s);
    Field F = forcing ? forcing(s.t) : Field(grid);
    du2 = F;
    du2 -= rest;
    du2 *= -I;  // u''' = -i (F - rest)
  };

  double h = (t_end - data.t) / steps;

  Trajectory traj;
  traj.dt = h;
  traj.states.reserve(steps + 1);
  State s = data;
  traj.states.push_back(s);
  double last_norm = s.u.max_abs() + s.u1.max_abs() + s.u2.max_abs();

  Field k1u, k1v, k1w, k2u, k2v, k2w, k3u, k3v, k3w, k4u, k4v, k4w;
  for (int n = 0; n < steps; ++n) {
    State tmp = s;
    rhs(s, k1u, k1v, k1w);

    tmp.t = s.t + h / 2;
    tmp.u = s.u + cplx(h / 2) * k1u;
    tmp.u1 = s.u1 + cplx(h / 2) * k1v;
    tmp.u2 = s.u2 + cplx(h / 2) * k1w;
    rhs(tmp, k2u, k2v, k2w);

    tmp.u = s.u + cplx(h / 2) * k2u;
    tmp.u1 = s.u1 + cplx(h / 2) * k2v;
    tmp.u2 = s.u2 + cplx(h / 2) * k2w;
    rhs(tmp, k3u, k3v, k3w);

    tmp.t = s.t + h;
    tmp.u = s.u + cplx(h) * k3u;
    tmp.u1 = s.u1 + cplx(h) * k3v;
    tmp.u2 = s.u2 + cplx(h) * k3w;
    rhs(tmp, k4u, k4v, k4w);

    s.t += h;
    s.u += cplx(h / 6) * (k1u + cplx(2) * k2u + cplx(2) * k3u + k4u);
    s.u1 += cplx(h / 6) * (k1v + cplx(2) * k2v + cplx(2) * k3v + k4v);
    s.u2 += cplx(h / 6) * (k1w + cplx(2) * k2w + cplx(2) * k3w + k4w);
    traj.states.push_back(s);

    double now = s.u.max_abs() + s.u1.max_abs() + s.u2.max_abs();
    // growth check is meaningless while the state is still effectively zero
    if (last_norm > 1e-12 && now > 1e8 * last_norm)
      throw NumericError("solver instability detected at t = " + std::to_string(s.t));
    last_norm = std::max(last_norm, now);
  }
  return traj;
}

// ---- manufactured solutions -------------------------------------------

cplx Manufactured::g(double t, int deriv) const {
  double s = t - t0;
  cplx out = 0.0;
  for (size_t k = 0; k < coeff.size(); ++k) {
    int kk = static_cast<int>(k);
    if (kk < deriv) continue;
    double fac = 1.0;
    for (int j = 0; j < deriv; ++j) fac *= (kk - j);
    out += coeff[k] * fac * std::pow(s, kk - deriv);
  }
  return out;
}

State Manufactured::state(double t) const {
  State s;
  s.t = t;
  s.u = phi;
  s.u1 = phi;
  s.u2 = phi;
  s.u *= g(t, 0);
  s.u1 *= g(t, 1);
  s.u2 *= g(t, 2);
  return s;
}

Field Manufactured::time_derivative3(double t) const {
  Field f = phi;
  f *= g(t, 3);
  return f;
}

Manufactured random_manufactured(std::shared_ptr<const Grid1D> grid, unsigned seed,
                                 double t0, int k_max) {
  Rng rng(seed);
  Manufactured m;
  m.t0 = t0;
  m.coeff.assign(8, cplx(0.0));
  for (int k = 3; k <= 6; ++k)
    m.coeff[k] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  m.phi = Field(grid);
  std::vector<cplx> hat(grid->n, cplx(0.0));
  for (int kk = -k_max; kk <= k_max; ++kk) {
    int idx = (kk >= 0) ? kk : grid->n + kk;
    double decay = 1.0 / (1.0 + kk * kk);
    hat[idx] = decay * cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  m.phi.v = fft_inverse(hat);
  return m;
}

}  // namespace trihyp
