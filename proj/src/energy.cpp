#include "trihyp/energy.hpp"

#include <algorithm>
#include <cmath>

#include "trihyp/errors.hpp"
#include "trihyp/rng.hpp"

namespace trihyp {

namespace {

Field f_minus_k(double k, double t, const Field& v) {
  return multiplier([k, t](double xi) { return f_power(k, t, xi); }, v);
}

}  // namespace

EnergyMachine::EnergyMachine(const OperatorP& op, WeightSpec spec)
    : op_(&op),
      spec_(spec),
      a2_frozen_(
          CoefficientField(
              [f = op.reduced().a2](double, double x, double xi) {
                return f(0.0, x, xi);
              },
              2),
          op.grid()),
      a2_live_(op.reduced().a2, op.grid()),
      alpha_op_(op.reduced().alpha, op.grid()),
      b3_op_(op.reduced().b3, op.grid()),
      em23_(std::pow(op.reduced().eps, -2.0 / 3.0)) {}

Field EnergyMachine::B_frozen(double t, const Field& u) const {
  Field out = a2_frozen_.apply(0.0, u);
  out *= cplx(t);
  if (!op_->reduced().alpha.is_zero()) {
    Field av = alpha_op_.apply(t, u);
    av *= cplx(em23_);
    out += av;
  }
  return out;
}

Field EnergyMachine::B_live(double t, const Field& u) const {
  Field out = a2_live_.apply(t, u);
  out *= cplx(t);
  if (!op_->reduced().alpha.is_zero()) {
    Field av = alpha_op_.apply(t, u);
    av *= cplx(em23_);
    out += av;
  }
  return out;
}

Field EnergyMachine::apply_M(const State& s) const {
  double psi = psi_weight(s.t, spec_.lambda);
  Field out = B_live(s.t, s.u);
  out *= cplx(-WeightSpec::theta);
  out -= s.u2;  // D_t^2 u = -u''
  out *= cplx(psi);
  return out;
}

std::vector<Field> EnergyMachine::apply_M(const Trajectory& traj) const {
  if (traj.states.empty()) throw InputError("apply_M needs a nonempty trajectory");
  const State& data = traj.states.front();
  double tr = norm_l2(data.u) + norm_l2(data.u1) + norm_l2(data.u2);
  if (tr > 1e-12)
    throw PreconditionError("apply_M: traces do not vanish at the data end");
  std::vector<Field> out;
  out.reserve(traj.states.size());
  for (const State& s : traj.states) {
    if (s.t == data.t) {
      out.push_back(Field(op_->grid()));  // vanishing-trace limit
      continue;
    }
    out.push_back(apply_M(s));
  }
  return out;
}

EnergyMachine::EnergyRow EnergyMachine::energy_E(const State& s, double k) const {
  double psi = psi_weight(s.t, spec_.lambda);
  Field Bu = B_frozen(s.t, s.u);
  Field Bu1 = B_frozen(s.t, s.u1);
  Field fu2 = f_minus_k(k, s.t, s.u2);
  Field fu1 = f_minus_k(k, s.t, s.u1);
  Field fBu = f_minus_k(k, s.t, Bu);
  Field fBu1 = f_minus_k(k, s.t, Bu1);

  EnergyRow row;
  row.t = s.t;
  double n2 = norm_l2(fu2);
  row.summand[0] = psi * (1.0 / 3.0) * n2 * n2;
  row.summand[1] = psi * (2.0 / 3.0) * inner(fBu1, fu1).real();
  double nB = norm_l2(fBu);
  row.summand[2] = psi * (1.0 / 6.0) * nB * nB;
  Field half = fu2;
  half += cplx(0.5) * fBu;
  double nh = norm_l2(half);
  row.summand[3] = psi * (2.0 / 3.0) * nh * nh;
  row.total = row.summand[0] + row.summand[1] + row.summand[2] + row.summand[3];
  return row;
}

EnergyMachine::ScriptRow EnergyMachine::script_E(const State& s, double k) const {
  double psi = psi_weight(s.t, spec_.lambda);
  double theta = WeightSpec::theta;
  Field Bu = B_live(s.t, s.u);
  Field Bu1 = B_live(s.t, s.u1);
  Field fu2 = f_minus_k(k, s.t, s.u2);
  Field fu1 = f_minus_k(k, s.t, s.u1);
  Field fBu = f_minus_k(k, s.t, Bu);
  Field fBu1 = f_minus_k(k, s.t, Bu1);

  double n2 = norm_l2(fu2);
  double nB = norm_l2(fBu);
  double val = n2 * n2 + (1.0 - theta) * inner(fBu1, fu1).real() +
               theta * nB * nB + 2.0 * theta * inner(fu2, fBu).real();
  val *= psi;

  ScriptRow row;
  const ReducedOperator& r = op_->reduced();
  if (!r.b3.is_zero()) {
    Field fb3u = f_minus_k(k, s.t, b3_op_.apply(s.t, s.u));
    double e13 = std::pow(r.eps, 1.0 / 3.0);
    row.b3_share = e13 * s.t * std::exp(-2.0 * spec_.lambda * s.t) * 2.0 *
                   inner(fb3u, f_minus_k(k, s.t, s.u1)).imag();
  }
  row.value = val + row.b3_share;
  return row;
}

EnergyMachine::SkReport EnergyMachine::s_k_identity(const State& s, double k) const {
  double psi = psi_weight(s.t, spec_.lambda);
  double theta = WeightSpec::theta;
  Field Bu = B_live(s.t, s.u);
  Field fu2 = f_minus_k(k, s.t, s.u2);
  Field fBu = f_minus_k(k, s.t, Bu);

  double n2 = norm_l2(fu2), nB = norm_l2(fBu);
  SkReport rep;
  rep.lhs = psi * (n2 * n2 + theta * nB * nB + 2.0 * theta * inner(fBu, fu2).real());

  Field half = fu2;
  half += cplx(0.5) * fBu;
  double nh = norm_l2(half);
  rep.rhs = psi * (n2 * n2 / 3.0 + nB * nB / 6.0 + (2.0 / 3.0) * nh * nh);
  rep.gap = std::fabs(rep.lhs - rep.rhs);

  // S_k >= (1/3) psi ||f^-k u''||^2 + (4/27) psi ||f^-k B u||^2
  double bound = psi * (n2 * n2 / 3.0 + (4.0 / 27.0) * nB * nB);
  rep.lower_bound_margin = rep.lhs - bound;
  rep.lower_bound_ok = rep.lower_bound_margin >= -1e-12 * std::max(1.0, rep.lhs);
  return rep;
}

double EnergyMachine::pairing(const State& s, const Field& Pu) const {
  Field fPu = multiplier(
      [N = double(spec_.N), t = s.t](double xi) { return f_power(2.0 * N, t, xi); },
      Pu);
  Field Mu = apply_M(s);
  return -2.0 * inner(fPu, Mu).imag();
}

PairingReport pairing_decomposition(const EnergyMachine& em, const Trajectory& traj,
                                    const std::function<Field(double)>& Pu_at) {
  const auto& st = traj.states;
  if (st.size() < 5) throw InputError("pairing decomposition needs >= 5 samples");

  // trace check at the data end
  const State& first = st.front();
  double trace_norm =
      norm_l2(first.u) + norm_l2(first.u1) + norm_l2(first.u2);
  if (trace_norm > 1e-10)
    throw PreconditionError("trajectory traces do not vanish at the data end");

  double h = traj.dt;
  int n = static_cast<int>(st.size());
  double N = em.spec().N;
  double lambda = em.spec().lambda;

  std::vector<double> EN(n), ENh(n);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      EN[i] = ENh[i] = 0.0;  // vanishing traces; psi-limit is zero
      continue;
    }
    EN[i] = em.script_E(st[i], N).value;
    ENh[i] = em.script_E(st[i], N + 0.5).value;
  }

  PairingReport rep;
  for (int i = 2; i + 2 < n; ++i) {
    PairingSample smp;
    smp.t = st[i].t;
    smp.pairing = em.pairing(st[i], Pu_at(st[i].t));
    smp.dE_N = (EN[i - 2] - 8.0 * EN[i - 1] + 8.0 * EN[i + 1] - EN[i + 2]) / (12.0 * h);
    smp.E_N = EN[i];
    smp.E_Nhalf = ENh[i];
    smp.residual =
        smp.pairing - smp.dE_N - (2.0 * N / 3.0) * smp.E_Nhalf - 2.0 * lambda * smp.E_N;
    smp.leading = std::fabs(smp.dE_N) + (2.0 * N / 3.0) * std::fabs(smp.E_Nhalf) +
                  2.0 * lambda * std::fabs(smp.E_N);
    rep.samples.push_back(smp);
  }
  for (const auto& smp : rep.samples) {
    rep.sup_residual = std::max(rep.sup_residual, std::fabs(smp.residual));
    rep.sup_leading = std::max(rep.sup_leading, smp.leading);
    rep.int_residual += std::fabs(smp.residual) * h;
    rep.int_leading += smp.leading * h;
  }
  return rep;
}

AprioriResult apriori_check(const EnergyMachine& em, const Trajectory& traj,
                            const std::function<Field(double)>& Pu_at,
                            bool forward, double p) {
  const auto& st = traj.states;
  int n = static_cast<int>(st.size());
  double N = em.spec().N;
  double lambda = em.spec().lambda;

  // traces must vanish at the correct end (first state of the trajectory)
  double tr = norm_l2(st.front().u) + norm_l2(st.front().u1) + norm_l2(st.front().u2);
  if (tr > 1e-10)
    throw PreconditionError("a priori check: traces at the data end do not vanish");

  std::vector<double> li(n), ri(n);
  for (int i = 0; i < n; ++i) {
    const State& s = st[i];
    double t = s.t;
    double u2m = sobolev_norm(s.u, 2.0 + p);
    double u1p = sobolev_norm(s.u1, 1.0 + p);
    double u2p = sobolev_norm(s.u2, p);
    double u1m = sobolev_norm(s.u, 1.0 + p);
    double u0p = sobolev_norm(s.u1, p);
    double Pn = sobolev_norm(Pu_at(t), 2.0 * N / 3.0 + p);
    if (!forward) {
      double wl = std::exp(-2.0 * lambda * t - 2.0 * N * std::log1p(t));
      double wr = std::exp(-2.0 * lambda * t - 2.0 * N * std::log1p(t / 3.0));
      double sum = t * u2m * u2m + u1p * u1p + u1m * u1m + u0p * u0p;
      sum += (t > 0.0) ? u2p * u2p / t : 0.0;  // ~ t near the vanishing traces
      li[i] = wl * sum;
      ri[i] = wr * Pn * Pn;
    } else {
      double wl = std::exp(2.0 * lambda * t + 2.0 * N * std::log1p(t / 3.0));
      double wr = std::exp(2.0 * lambda * t + 2.0 * N * std::log1p(t));
      double sum = t * t * t * u2m * u2m + t * t * u1p * u1p + t * u2p * u2p +
                   u1m * u1m + u0p * u0p;
      li[i] = wl * sum;
      ri[i] = wr * t * t * Pn * Pn;
    }
  }
  double h = std::fabs(traj.dt);
  AprioriResult out;
  for (int i = 0; i + 1 < n; ++i) {
    out.lhs += 0.5 * h * (li[i] + li[i + 1]);
    out.rhs += 0.5 * h * (ri[i] + ri[i + 1]);
  }
  out.lhs *= lambda;
  if (out.rhs == 0.0 && out.lhs > 1e-14)
    throw NumericError("a priori check: vanishing right side with nonzero left side");
  out.ratio = (out.rhs == 0.0) ? 0.0 : out.lhs / out.rhs;
  return out;
}

double garding_fit(const EnergyMachine& em, double k, double t, double C2,
                   unsigned seed, int trials) {
  Rng rng(seed);
  auto grid = em.grid();
  double c1 = std::numeric_limits<double>::infinity();
  for (int it = 0; it < trials; ++it) {
    // random smooth field with a decaying spectrum
    std::vector<cplx> hat(grid->n, cplx(0.0));
    for (int kk = -grid->n / 4; kk <= grid->n / 4; ++kk) {
      int idx = (kk >= 0) ? kk : grid->n + kk;
      double decay = 1.0 / (1.0 + kk * kk);
      hat[idx] = decay * cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    Field v(grid);
    v.v = fft_inverse(hat);
    auto fk = [k, t](double xi) { return f_power(k, t, xi); };
    Field fv = multiplier(fk, v);
    Field fa2v = multiplier(fk, em.a2_frozen_apply(v));
    double q = inner(fa2v, fv).real();
    double h1 = sobolev_norm(fv, 1.0);
    double h0 = norm_l2(fv);
    if (h1 <= 0.0) continue;
    c1 = std::min(c1, (q + C2 * h0 * h0) / (h1 * h1));
  }
  return c1;
}

}  // namespace trihyp
