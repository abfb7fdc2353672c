#include "cgks/gks_flux.hpp"

#include <cmath>
#include <stdexcept>

namespace cgks::flux {

using kinetic::Half;
using kinetic::MaxwellianState;
using kinetic::MicroGradient;
using kinetic::MicroSlope;
using kinetic::MomentTable;

CollisionTimes collision_times(double pl, double pr, double pc, double mu, double dt, bool viscous) {
  if (!(pl > 0.0 && pr > 0.0 && pc > 0.0)) throw InvalidState("non-positive interface pressure");
  CollisionTimes t;
  t.tau = mu / pc;
  const double jump = std::abs((pl - pr) / (pl + pr)) * dt;
  t.tau_n = viscous ? t.tau + jump : 0.01 * dt + jump;
  return t;
}

namespace {

struct Side {
  MaxwellianState m;
  MomentTable t;
  MicroGradient a;
};

Side make_side(const State& W, const StateGradient& g, const GasModel& gas) {
  Side s;
  s.m = kinetic::maxwellian_from_conserved(W, gas);
  s.t = kinetic::moment_table(s.m, gas);
  for (int d = 0; d < 3; ++d) s.a[d] = kinetic::micro_slope(s.m, g[d], gas);
  return s;
}

EquilibriumState merge(const Side& l, const Side& r) {
  EquilibriumState c;
  c.W = l.m.rho * kinetic::moment_psi(l.t, Half::Positive, 0, 0, 0) +
        r.m.rho * kinetic::moment_psi(r.t, Half::Negative, 0, 0, 0);
  for (int d = 0; d < 3; ++d) {
    c.grad[d] = l.m.rho * kinetic::moment_psi_a(l.t, Half::Positive, 0, 0, 0, l.a[d]) +
                r.m.rho * kinetic::moment_psi_a(r.t, Half::Negative, 0, 0, 0, r.a[d]);
  }
  return c;
}

// Moments of g, (a . u) g and A g weighted by u1 (flux) and by 1 (state).
struct Terms {
  State Fg, Fa, FA, Wg, Wa, WA;
};

Terms terms(const Side& s, Half h, const MicroSlope& A) {
  const double rho = s.m.rho;
  Terms t;
  t.Fg = rho * kinetic::moment_psi(s.t, h, 1, 0, 0);
  t.Fa = rho * kinetic::moment_psi_transport(s.t, h, 1, s.a);
  t.FA = rho * kinetic::moment_psi_a(s.t, h, 1, 0, 0, A);
  t.Wg = rho * kinetic::moment_psi(s.t, h, 0, 0, 0);
  t.Wa = rho * kinetic::moment_psi_transport(s.t, h, 0, s.a);
  t.WA = rho * kinetic::moment_psi_a(s.t, h, 0, 0, 0, A);
  return t;
}

// Time-integrated coefficients of the interface distribution over [0, T].
struct Coefficients {
  double cg, ca, cA;  // equilibrium part
  double ng, na, nA;  // free transport of the initial data
};

Coefficients integrate_coefficients(double T, const CollisionTimes& ct) {
  const double tau = ct.tau, tn = ct.tau_n;
  Coefficients c;
  if (tn > 0.0) {
    const double eta = std::exp(-T / tn);
    const double e1 = tn * (1.0 - eta);  // int_0^T exp(-t/tn)
    const double e2 = tn * e1 - tn * T * eta;  // int_0^T t exp(-t/tn)
    c.cg = T - e1;
    c.ca = e2 + tau * e1 - tau * T;
    c.cA = 0.5 * T * T - tau * T + tau * e1;
    c.ng = e1;
    c.na = -(tau * e1 + e2);
    c.nA = -tau * e1;
  } else {
    c.cg = T;
    c.ca = -tau * T;
    c.cA = 0.5 * T * T - tau * T;
    c.ng = c.na = c.nA = 0.0;
  }
  return c;
}

void finish(FluxResult& r, double dt) {
  const TimeFit w = s2o4_flux_pair(r.W_half, r.W_full, dt);
  r.W_point = w.value;
  r.dW_dt = w.derivative;
  r.W_interface_end = r.W_point + dt * r.dW_dt;
}

void check_dt(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

}  // namespace

EquilibriumState equilibrium_merge(const State& Wl, const StateGradient& gl, const State& Wr, const StateGradient& gr,
                                   const GasModel& gas) {
  return merge(make_side(Wl, gl, gas), make_side(Wr, gr, gas));
}

FluxResult flux_full(const InterfaceInput& in, const GasModel& gas) {
  check_dt(in.dt);
  const Side l = make_side(in.Wl, in.gl, gas);
  const Side r = make_side(in.Wr, in.gr, gas);
  const EquilibriumState eq = merge(l, r);
  const Side c = make_side(eq.W, eq.grad, gas);

  FluxResult res;
  res.times = in.times ? *in.times
                       : collision_times(pressure(in.Wl, gas), pressure(in.Wr, gas), pressure(eq.W, gas), in.mu, in.dt,
                                         in.viscous);

  const Terms tc = terms(c, Half::Full, kinetic::temporal_slope(c.m, c.t, c.a, gas));
  const Terms tl = terms(l, Half::Positive, kinetic::temporal_slope(l.m, l.t, l.a, gas));
  const Terms tr = terms(r, Half::Negative, kinetic::temporal_slope(r.m, r.t, r.a, gas));

  const auto assemble = [&](double T, State& F, State& W) {
    const Coefficients k = integrate_coefficients(T, res.times);
    for (int i = 0; i < 5; ++i) {
      F[i] = k.cg * tc.Fg[i] + k.ca * tc.Fa[i] + k.cA * tc.FA[i] + k.ng * (tl.Fg[i] + tr.Fg[i]) +
             k.na * (tl.Fa[i] + tr.Fa[i]) + k.nA * (tl.FA[i] + tr.FA[i]);
      W[i] = k.cg * tc.Wg[i] + k.ca * tc.Wa[i] + k.cA * tc.WA[i] + k.ng * (tl.Wg[i] + tr.Wg[i]) +
             k.na * (tl.Wa[i] + tr.Wa[i]) + k.nA * (tl.WA[i] + tr.WA[i]);
    }
  };
  assemble(0.5 * in.dt, res.F_half, res.W_half);
  assemble(in.dt, res.F_full, res.W_full);
  finish(res, in.dt);
  return res;
}

FluxResult flux_smooth(const InterfaceInput& in, const GasModel& gas) {
  check_dt(in.dt);
  const Side l = make_side(in.Wl, in.gl, gas);
  const Side r = make_side(in.Wr, in.gr, gas);
  const EquilibriumState eq = merge(l, r);
  const Side c = make_side(eq.W, eq.grad, gas);

  FluxResult res;
  if (in.times) {
    res.times = *in.times;
  } else {
    const double pc = pressure(eq.W, gas);
    if (!(pc > 0.0)) throw InvalidState("non-positive interface pressure");
    res.times.tau = res.times.tau_n = in.mu / pc;
  }
  const double tau = res.times.tau;
  const Terms tc = terms(c, Half::Full, kinetic::temporal_slope(c.m, c.t, c.a, gas));

  const auto assemble = [&](double T, State& F, State& W) {
    for (int i = 0; i < 5; ++i) {
      F[i] = T * tc.Fg[i] - tau * T * (tc.Fa[i] + tc.FA[i]) + 0.5 * T * T * tc.FA[i];
      W[i] = T * tc.Wg[i] - tau * T * (tc.Wa[i] + tc.WA[i]) + 0.5 * T * T * tc.WA[i];
    }
  };
  assemble(0.5 * in.dt, res.F_half, res.W_half);
  assemble(in.dt, res.F_full, res.W_full);
  finish(res, in.dt);
  return res;
}

State kfvs_flux(const State& Wl, const State& Wr, const GasModel& gas) {
  const auto ml = kinetic::maxwellian_from_conserved(Wl, gas);
  const auto mr = kinetic::maxwellian_from_conserved(Wr, gas);
  return ml.rho * kinetic::moment_psi(kinetic::moment_table(ml, gas), Half::Positive, 1, 0, 0) +
         mr.rho * kinetic::moment_psi(kinetic::moment_table(mr, gas), Half::Negative, 1, 0, 0);
}

TimeFit s2o4_flux_pair(const State& I_half, const State& I_full, double dt) {
  check_dt(dt);
  TimeFit f;
  for (int i = 0; i < 5; ++i) {
    f.value[i] = (4.0 * I_half[i] - I_full[i]) / dt;
    f.derivative[i] = 4.0 * (I_full[i] - 2.0 * I_half[i]) / (dt * dt);
  }
  return f;
}

LocalFrame LocalFrame::from_normal(const Vec3& n) {
  // Start the first tangent from the coordinate axis least aligned with n.
  int k = 0;
  for (int d = 1; d < 3; ++d)
    if (std::abs(n[d]) < std::abs(n[k])) k = d;
  Vec3 e;
  e[k] = 1.0;
  LocalFrame f;
  f.n = n;
  f.t1 = normalized(e - dot(e, n) * n);
  f.t2 = cross(n, f.t1);
  return f;
}

void LocalFrame::check() const {
  const Vec3 a[3] = {n, t1, t2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (std::abs(dot(a[i], a[j]) - (i == j ? 1.0 : 0.0)) > 1e-10) {
        throw std::invalid_argument("local frame is not orthonormal");
      }
    }
}

State rotate_to_local(const State& W, const LocalFrame& f) {
  const Vec3 m{W[1], W[2], W[3]};
  return {W[0], dot(m, f.n), dot(m, f.t1), dot(m, f.t2), W[4]};
}

State rotate_from_local(const State& W, const LocalFrame& f) {
  const Vec3 m = W[1] * f.n + W[2] * f.t1 + W[3] * f.t2;
  return {W[0], m.x, m.y, m.z, W[4]};
}

StateGradient rotate_to_local(const StateGradient& g, const LocalFrame& f) {
  StateGradient rotated;
  for (int d = 0; d < 3; ++d) rotated[d] = rotate_to_local(g[d], f);
  StateGradient out{};
  for (int e = 0; e < 3; ++e) {
    const Vec3& ax = f.axis(e);
    for (int d = 0; d < 3; ++d) out[e] += ax[d] * rotated[d];
  }
  return out;
}

StateGradient rotate_from_local(const StateGradient& g, const LocalFrame& f) {
  StateGradient rotated;
  for (int e = 0; e < 3; ++e) rotated[e] = rotate_from_local(g[e], f);
  StateGradient out{};
  for (int d = 0; d < 3; ++d) {
    for (int e = 0; e < 3; ++e) out[d] += f.axis(e)[d] * rotated[e];
  }
  return out;
}

}  // namespace cgks::flux
