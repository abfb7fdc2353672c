#include "cgks/boundary.hpp"

#include <cmath>
#include <numbers>

#include "cgks/kinetic.hpp"

namespace cgks::bc {

Kind kind_from_name(const std::string& name) {
  if (name == "periodic") return Kind::Periodic;
  if (name == "farfield") return Kind::FarField;
  if (name == "slip_wall") return Kind::SlipWall;
  if (name == "noslip_wall") return Kind::NoSlipWall;
  if (name == "maxwell_wall") return Kind::MaxwellWall;
  throw ConfigError("unknown boundary kind '" + name + "'");
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Periodic: return "periodic";
    case Kind::FarField: return "farfield";
    case Kind::SlipWall: return "slip_wall";
    case Kind::NoSlipWall: return "noslip_wall";
    case Kind::MaxwellWall: return "maxwell_wall";
  }
  return "?";
}

namespace {

Vec3 reflect(const Vec3& v, const Vec3& n) { return v - (2.0 * dot(v, n)) * n; }

State transform_momentum(const State& W, const Vec3& n, Kind kind) {
  Vec3 m{W[1], W[2], W[3]};
  m = (kind == Kind::NoSlipWall) ? -m : reflect(m, n);
  return {W[0], m.x, m.y, m.z, W[4]};
}

}  // namespace

State mirror_state(const State& W, const Vec3& n, Kind kind) { return transform_momentum(W, n, kind); }

StateGradient mirror_gradient(const StateGradient& g, const Vec3& n, Kind kind) {
  StateGradient t;
  for (int e = 0; e < 3; ++e) t[e] = transform_momentum(g[e], n, kind);
  StateGradient out{};
  for (int d = 0; d < 3; ++d) {
    for (int e = 0; e < 3; ++e) {
      const double R = (d == e ? 1.0 : 0.0) - 2.0 * n[d] * n[e];
      if (R != 0.0) out[d] += R * t[e];
    }
  }
  return out;
}

GhostCell fill_ghost(const BoundarySpec& spec, const State& W, const StateGradient& g, const Vec3& n) {
  switch (spec.kind) {
    case Kind::FarField: return {spec.W_inf, {}};
    case Kind::SlipWall:
    case Kind::NoSlipWall: return {mirror_state(W, n, spec.kind), mirror_gradient(g, n, spec.kind)};
    case Kind::MaxwellWall: return {mirror_state(W, n, Kind::SlipWall), {}};
    case Kind::Periodic: break;
  }
  throw MeshError("periodic boundary face without a partner");
}

recon::StencilGeometry ghost_geometry(const CellGeometry& g, const Vec3& x0, const Vec3& n) {
  recon::StencilGeometry s;
  s.centroid = g.centroid - (2.0 * dot(g.centroid - x0, n)) * n;
  const auto& m = g.second_moments;
  const double M[3][3] = {{m[0], m[3], m[4]}, {m[3], m[1], m[5]}, {m[4], m[5], m[2]}};
  double R[3][3], RM[3][3], out[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R[i][j] = (i == j ? 1.0 : 0.0) - 2.0 * n[i] * n[j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      RM[i][j] = 0.0;
      for (int k = 0; k < 3; ++k) RM[i][j] += R[i][k] * M[k][j];
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out[i][j] = 0.0;
      for (int k = 0; k < 3; ++k) out[i][j] += RM[i][k] * R[k][j];
    }
  s.second_moments = {out[0][0], out[1][1], out[2][2], out[0][1], out[0][2], out[1][2]};
  return s;
}

State farfield_trace(const State& inner, const State& W_inf, const Vec3& n, const GasModel& gas) {
  const double g = gas.gamma;
  const Primitive qi = to_primitive(inner, gas);
  const Primitive qo = to_primitive(W_inf, gas);
  if (!(qi.rho > 0.0 && qi.p > 0.0)) throw InvalidState("far-field inner trace is not admissible");
  const double ai = std::sqrt(g * qi.p / qi.rho);
  const double ao = std::sqrt(g * qo.p / qo.rho);
  const double uni = dot(qi.U, n);
  const double uno = dot(qo.U, n);
  const double mach = uni / ai;
  if (mach >= 1.0) return inner;
  if (mach <= -1.0) return W_inf;

  const double Rp = uni + 2.0 * ai / (g - 1.0);  // leaves the domain
  const double Rm = uno - 2.0 * ao / (g - 1.0);  // enters the domain
  const double un = 0.5 * (Rp + Rm);
  const double a = 0.25 * (g - 1.0) * (Rp - Rm);
  if (!(a > 0.0)) throw InvalidState("far-field trace has vacuum");
  const Primitive& up = (un >= 0.0) ? qi : qo;  // entropy and tangential velocity from upwind
  const double s = up.p / std::pow(up.rho, g);
  const double rho = std::pow(a * a / (g * s), 1.0 / (g - 1.0));
  const Vec3 U = up.U + (un - dot(up.U, n)) * n;
  return to_conserved({rho, U, rho * a * a / g}, gas);
}

WallFlux maxwell_wall_flux(const State& W_inner, const StateGradient& g_inner, double T_wall, double dt, double tau,
                           const GasModel& gas) {
  using kinetic::Half;
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(T_wall > 0.0)) throw InvalidState("wall temperature must be positive");
  const auto mi = kinetic::maxwellian_from_conserved(W_inner, gas);
  const auto ti = kinetic::moment_table(mi, gas);
  kinetic::MicroGradient a;
  for (int d = 0; d < 3; ++d) a[d] = kinetic::micro_slope(mi, g_inner[d], gas);
  const auto A = kinetic::temporal_slope(mi, ti, a, gas);

  const double rho = mi.rho;
  const State Fg = rho * kinetic::moment_psi(ti, Half::Positive, 1, 0, 0);
  const State Fa = rho * kinetic::moment_psi_transport(ti, Half::Positive, 1, a);
  const State FA = rho * kinetic::moment_psi_a(ti, Half::Positive, 1, 0, 0, A);
  const State Wg = rho * kinetic::moment_psi(ti, Half::Positive, 0, 0, 0);
  const State Wa = rho * kinetic::moment_psi_transport(ti, Half::Positive, 0, a);
  const State WA = rho * kinetic::moment_psi_a(ti, Half::Positive, 0, 0, 0, A);

  const kinetic::MaxwellianState mw{1.0, {0, 0, 0}, 1.0 / (2.0 * T_wall)};
  const auto tw = kinetic::moment_table(mw, gas);
  const State Fw = kinetic::moment_psi(tw, Half::Negative, 1, 0, 0);
  const State Ww = kinetic::moment_psi(tw, Half::Negative, 0, 0, 0);

  WallFlux out;
  const auto integrate = [&](double T, State& F, State& W) {
    // Incident particles: free transport of the inner expansion.
    const double cg = T, ca = -(tau * T + 0.5 * T * T), cA = -tau * T;
    const State Fin = cg * Fg + ca * Fa + cA * FA;
    const State Win = cg * Wg + ca * Wa + cA * WA;
    const double rho_w = -Fin[0] / (T * Fw[0]);
    if (!(rho_w > 0.0)) throw InvalidState("Maxwell wall density is not positive");
    F = Fin + (rho_w * T) * Fw;
    W = Win + (rho_w * T) * Ww;
    return rho_w;
  };
  integrate(0.5 * dt, out.F_half, out.W_half);
  out.rho_wall = integrate(dt, out.F_full, out.W_full);
  return out;
}

}  // namespace cgks::bc
