#include <cmath>
#include <random>

#include "cgks/gks_flux.hpp"
#include "doctest.h"
#include "velocity_oracle.hpp"

using namespace cgks;
using namespace cgks::flux;

namespace {

const GasModel kGas = GasModel::from_gamma(1.4);

void check_state(const State& got, const State& want, double tol) {
  for (int k = 0; k < 5; ++k) {
    INFO("component " << k << " got " << got[k] << " want " << want[k]);
    CHECK(std::abs(got[k] - want[k]) <= tol * (1.0 + std::abs(want[k])));
  }
}

State euler_flux(const State& W, const Vec3& n) {
  const auto q = to_primitive(W, kGas);
  const double un = dot(q.U, n);
  return {W[0] * un, W[1] * un + q.p * n.x, W[2] * un + q.p * n.y, W[3] * un + q.p * n.z, (W[4] + q.p) * un};
}

InterfaceInput uniform_input(const State& W, double dt) {
  InterfaceInput in;
  in.Wl = in.Wr = W;
  in.dt = dt;
  return in;
}

// Random unit vector and orthonormal frames around it.
Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g;
  return normalized({g(rng), g(rng), g(rng)});
}

}  // namespace

TEST_CASE("collision times") {
  const auto a = collision_times(1.0, 1.0, 1.0, 0.0, 0.2, false);
  CHECK(a.tau == 0.0);
  CHECK(a.tau_n == doctest::Approx(0.01 * 0.2));
  const auto b = collision_times(10.33333, 1.0, 2.0, 0.0, 1.0, false);
  CHECK(b.tau_n == doctest::Approx(0.01 + 9.33333 / 11.33333).epsilon(1e-14));
  const auto c = collision_times(1.0, 1.0, 1.0, 0.1, 0.5, true);
  CHECK(c.tau == doctest::Approx(0.1));
  CHECK(c.tau_n == doctest::Approx(0.1));
  CHECK_THROWS_AS(collision_times(-1.0, 1.0, 1.0, 0.0, 1.0, false), InvalidState);
}

TEST_CASE("uniform state gives the Euler flux") {
  const State W = to_conserved({1.2, {0.4, -0.3, 0.2}, 0.9}, kGas);
  for (FluxMode mode : {FluxMode::Full, FluxMode::Smooth}) {
    auto in = uniform_input(W, 0.013);
    in.mode = mode;
    const auto r = evaluate(in, kGas);
    check_state((1.0 / in.dt) * r.F_full, euler_flux_x(W, kGas), 1e-12);
    check_state((2.0 / in.dt) * r.F_half, euler_flux_x(W, kGas), 1e-12);
    check_state(r.W_interface_end, W, 1e-12);
    check_state(r.W_point, W, 1e-12);
  }
}

TEST_CASE("free-transport limit equals kinetic flux-vector splitting") {
  const State Wl = to_conserved({1.0, {0, 0, 0}, 1.0}, kGas);
  const State Wr = to_conserved({0.125, {0, 0, 0}, 0.1}, kGas);
  InterfaceInput in;
  in.Wl = Wl;
  in.Wr = Wr;
  in.dt = 1e-3;
  in.times = CollisionTimes{0.0, 1e9 * in.dt};
  const auto r = flux_full(in, kGas);
  // Independent velocity-space quadrature of the split flux.
  const auto ml = kinetic::maxwellian_from_conserved(Wl, kGas);
  const auto mr = kinetic::maxwellian_from_conserved(Wr, kGas);
  const oracle::BruteForce bl(ml, kinetic::Half::Positive), br(mr, kinetic::Half::Negative);
  const auto u1 = [](const State&, double u, double, double) { return u; };
  const State kfvs = ml.rho * bl.integrate(u1) + mr.rho * br.integrate(u1);
  check_state((1.0 / in.dt) * r.F_full, kfvs, 1e-8);
  check_state(kfvs_flux(Wl, Wr, kGas), kfvs, 1e-10);
}

TEST_CASE("equilibrium merge") {
  const State W = to_conserved({0.8, {0.3, 0.1, -0.2}, 0.6}, kGas);
  const StateGradient g = {{{0.1, 0.2, 0.0, -0.1, 0.3}, {0.0, 0.1, 0.2, 0.0, 0.1}, {0.05, 0.0, 0.0, 0.1, 0.2}}};
  const auto same = equilibrium_merge(W, g, W, g, kGas);
  check_state(same.W, W, 1e-13);
  for (int d = 0; d < 3; ++d) check_state(same.grad[d], g[d], 1e-13);

  const State Wl = to_conserved({1.0, {0, 0, 0}, 1.0}, kGas);
  const State Wr = to_conserved({0.125, {0, 0, 0}, 0.1}, kGas);
  const auto sod = equilibrium_merge(Wl, {}, Wr, {}, kGas);
  const auto ml = kinetic::maxwellian_from_conserved(Wl, kGas);
  const auto mr = kinetic::maxwellian_from_conserved(Wr, kGas);
  const oracle::BruteForce bl(ml, kinetic::Half::Positive), br(mr, kinetic::Half::Negative);
  const auto one = [](const State&, double, double, double) { return 1.0; };
  check_state(sod.W, ml.rho * bl.integrate(one) + mr.rho * br.integrate(one), 1e-9);

  // Mirror: swap sides and negate normal momentum.
  const State Wa = to_conserved({1.1, {0.3, 0.2, 0}, 0.7}, kGas);
  const State Wb = to_conserved({0.4, {-0.1, 0.0, 0.3}, 0.2}, kGas);
  auto mirror = [](State w) {
    w[1] = -w[1];
    return w;
  };
  const auto ab = equilibrium_merge(Wa, {}, Wb, {}, kGas);
  const auto ba = equilibrium_merge(mirror(Wb), {}, mirror(Wa), {}, kGas);
  check_state(mirror(ba.W), ab.W, 1e-13);
}

TEST_CASE("mirrored interface negates the normal-odd flux components") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const State Wa = to_conserved({1.1, {0.3, 0.2, 0.1}, 0.7}, kGas);
  const State Wb = to_conserved({0.5, {-0.2, 0.0, 0.3}, 0.3}, kGas);
  StateGradient ga, gb;
  for (int d = 0; d < 3; ++d)
    for (int k = 0; k < 5; ++k) {
      ga[d][k] = u(rng);
      gb[d][k] = u(rng);
    }
  // Reflection x1 -> -x1: negate normal momentum, and the normal derivative
  // of every component except normal momentum.
  auto mirror = [](State w) {
    w[1] = -w[1];
    return w;
  };
  auto mirror_grad = [&](StateGradient g) {
    for (int d = 0; d < 3; ++d) g[d] = mirror(g[d]);
    g[0] = -1.0 * g[0];
    return g;
  };
  InterfaceInput a;
  a.Wl = Wa;
  a.gl = ga;
  a.Wr = Wb;
  a.gr = gb;
  a.dt = 0.05;
  InterfaceInput b = a;
  b.Wl = mirror(Wb);
  b.gl = mirror_grad(gb);
  b.Wr = mirror(Wa);
  b.gr = mirror_grad(ga);
  for (FluxMode mode : {FluxMode::Full, FluxMode::Smooth}) {
    a.mode = b.mode = mode;
    const auto ra = evaluate(a, kGas);
    const auto rb = evaluate(b, kGas);
    // Mass, tangential momentum and energy fluxes flip sign; normal momentum flux does not.
    const State want = {-ra.F_full[0], ra.F_full[1], -ra.F_full[2], -ra.F_full[3], -ra.F_full[4]};
    check_state(rb.F_full, want, 1e-12);
    check_state(mirror(rb.W_interface_end), ra.W_interface_end, 1e-12);
  }
}

TEST_CASE("smooth flux reproduces exact advection of a linear density profile") {
  // Uniform U and p with linear density: exact Euler solution W(x, t) = W0(x - U1 t).
  const Primitive q{1.0, {0.7, 0.2, -0.1}, 1.0};
  const double rx = 0.4;
  const State W0 = to_conserved(q, kGas);
  const State Wx = {rx, rx * q.U.x, rx * q.U.y, rx * q.U.z, 0.5 * rx * dot(q.U, q.U)};
  InterfaceInput in = uniform_input(W0, 0.1);
  in.gl[0] = in.gr[0] = Wx;
  in.mode = FluxMode::Smooth;
  const auto r = flux_smooth(in, kGas);
  // The Euler flux is affine in rho along this family.
  const State dF = {rx * q.U.x, rx * q.U.x * q.U.x, rx * q.U.x * q.U.y, rx * q.U.x * q.U.z,
                    0.5 * rx * dot(q.U, q.U) * q.U.x};
  const auto exact = [&](double T) { return T * euler_flux_x(W0, kGas) + (-0.5 * q.U.x * T * T) * dF; };
  check_state(r.F_full, exact(in.dt), 1e-12);
  check_state(r.F_half, exact(0.5 * in.dt), 1e-12);
  check_state(r.W_interface_end, W0 + (-q.U.x * in.dt) * Wx, 1e-12);
}

TEST_CASE("viscous shear stress from the Chapman-Enskog expansion") {
  const double mu = 0.02, s = 0.5;
  const Primitive q{1.0, {0.3, 0.2, 0.0}, 1.0};
  const State W = to_conserved(q, kGas);
  // Pure shear dU2/dx1 = s at constant density and pressure.
  const State Wx = {0, 0, q.rho * s, 0, q.rho * q.U.y * s};
  for (FluxMode mode : {FluxMode::Full, FluxMode::Smooth}) {
    InterfaceInput in = uniform_input(W, 1e-3);
    in.gl[0] = in.gr[0] = Wx;
    in.mu = mu;
    in.viscous = true;
    in.mode = mode;
    const auto r = evaluate(in, kGas);
    CHECK(r.times.tau == doctest::Approx(mu / q.p));
    const auto F = s2o4_flux_pair(r.F_half, r.F_full, in.dt).value;
    const State inviscid = euler_flux_x(W, kGas);
    CHECK(F[1] == doctest::Approx(inviscid[1]).epsilon(1e-12));
    CHECK(F[2] == doctest::Approx(inviscid[2] - mu * s).epsilon(1e-8));
    CHECK(F[4] == doctest::Approx(inviscid[4] - mu * s * q.U.y).epsilon(1e-8));
  }
}

TEST_CASE("two-point time fit") {
  const State f0 = {1, 2, 3, 4, 5}, c = {0.5, -1, 2, 0, 3};
  const double dt = 0.1;
  const auto fit = s2o4_flux_pair((0.5 * dt) * f0 + (0.125 * dt * dt) * c, dt * f0 + (0.5 * dt * dt) * c, dt);
  check_state(fit.value, f0, 1e-13);
  check_state(fit.derivative, c, 1e-12);

  // Quadratic flux f0 + c t + e t^2: value error is O(dt^2).
  const State e = {1, 1, 1, 1, 1};
  auto err = [&](double h) {
    const auto I = [&](double T) { return T * f0 + (0.5 * T * T) * c + (T * T * T / 3.0) * e; };
    return std::abs(s2o4_flux_pair(I(0.5 * h), I(h), h).value[0] - f0[0]);
  };
  CHECK(err(0.1) / err(0.05) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK_THROWS(s2o4_flux_pair(f0, f0, 0.0));
}

TEST_CASE("local frame rotations") {
  const auto id = LocalFrame::from_normal({1, 0, 0});
  const State W = {1, 2, 3, 4, 5};
  check_state(rotate_to_local(W, id), W, 0);

  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = LocalFrame::from_normal(random_unit(rng));
    f.check();
    const StateGradient g = {{{1, 2, 3, 4, 5}, {-1, 0.5, 2, 0, 1}, {0.3, 0.2, 0.1, -2, 4}}};
    const auto back = rotate_from_local(rotate_to_local(g, f), f);
    for (int d = 0; d < 3; ++d) check_state(back[d], g[d], 1e-13);
    check_state(rotate_from_local(rotate_to_local(W, f), f), W, 1e-13);
  }
  LocalFrame bad = id;
  bad.t1 = {0.5, 0.5, 0};
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

TEST_CASE("flux is frame covariant") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 n = random_unit(rng);
    const State W = to_conserved({1.0 + u(rng), {u(rng), u(rng), u(rng)}, 1.0 + u(rng)}, kGas);
    // Uniform state: rotated flux equals the analytic normal flux.
    const auto f = LocalFrame::from_normal(n);
    const auto r = flux_full(uniform_input(rotate_to_local(W, f), 0.01), kGas);
    check_state(rotate_from_local((1.0 / 0.01) * r.F_full, f), euler_flux(W, n), 1e-12);

    // Non-uniform data: two frames sharing the normal give the same global flux.
    StateGradient gl, gr;
    for (int d = 0; d < 3; ++d)
      for (int k = 0; k < 5; ++k) {
        gl[d][k] = u(rng);
        gr[d][k] = u(rng);
      }
    const State Wr = to_conserved({0.7, {0.1, -0.2, 0.05}, 0.6}, kGas);
    LocalFrame f2 = f;
    const double th = 0.7;
    f2.t1 = std::cos(th) * f.t1 + std::sin(th) * f.t2;
    f2.t2 = cross(n, f2.t1);
    auto run = [&](const LocalFrame& fr) {
      InterfaceInput in;
      in.Wl = rotate_to_local(W, fr);
      in.Wr = rotate_to_local(Wr, fr);
      in.gl = rotate_to_local(gl, fr);
      in.gr = rotate_to_local(gr, fr);
      in.dt = 0.02;
      return rotate_from_local(flux_full(in, kGas).F_full, fr);
    };
    check_state(run(f2), run(f), 1e-12);
  }
}
