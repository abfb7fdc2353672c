#include "cgks/kinetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cgks::kinetic {

MaxwellianState maxwellian_from_conserved(const State& W, const GasModel& gas) {
  if (!(W[0] > 0.0)) throw InvalidState("non-positive density " + std::to_string(W[0]));
  MaxwellianState m;
  m.rho = W[0];
  m.U = {W[1] / W[0], W[2] / W[0], W[3] / W[0]};
  const double internal = W[4] - 0.5 * W[0] * dot(m.U, m.U);
  if (!(internal > 0.0)) throw InvalidState("non-positive internal energy " + std::to_string(internal));
  m.lambda = (gas.K + 3.0) * W[0] / (4.0 * internal);
  if (!(m.lambda > 1e-12 && m.lambda < 1e12)) throw InvalidState("lambda out of range " + std::to_string(m.lambda));
  return m;
}

State conserved_from_maxwellian(const MaxwellianState& m, const GasModel& gas) {
  const double internal = (gas.K + 3.0) * m.rho / (4.0 * m.lambda);
  return {m.rho, m.rho * m.U.x, m.rho * m.U.y, m.rho * m.U.z, internal + 0.5 * m.rho * dot(m.U, m.U)};
}

namespace {

template <size_t N>
void recurse(std::array<double, N>& t, double U, double lambda) {
  for (size_t n = 0; n + 2 < N; ++n) {
    t[n + 2] = U * t[n + 1] + static_cast<double>(n + 1) / (2.0 * lambda) * t[n];
  }
}

// Product moments <u1^i u2^j u3^k E^e>, E = (u^2 + xi^2) / 2, over one u1 range.
struct Moments {
  const double* a;
  const double* b;
  const double* c;
  double xi2, xi4;

  double m(int i, int j, int k) const { return a[i] * b[j] * c[k]; }

  double mE(int i, int j, int k) const {
    return 0.5 * (a[i + 2] * b[j] * c[k] + a[i] * b[j + 2] * c[k] + a[i] * b[j] * c[k + 2] + a[i] * b[j] * c[k] * xi2);
  }

  // <(a . psi) u1^i u2^j u3^k>, using the separable form
  //   alpha_i b_j c_k + a_i beta_j c_k + a_i b_j gamma_k.
  State psi_a(int i, int j, int k, const MicroSlope& s) const {
    const double h = 0.5 * s[4];
    const double s0 = s[0] + h * xi2;
    double al[3], be[3], ga[3];
    for (int n = 0; n < 3; ++n) {
      al[n] = s0 * a[i + n] + s[1] * a[i + n + 1] + h * a[i + n + 2];
      be[n] = s[2] * b[j + n + 1] + h * b[j + n + 2];
      ga[n] = s[3] * c[k + n + 1] + h * c[k + n + 2];
    }
    const double* A = a + i;
    const double* B = b + j;
    const double* C = c + k;
    auto ma = [&](int p, int q, int r) { return al[p] * B[q] * C[r] + A[p] * (be[q] * C[r] + B[q] * ga[r]); };
    const double m0 = ma(0, 0, 0);
    const double mE = 0.5 * (ma(2, 0, 0) + ma(0, 2, 0) + ma(0, 0, 2) + xi2 * m0) +
                      0.25 * s[4] * (xi4 - xi2 * xi2) * A[0] * B[0] * C[0];
    return {m0, ma(1, 0, 0), ma(0, 1, 0), ma(0, 0, 1), mE};
  }
};

Moments view(const MomentTable& t, Half h) { return {t.normal(h), t.u2.data(), t.u3.data(), t.xi2, t.xi4}; }

MicroSlope solve_normalized(const MaxwellianState& m, const State& b, const GasModel& gas) {
  const double U1 = m.U.x, U2 = m.U.y, U3 = m.U.z, lam = m.lambda;
  const double q = U1 * U1 + U2 * U2 + U3 * U3 + (gas.K + 3.0) / (2.0 * lam);
  const double R4 = 2.0 * b[4] - q * b[0];
  const double R3 = b[3] - U3 * b[0];
  const double R2 = b[2] - U2 * b[0];
  const double R1 = b[1] - U1 * b[0];
  MicroSlope a;
  a[4] = 4.0 * lam * lam / (gas.K + 3.0) * (R4 - 2.0 * U1 * R1 - 2.0 * U2 * R2 - 2.0 * U3 * R3);
  a[3] = 2.0 * lam * R3 - U3 * a[4];
  a[2] = 2.0 * lam * R2 - U2 * a[4];
  a[1] = 2.0 * lam * R1 - U1 * a[4];
  a[0] = b[0] - U1 * a[1] - U2 * a[2] - U3 * a[3] - 0.5 * a[4] * q;
  return a;
}

}  // namespace

MomentTable moment_table(const MaxwellianState& m, const GasModel& gas) {
  MomentTable t;
  const double lam = m.lambda;
  const double U = m.U.x;
  t.u1[0] = 1.0;
  t.u1[1] = U;
  recurse(t.u1, U, lam);

  const double sl = std::sqrt(lam);
  const double tail = 0.5 * std::exp(-lam * U * U) / std::sqrt(std::numbers::pi * lam);
  t.u1_pos[0] = 0.5 * std::erfc(-sl * U);
  t.u1_pos[1] = U * t.u1_pos[0] + tail;
  recurse(t.u1_pos, U, lam);
  t.u1_neg[0] = 0.5 * std::erfc(sl * U);
  t.u1_neg[1] = U * t.u1_neg[0] - tail;
  recurse(t.u1_neg, U, lam);

  t.u2[0] = 1.0;
  t.u2[1] = m.U.y;
  recurse(t.u2, m.U.y, lam);
  t.u3[0] = 1.0;
  t.u3[1] = m.U.z;
  recurse(t.u3, m.U.z, lam);

  t.xi2 = gas.K / (2.0 * lam);
  t.xi4 = gas.K * (gas.K + 2.0) / (4.0 * lam * lam);
  return t;
}

MicroSlope micro_slope(const MaxwellianState& m, const State& gradW, const GasModel& gas) {
  return solve_normalized(m, (1.0 / m.rho) * gradW, gas);
}

MicroSlope temporal_slope(const MaxwellianState& m, const MomentTable& t, const MicroGradient& a,
                          const GasModel& gas) {
  const State b = moment_psi_transport(t, Half::Full, 0, a);
  return solve_normalized(m, -1.0 * b, gas);
}

State moment_psi(const MomentTable& t, Half h, int i, int j, int k) {
  const Moments v = view(t, h);
  return {v.m(i, j, k), v.m(i + 1, j, k), v.m(i, j + 1, k), v.m(i, j, k + 1), v.mE(i, j, k)};
}

State moment_psi_a(const MomentTable& t, Half h, int i, int j, int k, const MicroSlope& a) {
  return view(t, h).psi_a(i, j, k, a);
}

State moment_psi_transport(const MomentTable& t, Half h, int i, const MicroGradient& a) {
  const Moments v = view(t, h);
  State r = v.psi_a(i + 1, 0, 0, a[0]);
  r += v.psi_a(i, 1, 0, a[1]);
  r += v.psi_a(i, 0, 1, a[2]);
  return r;
}

}  // namespace cgks::kinetic
