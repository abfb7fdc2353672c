#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "cgks/vec3.hpp"

namespace cgks {

/// Conservative variables (rho, rho*U1, rho*U2, rho*U3, rho*E).
using State = std::array<double, 5>;

/// Spatial gradient of a State; entry d is d/dx_d.
using StateGradient = std::array<State, 3>;

inline State operator+(const State& a, const State& b) {
  State r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] + b[i];
  return r;
}
inline State operator-(const State& a, const State& b) {
  State r;
  for (int i = 0; i < 5; ++i) r[i] = a[i] - b[i];
  return r;
}
inline State operator*(double s, const State& a) {
  State r;
  for (int i = 0; i < 5; ++i) r[i] = s * a[i];
  return r;
}
inline State& operator+=(State& a, const State& b) {
  for (int i = 0; i < 5; ++i) a[i] += b[i];
  return a;
}

struct GasModel {
  double gamma = 1.4;
  double K = 2.0;  // internal degrees of freedom, (5 - 3 gamma) / (gamma - 1)

  static GasModel from_gamma(double gamma) { return {gamma, (5.0 - 3.0 * gamma) / (gamma - 1.0)}; }
};

struct Primitive {
  double rho;
  Vec3 U;
  double p;
};

inline double pressure(const State& W, const GasModel& gas) {
  const double ke = 0.5 * (W[1] * W[1] + W[2] * W[2] + W[3] * W[3]) / W[0];
  return (gas.gamma - 1.0) * (W[4] - ke);
}

inline Primitive to_primitive(const State& W, const GasModel& gas) {
  return {W[0], {W[1] / W[0], W[2] / W[0], W[3] / W[0]}, pressure(W, gas)};
}

inline State to_conserved(const Primitive& q, const GasModel& gas) {
  const double ke = 0.5 * q.rho * dot(q.U, q.U);
  return {q.rho, q.rho * q.U.x, q.rho * q.U.y, q.rho * q.U.z, q.p / (gas.gamma - 1.0) + ke};
}

inline bool is_admissible(const State& W, const GasModel& gas) {
  return W[0] > 0.0 && pressure(W, gas) > 0.0;
}

/// Analytic Euler flux of W in direction e1.
inline State euler_flux_x(const State& W, const GasModel& gas) {
  const double p = pressure(W, gas);
  const double u = W[1] / W[0];
  return {W[1], W[1] * u + p, W[2] * u, W[3] * u, (W[4] + p) * u};
}

// Error types shared by all modules. The C API maps them to error codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidState : Error {
  using Error::Error;
};
struct MeshError : Error {
  using Error::Error;
};
struct DegenerateStencil : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct SolverAbort : Error {
  using Error::Error;
};

}  // namespace cgks
