#pragma once

#include <array>

#include "cgks/state.hpp"

namespace cgks::kinetic {

/// Parameters of the equilibrium distribution
///   g = rho (lambda / pi)^((K + 3) / 2) exp(-lambda ((u - U)^2 + xi^2)).
/// The gas constant is absorbed: lambda = rho / (2 p).
struct MaxwellianState {
  double rho = 1.0;
  Vec3 U;
  double lambda = 0.5;
};

/// Throws InvalidState for non-positive density or internal energy, or for
/// lambda outside (1e-12, 1e12).
MaxwellianState maxwellian_from_conserved(const State& W, const GasModel& gas);
State conserved_from_maxwellian(const MaxwellianState& m, const GasModel& gas);

enum class Half { Full, Positive, Negative };

/// Normalized velocity moments <u^n> of a Maxwellian (density factored out).
/// The normal direction u1 also carries the two half-space tables.
struct MomentTable {
  static constexpr int kNormal = 8;
  static constexpr int kTangential = 7;

  std::array<double, kNormal> u1{};
  std::array<double, kNormal> u1_pos{};
  std::array<double, kNormal> u1_neg{};
  std::array<double, kTangential> u2{};
  std::array<double, kTangential> u3{};
  double xi2 = 0.0;
  double xi4 = 0.0;

  const double* normal(Half h) const {
    return h == Half::Full ? u1.data() : (h == Half::Positive ? u1_pos.data() : u1_neg.data());
  }
};

MomentTable moment_table(const MaxwellianState& m, const GasModel& gas);

/// Coefficients of a = a1 + a2 u1 + a3 u2 + a4 u3 + a5 (u^2 + xi^2) / 2.
using MicroSlope = std::array<double, 5>;
using MicroGradient = std::array<MicroSlope, 3>;

/// Solves rho <a psi> = gradW for one spatial direction.
MicroSlope micro_slope(const MaxwellianState& m, const State& gradW, const GasModel& gas);

/// Solves <A psi> = -<(a_x1 u1 + a_x2 u2 + a_x3 u3) psi>.
MicroSlope temporal_slope(const MaxwellianState& m, const MomentTable& t, const MicroGradient& a,
                          const GasModel& gas);

/// <psi u1^i u2^j u3^k> over the selected half space of u1.
State moment_psi(const MomentTable& t, Half h, int i, int j, int k);

/// <psi (a . psi) u1^i u2^j u3^k>.
State moment_psi_a(const MomentTable& t, Half h, int i, int j, int k, const MicroSlope& a);

/// <psi (a_x1 u1 + a_x2 u2 + a_x3 u3) u1^i>.
State moment_psi_transport(const MomentTable& t, Half h, int i, const MicroGradient& a);

}  // namespace cgks::kinetic
