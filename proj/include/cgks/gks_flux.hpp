#pragma once

#include <optional>

#include "cgks/kinetic.hpp"
#include "cgks/state.hpp"

namespace cgks::flux {

enum class FluxMode { Full, Smooth };

struct CollisionTimes {
  double tau = 0.0;    // physical, mu / p
  double tau_n = 0.0;  // numerical, used in the exponential relaxation
};

/// tau = mu / pc; tau_n = 0.01 dt + |pl - pr| / (pl + pr) dt (inviscid) or
/// mu / pc + |pl - pr| / (pl + pr) dt (viscous).
CollisionTimes collision_times(double pl, double pr, double pc, double mu, double dt, bool viscous);

/// Face-local data: component 1 of velocities and gradient index 0 are along
/// the face normal, pointing from left to right.
struct InterfaceInput {
  State Wl{}, Wr{};
  StateGradient gl{}, gr{};
  double dt = 0.0;
  double mu = 0.0;
  bool viscous = false;
  FluxMode mode = FluxMode::Full;
  std::optional<CollisionTimes> times;  // overrides collision_times when set
};

struct FluxResult {
  State F_half{};  // flux integrated over [0, dt/2]
  State F_full{};  // flux integrated over [0, dt]
  State W_half{};  // interface state integrated over [0, dt/2]
  State W_full{};  // interface state integrated over [0, dt]
  State W_point{};          // interface state at t = 0 from the linear-in-time fit
  State dW_dt{};            // its time derivative
  State W_interface_end{};  // W_point + dt dW_dt
  CollisionTimes times;
};

struct EquilibriumState {
  State W{};
  StateGradient grad{};
};

/// Kinetic weighting: W^c = int_{u1>0} psi g^l + int_{u1<0} psi g^r; each
/// gradient component is merged with the same half-space weights.
EquilibriumState equilibrium_merge(const State& Wl, const StateGradient& gl, const State& Wr, const StateGradient& gr,
                                   const GasModel& gas);

FluxResult flux_full(const InterfaceInput& in, const GasModel& gas);
FluxResult flux_smooth(const InterfaceInput& in, const GasModel& gas);
inline FluxResult evaluate(const InterfaceInput& in, const GasModel& gas) {
  return in.mode == FluxMode::Full ? flux_full(in, gas) : flux_smooth(in, gas);
}

/// Collisionless kinetic flux-vector splitting: int_{u1>0} u1 psi g^l + int_{u1<0} u1 psi g^r.
State kfvs_flux(const State& Wl, const State& Wr, const GasModel& gas);

/// Linear-in-time fit of a quantity from its integrals over [0, dt/2] and [0, dt].
struct TimeFit {
  State value{};
  State derivative{};
};
TimeFit s2o4_flux_pair(const State& I_half, const State& I_full, double dt);

/// Orthonormal frame (n, t1, t2).
struct LocalFrame {
  Vec3 n, t1, t2;

  /// Builds tangents from a unit normal.
  static LocalFrame from_normal(const Vec3& n);
  /// Throws std::invalid_argument if the axes are not orthonormal to 1e-10.
  void check() const;
  const Vec3& axis(int d) const { return d == 0 ? n : (d == 1 ? t1 : t2); }
};

State rotate_to_local(const State& W, const LocalFrame& f);
StateGradient rotate_to_local(const StateGradient& g, const LocalFrame& f);
State rotate_from_local(const State& W, const LocalFrame& f);
StateGradient rotate_from_local(const StateGradient& g, const LocalFrame& f);

}  // namespace cgks::flux
