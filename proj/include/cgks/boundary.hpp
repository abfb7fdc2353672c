#pragma once

#include <map>
#include <string>

#include "cgks/gks_flux.hpp"
#include "cgks/reconstruction.hpp"
#include "cgks/state.hpp"

namespace cgks::bc {

enum class Kind { Periodic, FarField, SlipWall, NoSlipWall, MaxwellWall };

Kind kind_from_name(const std::string& name);  // periodic, farfield, slip_wall, noslip_wall, maxwell_wall
const char* kind_name(Kind k);

struct BoundarySpec {
  Kind kind = Kind::SlipWall;
  State W_inf{};        // far field
  double T_wall = 1.0;  // Maxwell wall temperature, in units where lambda = 1 / (2 T)
};

/// Boundary tag -> condition.
using BoundaryMap = std::map<int, BoundarySpec>;

/// Reflection of a state across a wall with unit normal n: the slip wall
/// reverses the normal momentum, the no-slip wall the whole momentum.
State mirror_state(const State& W, const Vec3& n, Kind kind);
/// Gradient of the mirrored field at the mirrored point.
StateGradient mirror_gradient(const StateGradient& g, const Vec3& n, Kind kind);

struct GhostCell {
  State W{};
  StateGradient grad{};
};

/// Ghost cell average and gradient for a boundary face with outward normal n.
/// Far-field and Maxwell-wall ghosts carry zero slopes.
GhostCell fill_ghost(const BoundarySpec& spec, const State& W, const StateGradient& g, const Vec3& n);

/// Ghost geometry mirrored across the plane through x0 with unit normal n.
recon::StencilGeometry ghost_geometry(const CellGeometry& g, const Vec3& x0, const Vec3& n);

/// Characteristic far-field trace from the inner trace and the free stream;
/// n points out of the domain.
State farfield_trace(const State& inner, const State& W_inf, const Vec3& n, const GasModel& gas);

struct WallFlux {
  State F_half{};
  State F_full{};
  State W_half{};
  State W_full{};
  double rho_wall = 0.0;  // ghost density solved for zero mass flux over [0, dt]
};

/// Isothermal Maxwell wall in the face-local frame (x1 from the interior into
/// the wall). Reflected particles follow a wall Maxwellian at rest whose
/// density is set for zero time-integrated mass flux.
WallFlux maxwell_wall_flux(const State& W_inner, const StateGradient& g_inner, double T_wall, double dt, double tau,
                           const GasModel& gas);

}  // namespace cgks::bc
