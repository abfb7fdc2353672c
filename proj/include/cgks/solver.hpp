#pragma once

#include <atomic>
#include <functional>
#include <string>
#include <vector>

#include "cgks/boundary.hpp"
#include "cgks/gks_flux.hpp"
#include "cgks/mesh.hpp"
#include "cgks/reconstruction.hpp"
#include "cgks/state.hpp"

namespace cgks {

enum class ReconMode { Linear, Weno };

struct SolverOptions {
  GasModel gas;
  double cfl = 0.5;
  double mu = 0.0;
  bool viscous = false;
  ReconMode recon = ReconMode::Linear;
  flux::FluxMode flux = flux::FluxMode::Full;
  bool compression = false;
  recon::CompressionParams cf;
  int threads = 1;
};

/// Cell average and cell-averaged gradient, global frame.
struct CellSolution {
  State W{};
  StateGradient grad{};
};

/// Cell-averaged residual and its time derivative.
struct Residual {
  std::vector<State> L;
  std::vector<State> Lt;
};

struct AbortInfo {
  int cell = -1;
  int stage = 0;
  double time = 0.0;
  State W{};
};

/// Two-stage fourth-order update: intermediate state at t + dt/2.
inline State s2o4_midpoint(const State& W, const State& L0, const State& Lt0, double dt) {
  return W + (0.5 * dt) * L0 + (0.125 * dt * dt) * Lt0;
}

/// Two-stage fourth-order update: state at t + dt, Lt1 taken at the midpoint state.
inline State s2o4_final(const State& W, const State& L0, const State& Lt0, const State& Lt1, double dt) {
  return W + dt * L0 + (dt * dt / 6.0) * (Lt0 + 2.0 * Lt1);
}

/// Compact GKS finite-volume solver with two-stage fourth-order time marching.
class Solver {
 public:
  Solver(const Mesh& mesh, bc::BoundaryMap boundaries, SolverOptions options);

  const Mesh& mesh() const { return mesh_; }
  const SolverOptions& options() const { return opt_; }

  void set_initial(std::vector<CellSolution> cells, double time = 0.0);
  const std::vector<CellSolution>& cells() const { return cells_; }
  double time() const { return time_; }
  long steps() const { return steps_; }

  double compute_time_step() const;

  /// One S2O4 step. Throws SolverAbort when a stage yields a non-admissible
  /// cell average; the field is left at the start of the step.
  void step(double dt);
  /// Steps until `t_end`, shortening the last step to land on it.
  void advance_to(double t_end, const std::function<void(const Solver&)>& on_step = {});

  /// Residual of the current field with interface data integrated over dt.
  Residual residual(double dt);

  /// Compression factor of each cell from the last completed step (1 before any step).
  const std::vector<recon::CellCompression>& compression() const { return alpha_; }
  /// Face points that fell back to first-order data since construction.
  long flux_fallbacks() const { return fallbacks_; }
  /// Cells reconstructed with P0 because of a non-admissible trace in the last stage.
  long positivity_fallbacks() const { return positivity_fallbacks_; }
  const AbortInfo& last_abort() const { return abort_; }

  /// Gradient of each cell from point values supplied by `value(x)` at the
  /// face quadrature points (divergence theorem).
  template <class Fn>
  std::vector<StateGradient> divergence_gradients(Fn value) const;

  void write_checkpoint(const std::string& path) const;
  void read_checkpoint(const std::string& path);

 private:
  struct Ghost {
    int face;
    bc::BoundarySpec spec;
    Vec3 x0, n;  // mirror plane
    recon::StencilGeometry geo;
  };
  struct StencilEntry {
    int cell;   // >= 0: real cell
    int ghost;  // >= 0: ghost index
  };
  struct CellData {
    recon::Basis basis;
    bool degenerate = false;
    recon::LeastSquaresOperator ls;
    std::vector<StencilEntry> stencil;
    std::vector<std::pair<int, double>> faces;  // (flux face, sign)
  };
  // One per face that carries a flux: interior, wall/far field, and the first
  // face of each periodic pair.
  struct FluxFace {
    int face;
    int left;
    int right = -1;  // cell, or -1 on a non-periodic boundary
    int ghost = -1;
    Vec3 shift;      // right-cell coordinates + shift = left frame
  };
  // Per flux face, quadrature-weighted sums over its points (left orientation).
  struct FaceSums {
    State F{}, Ft{};
    StateGradient W0{}, Wt{};  // sum of w W n
    double log_excess = 0.0;   // sum of log(1 + x) over the points
  };

  void reconstruct(const std::vector<CellSolution>& cells, std::vector<recon::QuadraticPoly>& polys);
  void face_fluxes(const std::vector<CellSolution>& cells, const std::vector<recon::QuadraticPoly>& polys,
                   double dt, std::vector<FaceSums>& sums);
  FaceSums face_flux(const FluxFace& ff, const std::vector<CellSolution>& cells,
                     const std::vector<recon::QuadraticPoly>& polys, double dt);
  void assemble(const std::vector<FaceSums>& sums, std::vector<State>& L, std::vector<State>& Lt) const;
  // Divergence-theorem gradient of the point values W0(base) + at * Wt(slope).
  StateGradient gradient_from(const std::vector<FaceSums>& base, const std::vector<FaceSums>& slope, int cell,
                              double at) const;
  void check_admissible(const std::vector<CellSolution>& cells, int stage) const;
  void parallel_for(size_t n, const std::function<void(size_t, size_t)>& body) const;

  const Mesh& mesh_;
  bc::BoundaryMap bcs_;
  SolverOptions opt_;
  std::vector<Ghost> ghosts_;
  std::vector<CellData> data_;
  std::vector<FluxFace> flux_faces_;
  std::vector<CellSolution> cells_;
  std::vector<recon::CellCompression> alpha_;
  double time_ = 0.0;
  long steps_ = 0;
  long fallbacks_ = 0;
  long positivity_fallbacks_ = 0;
  std::atomic<long> fallback_count_{0};
  mutable AbortInfo abort_;
};

template <class Fn>
std::vector<StateGradient> Solver::divergence_gradients(Fn value) const {
  const auto geo = mesh_.geometry();
  std::vector<StateGradient> out(mesh_.cell_count());
  for (size_t c = 0; c < mesh_.cell_count(); ++c) {
    const Cell& cell = mesh_.cells()[c];
    StateGradient g{};
    for (int lf = 0; lf < cell.nf(); ++lf) {
      const Face& f = mesh_.faces()[cell.faces[lf]];
      const double s = (f.owner == static_cast<int>(c)) ? 1.0 : -1.0;
      for (const auto& p : f.quad.view()) {
        const State w = value(p.x);
        for (int d = 0; d < 3; ++d) g[d] += (s * p.weight * p.normal[d]) * w;
      }
    }
    for (int d = 0; d < 3; ++d) out[c][d] = (1.0 / geo[c].volume) * g[d];
  }
  return out;
}

}  // namespace cgks
