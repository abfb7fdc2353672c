#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgks/boundary.hpp"
#include "cgks/mesh.hpp"
#include "cgks/solver.hpp"

namespace cgks::harness {

/// Conserved variables as a function of position.
using ConservedField = std::function<State(const Vec3&)>;

/// Cell averages by tensor volume quadrature (`order` points per direction) and
/// cell-averaged gradients by the divergence theorem on high-order face rules.
std::vector<CellSolution> project(const Mesh& mesh, const ConservedField& f, int order = 5);

struct ErrorNorms {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

/// Volume-weighted density error norms against exact cell averages.
ErrorNorms density_errors(const Mesh& mesh, std::span<const CellSolution> cells, std::span<const double> exact);

struct ErrorReport {
  std::string label;  // mesh label, e.g. "20^3"
  ErrorNorms errors;
};

/// log2 of successive error ratios (uniform refinement by 2); NaN for the first row.
std::vector<std::array<double, 3>> convergence_orders(std::span<const ErrorReport> reports);
void write_convergence_table(std::span<const ErrorReport> reports, std::ostream& out);
void write_convergence_table(std::span<const ErrorReport> reports, const std::string& path);

/// Translating sine wave rho = 1 + 0.2 sin(pi (x + y + z - 3 t)), U = (1, 1, 1), p = 1.
State sinwave_exact(const Vec3& x, double t, const GasModel& gas);

struct CaseConfig {
  std::string name = "sinwave";  // sinwave | shu_osher | sod
  // mesh
  std::string generator = "hex";  // hex | hybrid | file
  int n = 10;                     // sine wave: cells per axis
  int nx = 0;                     // tube cases: cells along x (0: case default)
  int cross = 1;                  // tube cases: cells across the square section
  std::string mesh_file;
  // gas
  double gamma = 1.4;
  double mu = 0.0;
  bool viscous = false;
  // solver
  double cfl = 0.5;
  std::optional<ReconMode> recon;  // case default when unset
  flux::FluxMode flux = flux::FluxMode::Full;
  std::optional<bool> cf;
  int threads = 0;               // 0: hardware concurrency
  std::optional<double> t_end;   // case default when unset
  double fixed_dt = 0.0;         // > 0: constant step instead of the CFL step
  // output
  std::string output_dir = ".";
  bool vtk = false;
  bool csv = false;
  int checkpoint_every = 0;
  std::string restart;
};

/// Sets `section.key` from its string value; throws ConfigError on unknown keys
/// or malformed values.
void set_option(CaseConfig& cfg, const std::string& key, const std::string& value);
/// Sectioned `key = value` file.
CaseConfig parse_config(std::istream& in);
CaseConfig load_config(const std::string& path);

struct CaseSetup {
  Mesh mesh;
  bc::BoundaryMap boundaries;
  ConservedField initial;
  SolverOptions options;
  double t_end = 0.0;
  /// Exact solution at time t, where one exists.
  std::function<State(const Vec3&, double)> exact;
};

CaseSetup make_case(const CaseConfig& cfg);

struct RunResult {
  std::vector<CellSolution> cells;
  std::vector<recon::CellCompression> alpha;
  std::optional<ErrorNorms> errors;
  long steps = 0;
  double time = 0.0;
  double seconds = 0.0;
  long flux_fallbacks = 0;
};

/// Runs a configured case to its end time. Solver aborts propagate as
/// SolverAbort after a diagnostic checkpoint is written to the output directory.
RunResult run_case(const CaseConfig& cfg, const std::function<void(const Solver&)>& on_step = {});
/// Same with a prepared setup (mesh reuse across runs).
RunResult run_setup(const CaseConfig& cfg, const CaseSetup& setup,
                    const std::function<void(const Solver&)>& on_step = {});

/// Exact solution of the 1-D Riemann problem for an ideal gas.
struct Riemann1D {
  double rho, u, p;
};

class ExactRiemann {
 public:
  ExactRiemann(Riemann1D left, Riemann1D right, double gamma);
  /// Solution at similarity coordinate xi = (x - x0) / t.
  Riemann1D sample(double xi) const;
  double p_star() const { return p_star_; }
  double u_star() const { return u_star_; }

 private:
  Riemann1D l_, r_;
  double g_, cl_, cr_;
  double p_star_ = 0.0, u_star_ = 0.0;
};

struct ProfilePoint {
  double x, rho, u, p, alpha;
};

/// Cross-section averaged profile along an axis, ordered by the coordinate.
std::vector<ProfilePoint> line_profile(const Mesh& mesh, std::span<const CellSolution> cells,
                                       std::span<const recon::CellCompression> alpha, const GasModel& gas, int axis);

void write_vtk(const Mesh& mesh, std::span<const CellSolution> cells, std::span<const recon::CellCompression> alpha,
               const GasModel& gas, const std::string& path);
void write_csv_line(const Mesh& mesh, std::span<const CellSolution> cells,
                    std::span<const recon::CellCompression> alpha, const GasModel& gas, int axis,
                    const std::string& path);

}  // namespace cgks::harness
