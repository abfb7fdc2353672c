#include <chrono>
#include <cmath>
#include <filesystem>
#include <thread>

#include "cgks/harness.hpp"

namespace cgks::harness {

namespace {

constexpr int kTagXMin = 0, kTagXMax = 1;

// Tube of cubes, nx along x and cfg.cross across; slip walls on the sides.
Mesh tube_mesh(const CaseConfig& cfg, int nx, double length) {
  if (cfg.generator == "file") return read_mesh_ascii(cfg.mesh_file);
  if (cfg.generator != "hex") throw ConfigError(cfg.name + " requires mesh.generator = hex or file");
  if (nx < 4) throw ConfigError("mesh.nx must be at least 4");
  if (cfg.cross < 1) throw ConfigError("mesh.cross must be at least 1");
  const double h = length / nx;
  const int m = cfg.cross;
  return build_structured_hex({nx, m, m}, {{0, 0, 0}, {length, m * h, m * h}}, {false, false, false});
}

bc::BoundaryMap tube_boundaries(const State& left, const State& right) {
  bc::BoundaryMap m;
  m[kTagXMin] = {bc::Kind::FarField, left};
  m[kTagXMax] = {bc::Kind::FarField, right};
  for (int t = 2; t < 6; ++t) m[t] = {bc::Kind::SlipWall};
  return m;
}

// Piecewise data with the mean of both sides exactly on the interface, so the
// two cells sharing it see the same jump in their initial gradients.
ConservedField piecewise(double x0, std::function<State(double)> left, std::function<State(double)> right) {
  return [=](const Vec3& x) {
    const double d = x.x - x0;
    if (std::abs(d) < 1e-12) return 0.5 * (left(x.x) + right(x.x));
    return d < 0 ? left(x.x) : right(x.x);
  };
}

}  // namespace

CaseSetup make_case(const CaseConfig& cfg) {
  CaseSetup s;
  const GasModel gas = GasModel::from_gamma(cfg.gamma);
  if (!(cfg.gamma > 1.0)) throw ConfigError("gas.gamma must exceed 1");
  s.options.gas = gas;
  s.options.cfl = cfg.cfl;
  s.options.mu = cfg.mu;
  s.options.viscous = cfg.viscous;
  s.options.flux = cfg.flux;
  s.options.threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  if (cfg.name == "sinwave") {
    const Box box{{0, 0, 0}, {2, 2, 2}};
    if (cfg.generator == "hex") {
      s.mesh = build_structured_hex({cfg.n, cfg.n, cfg.n}, box, {true, true, true});
    } else if (cfg.generator == "hybrid") {
      s.mesh = build_hybrid_cube(cfg.n, box, {true, true, true});
    } else {
      s.mesh = read_mesh_ascii(cfg.mesh_file);
    }
    for (int t = 0; t < 6; ++t) s.boundaries[t] = {bc::Kind::Periodic};
    s.initial = [gas](const Vec3& x) { return sinwave_exact(x, 0.0, gas); };
    s.exact = [gas](const Vec3& x, double t) { return sinwave_exact(x, t, gas); };
    s.t_end = cfg.t_end.value_or(2.0);
    s.options.recon = cfg.recon.value_or(ReconMode::Linear);
    s.options.compression = cfg.cf.value_or(false);
  } else if (cfg.name == "shu_osher") {
    const int nx = cfg.nx > 0 ? cfg.nx : 400;
    s.mesh = tube_mesh(cfg, nx, 10.0);
    auto left = [gas](double) { return to_conserved({3.857134, {2.629369, 0, 0}, 10.33333}, gas); };
    auto right = [gas](double x) { return to_conserved({1.0 + 0.2 * std::sin(5.0 * x), {0, 0, 0}, 1.0}, gas); };
    s.boundaries = tube_boundaries(left(0.0), right(10.0));
    s.initial = piecewise(1.0, left, right);
    s.t_end = cfg.t_end.value_or(1.8);
    s.options.recon = cfg.recon.value_or(ReconMode::Weno);
    s.options.compression = cfg.cf.value_or(true);
  } else if (cfg.name == "sod") {
    const int nx = cfg.nx > 0 ? cfg.nx : 200;
    s.mesh = tube_mesh(cfg, nx, 1.0);
    const Riemann1D L{1.0, 0.0, 1.0}, R{0.125, 0.0, 0.1};
    auto left = [gas, L](double) { return to_conserved({L.rho, {L.u, 0, 0}, L.p}, gas); };
    auto right = [gas, R](double) { return to_conserved({R.rho, {R.u, 0, 0}, R.p}, gas); };
    s.boundaries = tube_boundaries(left(0.0), right(1.0));
    s.initial = piecewise(0.5, left, right);
    const ExactRiemann exact(L, R, cfg.gamma);
    s.exact = [gas, exact, left](const Vec3& x, double t) {
      if (t <= 0.0) return left(0.0);
      const Riemann1D q = exact.sample((x.x - 0.5) / t);
      return to_conserved({q.rho, {q.u, 0, 0}, q.p}, gas);
    };
    s.t_end = cfg.t_end.value_or(0.2);
    s.options.recon = cfg.recon.value_or(ReconMode::Weno);
    s.options.compression = cfg.cf.value_or(true);
  } else {
    throw ConfigError("unknown case '" + cfg.name + "'");
  }
  if (!(s.t_end > 0.0)) throw ConfigError("solver.t_end must be positive");
  return s;
}

RunResult run_setup(const CaseConfig& cfg, const CaseSetup& setup, const std::function<void(const Solver&)>& on_step) {
  const auto start = std::chrono::steady_clock::now();
  Solver solver(setup.mesh, setup.boundaries, setup.options);
  solver.set_initial(project(setup.mesh, setup.initial));
  if (!cfg.restart.empty()) solver.read_checkpoint(cfg.restart);

  const std::filesystem::path dir(cfg.output_dir);
  const bool writes = cfg.vtk || cfg.csv || cfg.checkpoint_every > 0;
  if (writes) std::filesystem::create_directories(dir);

  auto after_step = [&](const Solver& s) {
    if (cfg.checkpoint_every > 0 && s.steps() % cfg.checkpoint_every == 0) {
      s.write_checkpoint((dir / (cfg.name + ".checkpoint")).string());
    }
    if (on_step) on_step(s);
  };

  try {
    if (cfg.fixed_dt > 0.0) {
      while (solver.time() < setup.t_end * (1.0 - 1e-14)) {
        const double dt = std::min(cfg.fixed_dt, setup.t_end - solver.time());
        solver.step(dt);
        after_step(solver);
      }
    } else {
      solver.advance_to(setup.t_end, after_step);
    }
  } catch (const SolverAbort&) {
    std::filesystem::create_directories(dir);
    solver.write_checkpoint((dir / (cfg.name + ".abort.checkpoint")).string());
    throw;
  }

  RunResult r;
  r.cells = solver.cells();
  r.alpha = solver.compression();
  r.steps = solver.steps();
  r.time = solver.time();
  r.flux_fallbacks = solver.flux_fallbacks();
  if (setup.exact) {
    const double t = solver.time();
    const auto ex = project(setup.mesh, [&](const Vec3& x) { return setup.exact(x, t); });
    std::vector<double> rho(ex.size());
    for (size_t c = 0; c < ex.size(); ++c) rho[c] = ex[c].W[0];
    r.errors = density_errors(setup.mesh, r.cells, rho);
  }
  const GasModel& gas = setup.options.gas;
  if (cfg.vtk) write_vtk(setup.mesh, r.cells, r.alpha, gas, (dir / (cfg.name + ".vtk")).string());
  if (cfg.csv) write_csv_line(setup.mesh, r.cells, r.alpha, gas, 0, (dir / (cfg.name + "_line.csv")).string());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

RunResult run_case(const CaseConfig& cfg, const std::function<void(const Solver&)>& on_step) {
  const CaseSetup setup = make_case(cfg);
  return run_setup(cfg, setup, on_step);
}

}  // namespace cgks::harness
