#include "cgks/solver.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

namespace cgks {

using recon::QuadraticPoly;

namespace {

Vec3 face_center(const FaceQuadrature& q) {
  Vec3 c;
  double a = 0.0;
  for (const auto& p : q.view()) {
    c += p.weight * p.x;
    a += p.weight;
  }
  return (1.0 / a) * c;
}

Vec3 face_normal(const FaceQuadrature& q) {
  Vec3 n;
  for (const auto& p : q.view()) n += p.weight * p.normal;
  return normalized(n);
}

std::string describe(const State& W) {
  std::ostringstream s;
  s << std::setprecision(10) << "(" << W[0] << ", " << W[1] << ", " << W[2] << ", " << W[3] << ", " << W[4] << ")";
  return s.str();
}

}  // namespace

Solver::Solver(const Mesh& mesh, bc::BoundaryMap boundaries, SolverOptions options)
    : mesh_(mesh), bcs_(std::move(boundaries)), opt_(options) {
  if (!(opt_.cfl > 0.0)) throw ConfigError("CFL number must be positive");
  if (opt_.mu < 0.0) throw ConfigError("viscosity must be non-negative");
  const auto faces = mesh_.faces();
  const auto geo = mesh_.geometry();

  std::vector<int> ghost_of(faces.size(), -1), flux_of(faces.size(), -1);
  for (size_t i = 0; i < faces.size(); ++i) {
    const Face& f = faces[i];
    if (!f.is_boundary() || f.is_periodic()) continue;
    const auto it = bcs_.find(f.tag);
    if (it == bcs_.end()) throw ConfigError("no boundary condition for tag " + std::to_string(f.tag));
    if (it->second.kind == bc::Kind::Periodic) {
      throw ConfigError("tag " + std::to_string(f.tag) + " is declared periodic but has no partner faces");
    }
    Ghost g;
    g.face = static_cast<int>(i);
    g.spec = it->second;
    g.x0 = face_center(f.quad);
    g.n = face_normal(f.quad);
    g.geo = bc::ghost_geometry(geo[f.owner], g.x0, g.n);
    ghost_of[i] = static_cast<int>(ghosts_.size());
    ghosts_.push_back(g);
  }

  for (size_t i = 0; i < faces.size(); ++i) {
    const Face& f = faces[i];
    if (f.is_periodic() && f.partner < static_cast<int>(i)) continue;
    FluxFace ff;
    ff.face = static_cast<int>(i);
    ff.left = f.owner;
    if (f.neighbor >= 0) {
      ff.right = f.neighbor;
      ff.shift = f.shift;
    } else {
      ff.ghost = ghost_of[i];
    }
    flux_of[i] = static_cast<int>(flux_faces_.size());
    flux_faces_.push_back(ff);
  }

  data_.resize(mesh_.cell_count());
  for (size_t c = 0; c < mesh_.cell_count(); ++c) {
    CellData& d = data_[c];
    d.basis = recon::Basis::of(geo[c]);
    const Cell& cell = mesh_.cells()[c];
    std::vector<recon::StencilGeometry> sg;
    for (int lf = 0; lf < cell.nf(); ++lf) {
      const int fid = cell.faces[lf];
      const Face& f = faces[fid];
      if (f.is_periodic()) {
        d.stencil.push_back({f.neighbor, -1});
        sg.push_back({geo[f.neighbor].centroid + f.shift, geo[f.neighbor].second_moments});
        if (flux_of[fid] >= 0) {
          d.faces.push_back({flux_of[fid], 1.0});
        } else {
          d.faces.push_back({flux_of[f.partner], -1.0});
        }
      } else if (f.neighbor >= 0) {
        const int other = (f.owner == static_cast<int>(c)) ? f.neighbor : f.owner;
        d.stencil.push_back({other, -1});
        sg.push_back({geo[other].centroid, geo[other].second_moments});
        d.faces.push_back({flux_of[fid], f.owner == static_cast<int>(c) ? 1.0 : -1.0});
      } else {
        d.stencil.push_back({-1, ghost_of[fid]});
        sg.push_back(ghosts_[ghost_of[fid]].geo);
        d.faces.push_back({flux_of[fid], 1.0});
      }
    }
    try {
      d.ls = recon::LeastSquaresOperator::build(d.basis, sg);
    } catch (const DegenerateStencil&) {
      d.degenerate = true;
    }
  }
  alpha_.assign(mesh_.cell_count(), {});
}

void Solver::set_initial(std::vector<CellSolution> cells, double time) {
  if (cells.size() != mesh_.cell_count()) throw std::invalid_argument("initial field size does not match the mesh");
  cells_ = std::move(cells);
  time_ = time;
  steps_ = 0;
  alpha_.assign(mesh_.cell_count(), {});
  check_admissible(cells_, 0);
}

double Solver::compute_time_step() const {
  const auto geo = mesh_.geometry();
  double dt = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < cells_.size(); ++c) {
    const Primitive q = to_primitive(cells_[c].W, opt_.gas);
    if (!(q.rho > 0.0 && q.p > 0.0)) throw InvalidState("non-positive state in cell " + std::to_string(c));
    const double a = std::sqrt(opt_.gas.gamma * q.p / q.rho);
    const double dr = geo[c].dr;
    double local = dr / (norm(q.U) + a);
    if (opt_.viscous && opt_.mu > 0.0) local = std::min(local, dr * dr / (3.0 * opt_.mu / q.rho));
    dt = std::min(dt, local);
  }
  return opt_.cfl * dt;
}

void Solver::parallel_for(size_t n, const std::function<void(size_t, size_t)>& body) const {
  const size_t workers = std::min<size_t>(std::max(opt_.threads, 1), std::max<size_t>(n, 1));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t b = w * chunk, e = std::min(n, b + chunk);
    pool.emplace_back([&, w, b, e] {
      try {
        if (b < e) body(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void Solver::reconstruct(const std::vector<CellSolution>& cells, std::vector<QuadraticPoly>& polys) {
  polys.resize(cells.size());
  const auto geo = mesh_.geometry();
  std::atomic<long> fallbacks{0};
  parallel_for(cells.size(), [&](size_t begin, size_t end) {
    std::vector<State> means;
    std::vector<StateGradient> grads;
    std::vector<Vec3> points;
    for (size_t c = begin; c < end; ++c) {
      const CellData& d = data_[c];
      const CellSolution& own = cells[c];
      means.clear();
      grads.clear();
      for (const auto& s : d.stencil) {
        if (s.cell >= 0) {
          means.push_back(cells[s.cell].W);
          grads.push_back(cells[s.cell].grad);
        } else {
          const Ghost& g = ghosts_[s.ghost];
          const auto gc = bc::fill_ghost(g.spec, own.W, own.grad, g.n);
          means.push_back(gc.W);
          grads.push_back(gc.grad);
        }
      }
      QuadraticPoly p;
      if (d.degenerate) {
        p = recon::linear_poly(own.W, own.grad, d.basis.h);
      } else {
        p = d.ls.solve(own.W, means, grads);
        if (opt_.recon == ReconMode::Weno) p = recon::multires_weno(p, own.grad, grads, d.basis, geo[c].volume);
      }
      points.clear();
      const Cell& cell = mesh_.cells()[c];
      for (int lf = 0; lf < cell.nf(); ++lf)
        for (const auto& q : mesh_.faces()[cell.faces[lf]].quad.view()) points.push_back(q.x);
      if (!recon::admissible_at(p, d.basis, points, opt_.gas)) {
        p = recon::constant_poly(own.W);
        fallbacks.fetch_add(1, std::memory_order_relaxed);
      }
      polys[c] = p;
    }
  });
  positivity_fallbacks_ = fallbacks.load();
}

Solver::FaceSums Solver::face_flux(const FluxFace& ff, const std::vector<CellSolution>& cells,
                                   const std::vector<QuadraticPoly>& polys, double dt) {
  const Face& face = mesh_.faces()[ff.face];
  const GasModel& gas = opt_.gas;
  const Ghost* ghost = ff.ghost >= 0 ? &ghosts_[ff.ghost] : nullptr;
  FaceSums sums;
  const State& mean_l = cells[ff.left].W;
  const State mean_r =
      ghost ? bc::fill_ghost(ghost->spec, mean_l, cells[ff.left].grad, ghost->n).W : cells[ff.right].W;

  for (const auto& p : face.quad.view()) {
    const flux::LocalFrame frame = flux::LocalFrame::from_normal(p.normal);
    const recon::PointValue L = recon::evaluate(polys[ff.left], data_[ff.left].basis, p.x);
    recon::PointValue R;
    if (!ghost) {
      R = recon::evaluate(polys[ff.right], data_[ff.right].basis, p.x - ff.shift);
    } else {
      switch (ghost->spec.kind) {
        case bc::Kind::FarField:
          R.W = bc::farfield_trace(L.W, ghost->spec.W_inf, p.normal, gas);
          break;
        case bc::Kind::SlipWall:
        case bc::Kind::NoSlipWall:
          R.W = bc::mirror_state(L.W, p.normal, ghost->spec.kind);
          R.grad = bc::mirror_gradient(L.grad, p.normal, ghost->spec.kind);
          break;
        case bc::Kind::MaxwellWall:
          R.W = bc::mirror_state(L.W, p.normal, bc::Kind::SlipWall);
          break;
        case bc::Kind::Periodic:
          break;
      }
    }

    State F, Ft, W0, Wt;
    State Wl = flux::rotate_to_local(L.W, frame), Wr = flux::rotate_to_local(R.W, frame);
    if (ghost && ghost->spec.kind == bc::Kind::MaxwellWall) {
      const double tau = opt_.mu / pressure(L.W, gas);
      const auto wf =
          bc::maxwell_wall_flux(Wl, flux::rotate_to_local(L.grad, frame), ghost->spec.T_wall, dt, tau, gas);
      const auto f = flux::s2o4_flux_pair(wf.F_half, wf.F_full, dt);
      const auto w = flux::s2o4_flux_pair(wf.W_half, wf.W_full, dt);
      F = f.value, Ft = f.derivative, W0 = w.value, Wt = w.derivative;
    } else {
      flux::InterfaceInput in;
      in.Wl = Wl;
      in.Wr = Wr;
      in.gl = flux::rotate_to_local(L.grad, frame);
      in.gr = flux::rotate_to_local(R.grad, frame);
      in.dt = dt;
      in.mu = opt_.mu;
      in.viscous = opt_.viscous;
      in.mode = opt_.flux;
      flux::FluxResult r;
      try {
        r = flux::evaluate(in, gas);
      } catch (const InvalidState&) {
        // First-order data: cell means, no slopes.
        in.Wl = Wl = flux::rotate_to_local(mean_l, frame);
        in.Wr = Wr = flux::rotate_to_local(ghost && ghost->spec.kind == bc::Kind::FarField
                                                ? bc::farfield_trace(mean_l, ghost->spec.W_inf, p.normal, gas)
                                                : mean_r,
                                            frame);
        in.gl = in.gr = StateGradient{};
        r = flux::evaluate(in, gas);
        fallback_count_.fetch_add(1, std::memory_order_relaxed);
      }
      const auto f = flux::s2o4_flux_pair(r.F_half, r.F_full, dt);
      F = f.value, Ft = f.derivative, W0 = r.W_point, Wt = r.dW_dt;
    }

    const double w = p.weight;
    sums.F += w * flux::rotate_from_local(F, frame);
    sums.Ft += w * flux::rotate_from_local(Ft, frame);
    const State W0g = flux::rotate_from_local(W0, frame), Wtg = flux::rotate_from_local(Wt, frame);
    for (int d = 0; d < 3; ++d) {
      sums.W0[d] += (w * p.normal[d]) * W0g;
      sums.Wt[d] += (w * p.normal[d]) * Wtg;
    }

    const double pl = pressure(Wl, gas), pr = pressure(Wr, gas);
    const double al = std::sqrt(gas.gamma * pl / Wl[0]), ar = std::sqrt(gas.gamma * pr / Wr[0]);
    recon::CompressionInput ci;
    ci.Ql = Wl[0];
    ci.Qr = Wr[0];
    ci.Qbar_owner = mean_l[0];
    ci.Qbar_neighbor = mean_r[0];
    ci.pl = pl;
    ci.pr = pr;
    ci.Ma2l = Wl[2] / Wl[0] / al;
    ci.Ma2r = Wr[2] / Wr[0] / ar;
    ci.Ma3l = Wl[3] / Wl[0] / al;
    ci.Ma3r = Wr[3] / Wr[0] / ar;
    sums.log_excess += std::log1p(recon::compression_excess(ci, opt_.cf));
  }
  return sums;
}

void Solver::face_fluxes(const std::vector<CellSolution>& cells, const std::vector<QuadraticPoly>& polys, double dt,
                         std::vector<FaceSums>& sums) {
  sums.resize(flux_faces_.size());
  parallel_for(flux_faces_.size(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) sums[i] = face_flux(flux_faces_[i], cells, polys, dt);
  });
  fallbacks_ += fallback_count_.exchange(0);
}

void Solver::assemble(const std::vector<FaceSums>& sums, std::vector<State>& L, std::vector<State>& Lt) const {
  L.resize(mesh_.cell_count());
  Lt.resize(mesh_.cell_count());
  const auto geo = mesh_.geometry();
  parallel_for(mesh_.cell_count(), [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      State a{}, b{};
      for (const auto& [f, s] : data_[c].faces) {
        a += s * sums[f].F;
        b += s * sums[f].Ft;
      }
      const double k = -1.0 / geo[c].volume;
      L[c] = k * a;
      Lt[c] = k * b;
    }
  });
}

StateGradient Solver::gradient_from(const std::vector<FaceSums>& base, const std::vector<FaceSums>& slope, int cell,
                                    double at) const {
  StateGradient g{};
  for (const auto& [f, s] : data_[cell].faces) {
    for (int d = 0; d < 3; ++d) {
      g[d] += s * base[f].W0[d];
      g[d] += (s * at) * slope[f].Wt[d];
    }
  }
  const double k = 1.0 / mesh_.geometry()[cell].volume;
  for (int d = 0; d < 3; ++d) g[d] = k * g[d];
  return g;
}

void Solver::check_admissible(const std::vector<CellSolution>& cells, int stage) const {
  for (size_t c = 0; c < cells.size(); ++c) {
    const State& W = cells[c].W;
    bool finite = true;
    for (double x : W) finite = finite && std::isfinite(x);
    if (finite && is_admissible(W, opt_.gas)) continue;
    abort_ = {static_cast<int>(c), stage, time_, W};
    std::ostringstream s;
    s << "non-admissible cell average in cell " << c << " at stage " << stage << " (t = " << time_
      << ", step " << steps_ << "): W = " << describe(W);
    throw SolverAbort(s.str());
  }
}

Residual Solver::residual(double dt) {
  std::vector<QuadraticPoly> polys;
  std::vector<FaceSums> sums;
  reconstruct(cells_, polys);
  face_fluxes(cells_, polys, dt, sums);
  Residual r;
  assemble(sums, r.L, r.Lt);
  return r;
}

void Solver::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive and finite");
  const size_t n = cells_.size();
  std::vector<QuadraticPoly> polys;
  std::vector<FaceSums> s1, s2;
  std::vector<State> L0, Lt0, L1, Lt1;
  std::vector<CellSolution> mid(n), next(n);

  try {
    reconstruct(cells_, polys);
    face_fluxes(cells_, polys, dt, s1);
  } catch (const InvalidState& e) {
    abort_ = {-1, 1, time_, {}};
    throw SolverAbort(std::string("flux evaluation failed at stage 1: ") + e.what());
  }
  assemble(s1, L0, Lt0);
  parallel_for(n, [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      mid[c].W = s2o4_midpoint(cells_[c].W, L0[c], Lt0[c], dt);
      mid[c].grad = gradient_from(s1, s1, static_cast<int>(c), 0.5 * dt);
    }
  });
  check_admissible(mid, 1);

  try {
    reconstruct(mid, polys);
    face_fluxes(mid, polys, dt, s2);
  } catch (const InvalidState& e) {
    abort_ = {-1, 2, time_, {}};
    throw SolverAbort(std::string("flux evaluation failed at stage 2: ") + e.what());
  }
  assemble(s2, L1, Lt1);
  std::vector<recon::CellCompression> alpha(n);
  parallel_for(n, [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      next[c].W = s2o4_final(cells_[c].W, L0[c], Lt0[c], Lt1[c], dt);
      next[c].grad = gradient_from(s1, s2, static_cast<int>(c), dt);
      double s = 0.0;
      for (const auto& [f, sign] : data_[c].faces) s += s2[f].log_excess;
      alpha[c] = {std::exp(-s), -std::expm1(-s)};
      if (opt_.compression) {
        for (int d = 0; d < 3; ++d) next[c].grad[d] = alpha[c].alpha * next[c].grad[d];
      }
    }
  });
  check_admissible(next, 2);

  cells_ = std::move(next);
  alpha_ = std::move(alpha);
  time_ += dt;
  ++steps_;
}

void Solver::advance_to(double t_end, const std::function<void(const Solver&)>& on_step) {
  while (time_ < t_end) {
    double dt = compute_time_step();
    const bool last = time_ + dt >= t_end * (1.0 - 1e-14);
    if (last) dt = t_end - time_;
    if (!(dt > 0.0)) break;
    step(dt);
    if (last) time_ = t_end;
    if (on_step) on_step(*this);
  }
}

void Solver::write_checkpoint(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open checkpoint '" + path + "' for writing");
  out << "cgkscheckpoint 1\n"
      << "cells " << cells_.size() << "\n"
      << std::setprecision(17) << "time " << time_ << "\n"
      << "steps " << steps_ << "\n";
  for (const auto& c : cells_) {
    for (double x : c.W) out << x << ' ';
    for (const auto& g : c.grad)
      for (double x : g) out << x << ' ';
    out << '\n';
  }
  if (!out) throw IoError("write failed for checkpoint '" + path + "'");
}

void Solver::read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  std::string magic, key;
  int version = 0;
  size_t count = 0;
  double t = 0.0;
  long steps = 0;
  in >> magic >> version;
  if (magic != "cgkscheckpoint" || version != 1) throw IoError("'" + path + "' is not a version 1 checkpoint");
  in >> key >> count;
  if (key != "cells" || count != mesh_.cell_count()) throw IoError("checkpoint '" + path + "' cell count mismatch");
  in >> key >> t;
  if (key != "time") throw IoError("checkpoint '" + path + "': missing time");
  in >> key >> steps;
  if (key != "steps") throw IoError("checkpoint '" + path + "': missing step count");
  std::vector<CellSolution> cells(count);
  for (auto& c : cells) {
    for (double& x : c.W) in >> x;
    for (auto& g : c.grad)
      for (double& x : g) in >> x;
  }
  if (!in) throw IoError("checkpoint '" + path + "' is truncated");
  set_initial(std::move(cells), t);
  steps_ = steps;
}

}  // namespace cgks
