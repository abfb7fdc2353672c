#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "cgks/harness.hpp"

namespace cgks::harness {

namespace {

int vtk_type(CellKind k) {
  switch (k) {
    case CellKind::Tet: return 10;
    case CellKind::Pyramid: return 14;
    case CellKind::Prism: return 13;
    case CellKind::Hex: return 12;
  }
  return 0;
}

// Our prism base (0, 1, 2) faces the top triangle; VTK wants it facing away.
std::vector<int> vtk_order(const Cell& c) {
  if (c.kind == CellKind::Prism) {
    return {c.vertices[0], c.vertices[2], c.vertices[1], c.vertices[3], c.vertices[5], c.vertices[4]};
  }
  return {c.vertices.begin(), c.vertices.begin() + c.nv()};
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << std::setprecision(10);
  return out;
}

}  // namespace

void write_vtk(const Mesh& mesh, std::span<const CellSolution> cells, std::span<const recon::CellCompression> alpha,
               const GasModel& gas, const std::string& path) {
  std::ofstream out = open_for_write(path);
  const auto verts = mesh.vertices();
  out << "# vtk DataFile Version 3.0\ncgks field\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << verts.size() << " double\n";
  for (const auto& v : verts) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
  size_t total = 0;
  for (const auto& c : mesh.cells()) total += 1 + c.nv();
  out << "CELLS " << mesh.cell_count() << ' ' << total << '\n';
  for (const auto& c : mesh.cells()) {
    out << c.nv();
    for (int v : vtk_order(c)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.cell_count() << '\n';
  for (const auto& c : mesh.cells()) out << vtk_type(c.kind) << '\n';
  out << "CELL_DATA " << mesh.cell_count() << '\n';
  out << "SCALARS density double 1\nLOOKUP_TABLE default\n";
  for (const auto& c : cells) out << c.W[0] << '\n';
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (const auto& c : cells) out << pressure(c.W, gas) << '\n';
  out << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
  for (size_t i = 0; i < cells.size(); ++i) out << (i < alpha.size() ? alpha[i].alpha : 1.0) << '\n';
  out << "VECTORS velocity double\n";
  for (const auto& c : cells) out << c.W[1] / c.W[0] << ' ' << c.W[2] / c.W[0] << ' ' << c.W[3] / c.W[0] << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<ProfilePoint> line_profile(const Mesh& mesh, std::span<const CellSolution> cells,
                                       std::span<const recon::CellCompression> alpha, const GasModel& gas,
                                       int axis) {
  const auto geo = mesh.geometry();
  std::vector<size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return geo[a].centroid[axis] < geo[b].centroid[axis]; });
  double lo = 0.0, hi = 0.0;
  if (!order.empty()) {
    lo = geo[order.front()].centroid[axis];
    hi = geo[order.back()].centroid[axis];
  }
  const double tol = 1e-9 * std::max(hi - lo, 1.0);
  std::vector<ProfilePoint> out;
  size_t i = 0;
  while (i < order.size()) {
    const double x = geo[order[i]].centroid[axis];
    ProfilePoint p{x, 0, 0, 0, 0};
    double V = 0.0;
    size_t j = i;
    for (; j < order.size() && geo[order[j]].centroid[axis] - x <= tol; ++j) {
      const size_t c = order[j];
      const double v = geo[c].volume;
      const Primitive q = to_primitive(cells[c].W, gas);
      p.rho += v * q.rho;
      p.u += v * q.U[axis];
      p.p += v * q.p;
      p.alpha += v * (c < alpha.size() ? alpha[c].alpha : 1.0);
      V += v;
    }
    p.rho /= V;
    p.u /= V;
    p.p /= V;
    p.alpha /= V;
    out.push_back(p);
    i = j;
  }
  return out;
}

void write_csv_line(const Mesh& mesh, std::span<const CellSolution> cells,
                    std::span<const recon::CellCompression> alpha, const GasModel& gas, int axis,
                    const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "x,rho,u,p,alpha\n";
  for (const auto& p : line_profile(mesh, cells, alpha, gas, axis)) {
    out << p.x << ',' << p.rho << ',' << p.u << ',' << p.p << ',' << p.alpha << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace cgks::harness
