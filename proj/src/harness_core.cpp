#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "cgks/harness.hpp"

namespace cgks::harness {

std::vector<CellSolution> project(const Mesh& mesh, const ConservedField& f, int order) {
  std::vector<CellSolution> out(mesh.cell_count());
  const auto geo = mesh.geometry();
  for (size_t c = 0; c < mesh.cell_count(); ++c) {
    State mean{};
    double V = 0.0;
    for (const auto& p : volume_quadrature(mesh.trilinear_map(static_cast<int>(c)), order)) {
      mean += p.weight * f(p.x);
      V += p.weight;
    }
    out[c].W = (1.0 / V) * mean;
    StateGradient g{};
    const Cell& cell = mesh.cells()[c];
    for (int lf = 0; lf < cell.nf(); ++lf) {
      const auto corners = mesh.cell_face_corners(static_cast<int>(c), lf);
      for (const auto& p : face_quadrature_high(corners, order)) {
        const State w = f(p.x);
        for (int d = 0; d < 3; ++d) g[d] += (p.weight * p.normal[d]) * w;
      }
    }
    for (int d = 0; d < 3; ++d) out[c].grad[d] = (1.0 / geo[c].volume) * g[d];
  }
  return out;
}

ErrorNorms density_errors(const Mesh& mesh, std::span<const CellSolution> cells, std::span<const double> exact) {
  if (cells.size() != mesh.cell_count() || exact.size() != mesh.cell_count()) {
    throw std::invalid_argument("error norms: size mismatch");
  }
  const auto geo = mesh.geometry();
  ErrorNorms e;
  double V = 0.0;
  for (size_t c = 0; c < cells.size(); ++c) {
    const double d = std::abs(cells[c].W[0] - exact[c]);
    const double v = geo[c].volume;
    e.l1 += v * d;
    e.l2 += v * d * d;
    e.linf = std::max(e.linf, d);
    V += v;
  }
  e.l1 /= V;
  e.l2 = std::sqrt(e.l2 / V);
  return e;
}

std::vector<std::array<double, 3>> convergence_orders(std::span<const ErrorReport> reports) {
  std::vector<std::array<double, 3>> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < reports.size(); ++i) {
    if (i == 0) {
      out.push_back({nan, nan, nan});
      continue;
    }
    const auto& a = reports[i - 1].errors;
    const auto& b = reports[i].errors;
    out.push_back({std::log2(a.l1 / b.l1), std::log2(a.l2 / b.l2), std::log2(a.linf / b.linf)});
  }
  return out;
}

void write_convergence_table(std::span<const ErrorReport> reports, std::ostream& out) {
  const auto orders = convergence_orders(reports);
  auto order = [](double o) {
    if (std::isnan(o)) return std::string("~");
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << o;
    return s.str();
  };
  auto sci = [](double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(6) << v;
    return s.str();
  };
  out << std::left << std::setw(10) << "mesh" << std::setw(14) << "L1 error" << std::setw(7) << "Order"
      << std::setw(14) << "L2 error" << std::setw(7) << "Order" << std::setw(14) << "Linf error" << "Order\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    const auto& e = reports[i].errors;
    out << std::setw(10) << reports[i].label << std::setw(14) << sci(e.l1) << std::setw(7) << order(orders[i][0])
        << std::setw(14) << sci(e.l2) << std::setw(7) << order(orders[i][1]) << std::setw(14) << sci(e.linf)
        << order(orders[i][2]) << '\n';
  }
}

void write_convergence_table(std::span<const ErrorReport> reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_convergence_table(reports, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

State sinwave_exact(const Vec3& x, double t, const GasModel& gas) {
  const double rho = 1.0 + 0.2 * std::sin(std::numbers::pi * (x.x + x.y + x.z - 3.0 * t));
  return to_conserved({rho, {1.0, 1.0, 1.0}, 1.0}, gas);
}

}  // namespace cgks::harness
