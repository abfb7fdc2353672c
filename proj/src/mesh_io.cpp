#include <cstdio>
#include <fstream>
#include <sstream>

#include "cgks/mesh.hpp"

namespace cgks {

namespace {

const char* axis_name(int axis) { return axis == 0 ? "x" : (axis == 1 ? "y" : "z"); }

int parse_axis(const std::string& s) {
  if (s == "x" || s == "0") return 0;
  if (s == "y" || s == "1") return 1;
  if (s == "z" || s == "2") return 2;
  throw MeshError("bad periodic axis '" + s + "'");
}

std::string next_data_line(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line;
  }
  return {};
}

long expect_count(std::istream& in, int& lineno, const std::string& keyword) {
  std::istringstream ss(next_data_line(in, lineno));
  std::string word;
  long count = -1;
  if (!(ss >> word >> count) || word != keyword || count < 0) {
    throw MeshError("line " + std::to_string(lineno) + ": expected '" + keyword + " <count>'");
  }
  return count;
}

}  // namespace

void write_mesh_ascii(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "cgksmesh 1\n";
  out << "vertices " << mesh.vertices().size() << "\n";
  char buf[128];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  out << "cells " << mesh.cell_count() << "\n";
  for (const auto& c : mesh.cells()) {
    out << kind_name(c.kind);
    for (int i = 0; i < c.nv(); ++i) out << ' ' << c.vertices[i];
    out << '\n';
  }
  const auto boundary = mesh.boundary_specs();
  out << "boundary " << boundary.size() << "\n";
  for (const auto& b : boundary) {
    for (int i = 0; i < b.nv; ++i) out << b.vertices[i] << ' ';
    out << b.tag << '\n';
  }
  for (const auto& p : mesh.periodic()) {
    out << "periodic " << p.tag_a << ' ' << p.tag_b << ' ' << axis_name(p.axis) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

Mesh read_mesh_ascii(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  int lineno = 0;
  {
    std::istringstream ss(next_data_line(in, lineno));
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "cgksmesh" || version != 1) {
      throw MeshError(path + ": missing 'cgksmesh 1' header");
    }
  }
  const long nv = expect_count(in, lineno, "vertices");
  std::vector<Vec3> vertices(nv);
  for (long i = 0; i < nv; ++i) {
    std::istringstream ss(next_data_line(in, lineno));
    if (!(ss >> vertices[i].x >> vertices[i].y >> vertices[i].z)) {
      throw MeshError(path + ":" + std::to_string(lineno) + ": malformed vertex line");
    }
  }
  const long nc = expect_count(in, lineno, "cells");
  std::vector<Cell> cells(nc);
  for (long i = 0; i < nc; ++i) {
    std::istringstream ss(next_data_line(in, lineno));
    std::string kind;
    if (!(ss >> kind)) throw MeshError(path + ":" + std::to_string(lineno) + ": malformed cell line");
    cells[i].kind = kind_from_name(kind);
    for (int k = 0; k < cells[i].nv(); ++k) {
      if (!(ss >> cells[i].vertices[k])) {
        throw MeshError(path + ":" + std::to_string(lineno) + ": cell has too few vertex ids");
      }
      if (cells[i].vertices[k] < 0 || cells[i].vertices[k] >= nv) {
        throw MeshError(path + ":" + std::to_string(lineno) + ": dangling vertex id");
      }
    }
  }
  const long nb = expect_count(in, lineno, "boundary");
  std::vector<BoundaryFaceSpec> boundary(nb);
  for (long i = 0; i < nb; ++i) {
    std::istringstream ss(next_data_line(in, lineno));
    std::vector<long> ids;
    long v;
    while (ss >> v) ids.push_back(v);
    if (ids.size() != 4 && ids.size() != 5) {
      throw MeshError(path + ":" + std::to_string(lineno) + ": boundary line needs 3 or 4 ids and a tag");
    }
    boundary[i].nv = static_cast<int>(ids.size()) - 1;
    for (int k = 0; k < boundary[i].nv; ++k) {
      if (ids[k] < 0 || ids[k] >= nv) throw MeshError(path + ":" + std::to_string(lineno) + ": dangling vertex id");
      boundary[i].vertices[k] = static_cast<int>(ids[k]);
    }
    boundary[i].tag = static_cast<int>(ids.back());
  }
  std::vector<PeriodicSpec> periodic;
  for (std::string line = next_data_line(in, lineno); !line.empty(); line = next_data_line(in, lineno)) {
    std::istringstream ss(line);
    std::string word, axis;
    PeriodicSpec p;
    if (!(ss >> word >> p.tag_a >> p.tag_b >> axis) || word != "periodic") {
      throw MeshError(path + ":" + std::to_string(lineno) + ": unexpected trailing content");
    }
    p.axis = parse_axis(axis);
    periodic.push_back(p);
  }
  return Mesh::build(std::move(vertices), std::move(cells), std::move(boundary), std::move(periodic));
}

}  // namespace cgks
