#include "cgks/mesh.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <unordered_map>

namespace cgks {

int vertex_count(CellKind kind) {
  switch (kind) {
    case CellKind::Tet: return 4;
    case CellKind::Pyramid: return 5;
    case CellKind::Prism: return 6;
    case CellKind::Hex: return 8;
  }
  return 0;
}

int face_count(CellKind kind) {
  switch (kind) {
    case CellKind::Tet: return 4;
    case CellKind::Pyramid: return 5;
    case CellKind::Prism: return 5;
    case CellKind::Hex: return 6;
  }
  return 0;
}

const char* kind_name(CellKind kind) {
  switch (kind) {
    case CellKind::Tet: return "tet";
    case CellKind::Pyramid: return "pyr";
    case CellKind::Prism: return "pri";
    case CellKind::Hex: return "hex";
  }
  return "?";
}

CellKind kind_from_name(const std::string& name) {
  if (name == "tet") return CellKind::Tet;
  if (name == "pyr") return CellKind::Pyramid;
  if (name == "pri") return CellKind::Prism;
  if (name == "hex") return CellKind::Hex;
  throw MeshError("unknown cell kind '" + name + "'");
}

std::vector<std::vector<int>> local_faces(CellKind kind) {
  switch (kind) {
    case CellKind::Tet: return {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}};
    case CellKind::Pyramid: return {{0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    case CellKind::Prism: return {{0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
    case CellKind::Hex:
      return {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  }
  return {};
}

std::array<int, 8> collapsed_hex(CellKind kind) {
  switch (kind) {
    case CellKind::Tet: return {0, 1, 2, 2, 3, 3, 3, 3};
    case CellKind::Pyramid: return {0, 1, 2, 3, 4, 4, 4, 4};
    case CellKind::Prism: return {0, 1, 2, 2, 3, 4, 5, 5};
    case CellKind::Hex: return {0, 1, 2, 3, 4, 5, 6, 7};
  }
  return {};
}

namespace {

TrilinearMap map_of(std::span<const Vec3> vertices, const Cell& cell) {
  TrilinearMap m;
  const auto table = collapsed_hex(cell.kind);
  for (int i = 0; i < 8; ++i) m.v[i] = vertices[cell.vertices[table[i]]];
  return m;
}

using FaceKey = std::array<int, 4>;

FaceKey make_key(std::span<const int> ids) {
  FaceKey k = {INT_MAX, INT_MAX, INT_MAX, INT_MAX};
  std::copy(ids.begin(), ids.end(), k.begin());
  std::sort(k.begin(), k.end());
  return k;
}

struct KeyHash {
  size_t operator()(const FaceKey& k) const {
    size_t h = 1469598103934665603ull;
    for (int v : k) h = (h ^ static_cast<size_t>(v)) * 1099511628211ull;
    return h;
  }
};

Vec3 face_centroid(const FaceQuadrature& q) {
  Vec3 c;
  double a = 0.0;
  for (const auto& p : q.view()) {
    c += p.weight * p.x;
    a += p.weight;
  }
  return (1.0 / a) * c;
}

}  // namespace

CellGeometry compute_cell_geometry(std::span<const Vec3> vertices, const Cell& cell) {
  const TrilinearMap map = map_of(vertices, cell);
  const auto pts = volume_quadrature(map, 3);
  CellGeometry g;
  Vec3 first;
  for (const auto& p : pts) {
    if (!(p.weight > 0.0)) throw MeshError("non-positive Jacobian in cell volume quadrature");
    g.volume += p.weight;
    first += p.weight * p.x;
  }
  g.centroid = (1.0 / g.volume) * first;
  for (const auto& p : pts) {
    const Vec3 d = p.x - g.centroid;
    const double w = p.weight / g.volume;
    g.second_moments[0] += w * d.x * d.x;
    g.second_moments[1] += w * d.y * d.y;
    g.second_moments[2] += w * d.z * d.z;
    g.second_moments[3] += w * d.x * d.y;
    g.second_moments[4] += w * d.x * d.z;
    g.second_moments[5] += w * d.y * d.z;
  }
  double max_face = 0.0;
  for (const auto& lf : local_faces(cell.kind)) {
    std::vector<Vec3> corners;
    for (int i : lf) corners.push_back(vertices[cell.vertices[i]]);
    const double a = face_quadrature(corners).area();
    g.surface += a;
    max_face = std::max(max_face, a);
  }
  if (cell.kind == CellKind::Tet || cell.kind == CellKind::Pyramid) {
    g.dr = 3.0 * g.volume / g.surface;
  } else {
    g.dr = g.volume / max_face;
  }
  return g;
}

Mesh Mesh::build(std::vector<Vec3> vertices, std::vector<Cell> cells, std::vector<BoundaryFaceSpec> boundary,
                 std::vector<PeriodicSpec> periodic) {
  Mesh m;
  m.vertices_ = std::move(vertices);
  m.cells_ = std::move(cells);
  m.periodic_ = std::move(periodic);
  const int nvert = static_cast<int>(m.vertices_.size());

  std::unordered_map<FaceKey, int, KeyHash> lookup;
  lookup.reserve(m.cells_.size() * 4);
  for (int c = 0; c < static_cast<int>(m.cells_.size()); ++c) {
    Cell& cell = m.cells_[c];
    for (int i = 0; i < cell.nv(); ++i) {
      if (cell.vertices[i] < 0 || cell.vertices[i] >= nvert) {
        throw MeshError("cell " + std::to_string(c) + " references missing vertex " + std::to_string(cell.vertices[i]));
      }
    }
    const auto lfs = local_faces(cell.kind);
    for (int lf = 0; lf < static_cast<int>(lfs.size()); ++lf) {
      std::array<int, 4> ids{};
      for (size_t i = 0; i < lfs[lf].size(); ++i) ids[i] = cell.vertices[lfs[lf][i]];
      const int nv = static_cast<int>(lfs[lf].size());
      const FaceKey key = make_key({ids.data(), static_cast<size_t>(nv)});
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(m.faces_.size()));
      if (inserted) {
        Face f;
        f.vertices = ids;
        f.nv = nv;
        f.owner = c;
        m.faces_.push_back(f);
      } else {
        Face& f = m.faces_[it->second];
        if (f.neighbor >= 0) throw MeshError("face shared by more than two cells");
        if (f.owner == c) throw MeshError("cell " + std::to_string(c) + " repeats a face");
        f.neighbor = c;
      }
      cell.faces[lf] = it->second;
    }
  }

  for (const auto& b : boundary) {
    const FaceKey key = make_key({b.vertices.data(), static_cast<size_t>(b.nv)});
    auto it = lookup.find(key);
    if (it == lookup.end()) throw MeshError("boundary entry does not match any cell face");
    Face& f = m.faces_[it->second];
    if (f.neighbor >= 0) throw MeshError("boundary entry names an interior face");
    f.tag = b.tag;
  }

  for (auto& f : m.faces_) {
    if (f.neighbor < 0 && f.tag < 0) throw MeshError("boundary face without a tag");
    std::vector<Vec3> corners;
    for (int i = 0; i < f.nv; ++i) corners.push_back(m.vertices_[f.vertices[i]]);
    try {
      f.quad = face_quadrature(corners);
    } catch (const std::invalid_argument& e) {
      throw MeshError(e.what());
    }
  }

  for (const auto& ps : m.periodic_) {
    if (ps.axis < 0 || ps.axis > 2) throw MeshError("periodic axis must be 0, 1 or 2");
    std::vector<int> side_a, side_b;
    for (int i = 0; i < static_cast<int>(m.faces_.size()); ++i) {
      if (m.faces_[i].tag == ps.tag_a) side_a.push_back(i);
      if (m.faces_[i].tag == ps.tag_b) side_b.push_back(i);
    }
    if (side_a.size() != side_b.size()) throw MeshError("periodic sides have different face counts");
    const int a1 = (ps.axis + 1) % 3, a2 = (ps.axis + 2) % 3;
    std::vector<bool> used(side_b.size(), false);
    for (int fa : side_a) {
      const Vec3 ca = face_centroid(m.faces_[fa].quad);
      const double scale = std::sqrt(m.faces_[fa].quad.area());
      int match = -1;
      for (size_t j = 0; j < side_b.size(); ++j) {
        if (used[j]) continue;
        const Vec3 cb = face_centroid(m.faces_[side_b[j]].quad);
        if (std::abs(ca[a1] - cb[a1]) < 1e-8 * scale && std::abs(ca[a2] - cb[a2]) < 1e-8 * scale) {
          match = static_cast<int>(j);
          break;
        }
      }
      if (match < 0) throw MeshError("periodic face has no partner");
      used[match] = true;
      Face& A = m.faces_[fa];
      Face& B = m.faces_[side_b[match]];
      if (A.nv != B.nv) throw MeshError("periodic partner faces differ in shape");
      const Vec3 cb = face_centroid(B.quad);
      Vec3 shift;
      shift[ps.axis] = ca[ps.axis] - cb[ps.axis];
      A.partner = side_b[match];
      B.partner = fa;
      A.neighbor = B.owner;
      B.neighbor = A.owner;
      A.shift = shift;
      B.shift = -shift;
    }
  }

  m.geometry_.resize(m.cells_.size());
  m.von_neumann_.resize(m.cells_.size());
  for (size_t c = 0; c < m.cells_.size(); ++c) {
    m.geometry_[c] = compute_cell_geometry(m.vertices_, m.cells_[c]);
    const Cell& cell = m.cells_[c];
    for (int lf = 0; lf < cell.nf(); ++lf) {
      const int fid = cell.faces[lf];
      const Face& f = m.faces_[fid];
      if (f.is_periodic()) {
        m.von_neumann_[c].push_back({f.neighbor, fid, f.shift});
      } else if (f.neighbor >= 0) {
        const int other = (f.owner == static_cast<int>(c)) ? f.neighbor : f.owner;
        m.von_neumann_[c].push_back({other, fid, Vec3{}});
      }
    }
  }
  return m;
}

std::vector<Vec3> Mesh::face_corners(int face) const {
  const Face& f = faces_[face];
  std::vector<Vec3> c;
  for (int i = 0; i < f.nv; ++i) c.push_back(vertices_[f.vertices[i]]);
  return c;
}

std::vector<Vec3> Mesh::cell_face_corners(int cell, int lf) const {
  const Cell& c = cells_[cell];
  std::vector<Vec3> out;
  const auto faces = local_faces(c.kind);
  for (int i : faces[lf]) out.push_back(vertices_[c.vertices[i]]);
  return out;
}

TrilinearMap Mesh::trilinear_map(int cell) const { return map_of(vertices_, cells_[cell]); }

std::vector<BoundaryFaceSpec> Mesh::boundary_specs() const {
  std::vector<BoundaryFaceSpec> out;
  for (const auto& f : faces_) {
    if (f.tag >= 0) out.push_back({f.vertices, f.nv, f.tag});
  }
  return out;
}

namespace {

void check_box(const Box& box) {
  for (int d = 0; d < 3; ++d) {
    if (!(box.hi[d] > box.lo[d])) throw MeshError("box has zero or negative extent");
  }
}

std::vector<PeriodicSpec> periodic_specs(std::array<bool, 3> periodic) {
  std::vector<PeriodicSpec> out;
  for (int d = 0; d < 3; ++d) {
    if (periodic[d]) out.push_back({2 * d, 2 * d + 1, d});
  }
  return out;
}

struct Lattice {
  std::array<int, 3> n;
  int vid(int i, int j, int k) const { return i + (n[0] + 1) * (j + (n[1] + 1) * k); }
};

std::vector<Vec3> lattice_vertices(const Lattice& L, const Box& box) {
  std::vector<Vec3> v;
  v.reserve(static_cast<size_t>(L.n[0] + 1) * (L.n[1] + 1) * (L.n[2] + 1));
  for (int k = 0; k <= L.n[2]; ++k) {
    for (int j = 0; j <= L.n[1]; ++j) {
      for (int i = 0; i <= L.n[0]; ++i) {
        v.push_back({box.lo.x + (box.hi.x - box.lo.x) * i / L.n[0], box.lo.y + (box.hi.y - box.lo.y) * j / L.n[1],
                     box.lo.z + (box.hi.z - box.lo.z) * k / L.n[2]});
      }
    }
  }
  return v;
}

std::vector<BoundaryFaceSpec> lattice_boundary(const Lattice& L) {
  std::vector<BoundaryFaceSpec> b;
  const auto& n = L.n;
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      b.push_back({{L.vid(0, j, k), L.vid(0, j + 1, k), L.vid(0, j + 1, k + 1), L.vid(0, j, k + 1)}, 4, 0});
      b.push_back({{L.vid(n[0], j, k), L.vid(n[0], j + 1, k), L.vid(n[0], j + 1, k + 1), L.vid(n[0], j, k + 1)}, 4, 1});
    }
  }
  for (int k = 0; k < n[2]; ++k) {
    for (int i = 0; i < n[0]; ++i) {
      b.push_back({{L.vid(i, 0, k), L.vid(i + 1, 0, k), L.vid(i + 1, 0, k + 1), L.vid(i, 0, k + 1)}, 4, 2});
      b.push_back({{L.vid(i, n[1], k), L.vid(i + 1, n[1], k), L.vid(i + 1, n[1], k + 1), L.vid(i, n[1], k + 1)}, 4, 3});
    }
  }
  for (int j = 0; j < n[1]; ++j) {
    for (int i = 0; i < n[0]; ++i) {
      b.push_back({{L.vid(i, j, 0), L.vid(i + 1, j, 0), L.vid(i + 1, j + 1, 0), L.vid(i, j + 1, 0)}, 4, 4});
      b.push_back({{L.vid(i, j, n[2]), L.vid(i + 1, j, n[2]), L.vid(i + 1, j + 1, n[2]), L.vid(i, j + 1, n[2])}, 4, 5});
    }
  }
  return b;
}

Cell hex_cell(const Lattice& L, int i, int j, int k) {
  Cell c;
  c.kind = CellKind::Hex;
  c.vertices = {L.vid(i, j, k),         L.vid(i + 1, j, k),         L.vid(i + 1, j + 1, k),
                L.vid(i, j + 1, k),     L.vid(i, j, k + 1),         L.vid(i + 1, j, k + 1),
                L.vid(i + 1, j + 1, k + 1), L.vid(i, j + 1, k + 1)};
  return c;
}

double signed_volume6(const std::vector<Vec3>& v, const Cell& c) {
  return dot(cross(v[c.vertices[1]] - v[c.vertices[0]], v[c.vertices[2]] - v[c.vertices[0]]),
             v[c.vertices[3]] - v[c.vertices[0]]);
}

}  // namespace

Mesh build_structured_hex(std::array<int, 3> n, const Box& box, std::array<bool, 3> periodic) {
  check_box(box);
  for (int d = 0; d < 3; ++d) {
    if (n[d] < 1) throw MeshError("structured mesh needs at least one cell per axis");
  }
  const Lattice L{n};
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(n[0]) * n[1] * n[2]);
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) cells.push_back(hex_cell(L, i, j, k));
  return Mesh::build(lattice_vertices(L, box), std::move(cells), lattice_boundary(L), periodic_specs(periodic));
}

Mesh build_hybrid_cube(int n, const Box& box, std::array<bool, 3> periodic) {
  check_box(box);
  if (n < 5 || n % 5 != 0) throw MeshError("hybrid cube needs n to be a positive multiple of 5");
  const Lattice L{{n, n, n}};
  auto vertices = lattice_vertices(L, box);
  const int prism_layers = 3 * n / 5;
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(n) * n * n * 8 / 5);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (k < n - prism_layers) {
          cells.push_back(hex_cell(L, i, j, k));
          continue;
        }
        // (y, z) corners of the cell cross-section, split along one diagonal.
        using YZ = std::array<int, 2>;
        std::array<std::array<YZ, 3>, 2> tris;
        if ((j + k) % 2 == 0) {
          tris = {{{{{0, 0}, {1, 0}, {1, 1}}}, {{{0, 0}, {1, 1}, {0, 1}}}}};
        } else {
          tris = {{{{{0, 0}, {1, 0}, {0, 1}}}, {{{1, 0}, {1, 1}, {0, 1}}}}};
        }
        for (const auto& tri : tris) {
          Cell c;
          c.kind = CellKind::Prism;
          for (int t = 0; t < 3; ++t) {
            c.vertices[t] = L.vid(i, j + tri[t][0], k + tri[t][1]);
            c.vertices[t + 3] = L.vid(i + 1, j + tri[t][0], k + tri[t][1]);
          }
          if (signed_volume6(vertices, c) < 0.0) {
            std::swap(c.vertices[1], c.vertices[2]);
            std::swap(c.vertices[4], c.vertices[5]);
          }
          cells.push_back(c);
        }
      }
    }
  }
  // The x-end faces of prism layers are triangles.
  std::vector<BoundaryFaceSpec> boundary;
  for (const auto& b : lattice_boundary(L)) {
    if (b.tag > 1) {
      boundary.push_back(b);
      continue;
    }
    const int i = (b.tag == 0) ? 0 : n;
    int j = -1, k = -1;
    for (int jj = 0; jj < n && j < 0; ++jj)
      for (int kk = 0; kk < n; ++kk)
        if (L.vid(i, jj, kk) == b.vertices[0]) {
          j = jj;
          k = kk;
          break;
        }
    if (k < n - prism_layers) {
      boundary.push_back(b);
    } else if ((j + k) % 2 == 0) {
      boundary.push_back({{L.vid(i, j, k), L.vid(i, j + 1, k), L.vid(i, j + 1, k + 1)}, 3, b.tag});
      boundary.push_back({{L.vid(i, j, k), L.vid(i, j + 1, k + 1), L.vid(i, j, k + 1)}, 3, b.tag});
    } else {
      boundary.push_back({{L.vid(i, j, k), L.vid(i, j + 1, k), L.vid(i, j, k + 1)}, 3, b.tag});
      boundary.push_back({{L.vid(i, j + 1, k), L.vid(i, j + 1, k + 1), L.vid(i, j, k + 1)}, 3, b.tag});
    }
  }
  return Mesh::build(std::move(vertices), std::move(cells), std::move(boundary), periodic_specs(periodic));
}

}  // namespace cgks
