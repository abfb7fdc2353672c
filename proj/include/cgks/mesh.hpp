#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cgks/quadrature.hpp"
#include "cgks/state.hpp"
#include "cgks/vec3.hpp"

namespace cgks {

enum class CellKind : unsigned char { Tet, Pyramid, Prism, Hex };

int vertex_count(CellKind kind);
int face_count(CellKind kind);
const char* kind_name(CellKind kind);  // "tet", "pyr", "pri", "hex"
CellKind kind_from_name(const std::string& name);

struct Cell {
  CellKind kind = CellKind::Hex;
  std::array<int, 8> vertices{};
  std::array<int, 6> faces{};

  int nv() const { return vertex_count(kind); }
  int nf() const { return face_count(kind); }
};

/// Volume moments of a cell. Second moments are central volume averages
/// (xx, yy, zz, xy, xz, yz), i.e. the quadratic basis offsets; the linear
/// offsets vanish by construction of the centroid.
struct CellGeometry {
  double volume = 0.0;
  Vec3 centroid;
  std::array<double, 6> second_moments{};
  double surface = 0.0;
  double dr = 0.0;  // equivalent size used by the time-step restriction
};

struct Face {
  std::array<int, 4> vertices{};
  int nv = 0;
  int owner = -1;
  int neighbor = -1;  // real cell across the face, or periodic partner's owner; -1 on a wall/far field
  int tag = -1;       // boundary tag, -1 for interior faces
  int partner = -1;   // periodic partner face
  Vec3 shift;         // neighbor coordinates + shift = owner frame (non-zero for periodic faces)
  FaceQuadrature quad;

  bool is_boundary() const { return tag >= 0; }
  bool is_periodic() const { return partner >= 0; }
};

struct BoundaryFaceSpec {
  std::array<int, 4> vertices{};
  int nv = 0;
  int tag = 0;
};

struct PeriodicSpec {
  int tag_a = 0;
  int tag_b = 0;
  int axis = 0;
};

struct Neighbor {
  int cell;
  int face;
  Vec3 shift;
};

/// Mixed-element mesh. Immutable after `build`.
class Mesh {
 public:
  static Mesh build(std::vector<Vec3> vertices, std::vector<Cell> cells,
                    std::vector<BoundaryFaceSpec> boundary, std::vector<PeriodicSpec> periodic);

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const Cell> cells() const { return cells_; }
  std::span<const Face> faces() const { return faces_; }
  std::span<const CellGeometry> geometry() const { return geometry_; }
  std::span<const PeriodicSpec> periodic() const { return periodic_; }
  std::span<const Neighbor> von_neumann(int cell) const { return von_neumann_[cell]; }

  size_t cell_count() const { return cells_.size(); }
  size_t face_count() const { return faces_.size(); }

  /// Outward-ordered corner positions of a face.
  std::vector<Vec3> face_corners(int face) const;
  /// Outward-ordered corner positions of local face `lf` of `cell`.
  std::vector<Vec3> cell_face_corners(int cell, int lf) const;
  TrilinearMap trilinear_map(int cell) const;
  /// Boundary faces in the form accepted by `build` (periodic ones included).
  std::vector<BoundaryFaceSpec> boundary_specs() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  std::vector<CellGeometry> geometry_;
  std::vector<PeriodicSpec> periodic_;
  std::vector<std::vector<Neighbor>> von_neumann_;
};

/// Local faces of a cell kind, vertex positions within the cell's vertex list,
/// ordered for an outward right-hand normal.
std::vector<std::vector<int>> local_faces(CellKind kind);

/// Collapsed-hexahedron vertex table for the isoparametric map.
std::array<int, 8> collapsed_hex(CellKind kind);

CellGeometry compute_cell_geometry(std::span<const Vec3> vertices, const Cell& cell);

struct Box {
  Vec3 lo{0, 0, 0};
  Vec3 hi{1, 1, 1};
};

/// Boundary tags used by the generators: 0/1 = x min/max, 2/3 = y, 4/5 = z.
Mesh build_structured_hex(std::array<int, 3> n, const Box& box, std::array<bool, 3> periodic);

/// n^3 hex lattice whose 60% of layers nearest z-max are each split into two
/// triangular prisms (extruded along x), alternating the diagonal by (j + k)
/// parity. Produces 1.6 n^3 cells; n must be a multiple of 5.
Mesh build_hybrid_cube(int n, const Box& box, std::array<bool, 3> periodic);

void write_mesh_ascii(const Mesh& mesh, const std::string& path);
Mesh read_mesh_ascii(const std::string& path);

}  // namespace cgks
