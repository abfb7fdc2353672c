#pragma once

#include <array>
#include <span>
#include <vector>

#include "cgks/vec3.hpp"

namespace cgks {

/// Gauss-Legendre nodes/weights mapped to [0, 1]; n in 1..6.
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule1D gauss_legendre_unit(int n);

/// One face integration point. `weight` already carries the area element,
/// so summing weights over a face gives its area.
struct FacePoint {
  Vec3 x;
  double weight = 0.0;
  Vec3 normal;
};

/// Degree-2 face rule: 3 points on a triangle, 2x2 on a bilinear quadrilateral.
struct FaceQuadrature {
  std::array<FacePoint, 4> points{};
  int count = 0;

  std::span<const FacePoint> view() const { return {points.data(), static_cast<size_t>(count)}; }
  double area() const;
};

/// `corners` holds 3 or 4 vertices ordered so the right-hand normal points outward.
FaceQuadrature face_quadrature(std::span<const Vec3> corners);

/// Tensor rule with `order` points per direction (collapsed Duffy map on triangles).
/// Used where the integrand is not a low-degree polynomial (initial data).
std::vector<FacePoint> face_quadrature_high(std::span<const Vec3> corners, int order);

/// Trilinear hexahedron map over the unit cube. Degenerate vertex lists describe
/// tetrahedra, pyramids and prisms.
struct TrilinearMap {
  std::array<Vec3, 8> v;

  Vec3 position(double xi, double eta, double zeta) const;
  /// Returns det J and fills the position.
  double jacobian(double xi, double eta, double zeta, Vec3& x) const;
};

struct VolumePoint {
  Vec3 x;
  double weight;  // includes det J
};

std::vector<VolumePoint> volume_quadrature(const TrilinearMap& map, int order);

}  // namespace cgks
