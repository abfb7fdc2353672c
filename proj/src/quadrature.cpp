#include "cgks/quadrature.hpp"

#include <stdexcept>

namespace cgks {

GaussRule1D gauss_legendre_unit(int n) {
  // Symmetric nodes on [-1, 1], positive half only.
  static const std::vector<std::vector<std::pair<double, double>>> half = {
      {{0.0, 2.0}},
      {{0.5773502691896257645, 1.0}},
      {{0.0, 8.0 / 9.0}, {0.7745966692414833770, 5.0 / 9.0}},
      {{0.3399810435848562648, 0.6521451548625461427}, {0.8611363115940525752, 0.3478548451374538574}},
      {{0.0, 0.5688888888888888889},
       {0.5384693101056830910, 0.4786286704993664680},
       {0.9061798459386639928, 0.2369268850561890875}},
      {{0.2386191860831969086, 0.4679139345726910473},
       {0.6612093864662645137, 0.3607615730481386076},
       {0.9324695142031520279, 0.1713244923791703450}},
  };
  if (n < 1 || n > 6) throw std::invalid_argument("gauss_legendre_unit: order must be in 1..6");
  GaussRule1D rule;
  for (auto it = half[n - 1].rbegin(); it != half[n - 1].rend(); ++it) {
    if (it->first == 0.0) continue;
    rule.nodes.push_back(0.5 * (1.0 - it->first));
    rule.weights.push_back(0.5 * it->second);
  }
  for (const auto& [node, w] : half[n - 1]) {
    rule.nodes.push_back(0.5 * (1.0 + node));
    rule.weights.push_back(0.5 * w);
  }
  return rule;
}

double FaceQuadrature::area() const {
  double a = 0.0;
  for (int k = 0; k < count; ++k) a += points[k].weight;
  return a;
}

namespace {

Vec3 bilinear(std::span<const Vec3> c, double s, double t) {
  return (1 - s) * (1 - t) * c[0] + s * (1 - t) * c[1] + s * t * c[2] + (1 - s) * t * c[3];
}

Vec3 bilinear_area_vector(std::span<const Vec3> c, double s, double t) {
  const Vec3 ds = (1 - t) * (c[1] - c[0]) + t * (c[2] - c[3]);
  const Vec3 dt = (1 - s) * (c[3] - c[0]) + s * (c[2] - c[1]);
  return cross(ds, dt);
}

}  // namespace

FaceQuadrature face_quadrature(std::span<const Vec3> c) {
  FaceQuadrature q;
  if (c.size() == 3) {
    const Vec3 area_vec = 0.5 * cross(c[1] - c[0], c[2] - c[0]);
    const double area = norm(area_vec);
    if (!(area > 0.0)) throw std::invalid_argument("face_quadrature: degenerate triangle");
    const Vec3 n = (1.0 / area) * area_vec;
    constexpr double a = 2.0 / 3.0, b = 1.0 / 6.0;
    const std::array<std::array<double, 3>, 3> bary = {{{a, b, b}, {b, a, b}, {b, b, a}}};
    for (int k = 0; k < 3; ++k) {
      q.points[k] = {bary[k][0] * c[0] + bary[k][1] * c[1] + bary[k][2] * c[2], area / 3.0, n};
    }
    q.count = 3;
    return q;
  }
  if (c.size() != 4) throw std::invalid_argument("face_quadrature: face needs 3 or 4 corners");
  const double g = 0.5773502691896257645;
  const std::array<double, 2> nodes = {0.5 * (1.0 - g), 0.5 * (1.0 + g)};
  int k = 0;
  for (double t : nodes) {
    for (double s : nodes) {
      const Vec3 av = bilinear_area_vector(c, s, t);
      const double j = norm(av);
      if (!(j > 0.0)) throw std::invalid_argument("face_quadrature: degenerate quadrilateral");
      q.points[k++] = {bilinear(c, s, t), 0.25 * j, (1.0 / j) * av};
    }
  }
  q.count = 4;
  return q;
}

std::vector<FacePoint> face_quadrature_high(std::span<const Vec3> c, int order) {
  const GaussRule1D g = gauss_legendre_unit(order);
  std::vector<FacePoint> pts;
  pts.reserve(g.nodes.size() * g.nodes.size());
  if (c.size() == 3) {
    const Vec3 area_vec = cross(c[1] - c[0], c[2] - c[0]);
    const double twice_area = norm(area_vec);
    const Vec3 n = (1.0 / twice_area) * area_vec;
    // Duffy: (s, t) -> barycentric (1 - s, s (1 - t), s t), Jacobian s.
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      for (size_t j = 0; j < g.nodes.size(); ++j) {
        const double s = g.nodes[i], t = g.nodes[j];
        const Vec3 x = (1 - s) * c[0] + s * (1 - t) * c[1] + s * t * c[2];
        pts.push_back({x, g.weights[i] * g.weights[j] * s * twice_area, n});
      }
    }
    return pts;
  }
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      const double s = g.nodes[i], t = g.nodes[j];
      const Vec3 av = bilinear_area_vector(c, s, t);
      const double jac = norm(av);
      pts.push_back({bilinear(c, s, t), g.weights[i] * g.weights[j] * jac, (1.0 / jac) * av});
    }
  }
  return pts;
}

Vec3 TrilinearMap::position(double xi, double eta, double zeta) const {
  Vec3 x;
  jacobian(xi, eta, zeta, x);
  return x;
}

double TrilinearMap::jacobian(double s, double t, double u, Vec3& x) const {
  const double ms = 1 - s, mt = 1 - t, mu = 1 - u;
  x = ms * mt * mu * v[0] + s * mt * mu * v[1] + s * t * mu * v[2] + ms * t * mu * v[3] +
      ms * mt * u * v[4] + s * mt * u * v[5] + s * t * u * v[6] + ms * t * u * v[7];
  const Vec3 ds = mt * mu * (v[1] - v[0]) + t * mu * (v[2] - v[3]) + mt * u * (v[5] - v[4]) + t * u * (v[6] - v[7]);
  const Vec3 dt = ms * mu * (v[3] - v[0]) + s * mu * (v[2] - v[1]) + ms * u * (v[7] - v[4]) + s * u * (v[6] - v[5]);
  const Vec3 du = ms * mt * (v[4] - v[0]) + s * mt * (v[5] - v[1]) + s * t * (v[6] - v[2]) + ms * t * (v[7] - v[3]);
  return dot(ds, cross(dt, du));
}

std::vector<VolumePoint> volume_quadrature(const TrilinearMap& map, int order) {
  const GaussRule1D g = gauss_legendre_unit(order);
  const size_t n = g.nodes.size();
  std::vector<VolumePoint> pts;
  pts.reserve(n * n * n);
  for (size_t k = 0; k < n; ++k) {
    for (size_t j = 0; j < n; ++j) {
      for (size_t i = 0; i < n; ++i) {
        Vec3 x;
        const double det = map.jacobian(g.nodes[i], g.nodes[j], g.nodes[k], x);
        pts.push_back({x, det * g.weights[i] * g.weights[j] * g.weights[k]});
      }
    }
  }
  return pts;
}

}  // namespace cgks
