#pragma once

#include <array>
#include <span>
#include <vector>

#include "cgks/mesh.hpp"
#include "cgks/state.hpp"

namespace cgks::recon {

constexpr int kBasis = 9;

/// Zero-mean quadratic basis of one cell in scaled coordinates xi = (x - c) / h:
/// xi1, xi2, xi3, xi1^2 - m11, xi2^2 - m22, xi3^2 - m33, xi1 xi2 - m12, xi1 xi3 - m13, xi2 xi3 - m23,
/// where m holds the cell's central second moments divided by h^2.
struct Basis {
  Vec3 center;
  double h = 1.0;
  std::array<double, 6> m{};  // xx, yy, zz, xy, xz, yz

  static Basis of(const CellGeometry& g);

  std::array<double, kBasis> values(const Vec3& x) const;
  /// d(basis)/d(xi_d) for d = 0..2.
  std::array<std::array<double, kBasis>, 3> derivatives(const Vec3& x) const;
};

/// Cell mean plus coefficients over the basis, one State per basis function.
struct QuadraticPoly {
  State mean{};
  std::array<State, kBasis> a{};
};

/// P1 from the cell-averaged gradient, expressed in the same basis.
QuadraticPoly linear_poly(const State& mean, const StateGradient& grad, double h);
/// P0: the cell mean.
QuadraticPoly constant_poly(const State& mean);

struct PointValue {
  State W{};
  StateGradient grad{};
};

PointValue evaluate(const QuadraticPoly& p, const Basis& b, const Vec3& x);

/// Geometry of one stencil neighbour, expressed in the target cell's frame
/// (periodic shifts and ghost reflections already applied).
struct StencilGeometry {
  Vec3 centroid;
  std::array<double, 6> second_moments{};
};

/// Constrained least squares on the von Neumann stencil: neighbour cell
/// averages are matched exactly, neighbour averaged gradients in the least
/// squares sense. The pseudo-inverse is precomputed per cell.
class LeastSquaresOperator {
 public:
  /// Throws DegenerateStencil when the constraint system is rank deficient.
  static LeastSquaresOperator build(const Basis& target, std::span<const StencilGeometry> neighbors);

  QuadraticPoly solve(const State& mean, std::span<const State> neighbor_means,
                      std::span<const StateGradient> neighbor_grads) const;

  int neighbors() const { return n_; }

 private:
  int n_ = 0;
  double h_ = 1.0;
  std::vector<double> C_;  // kBasis x 4n, row-major; columns: n mean jumps then 3n scaled slopes
};

// Normalized linear weights of the multi-resolution WENO hierarchy.
constexpr double kGamma22 = 100.0 / 107.0;
constexpr double kGamma12 = 1.0 / 107.0;
constexpr double kGamma02 = 6.0 / 107.0;
constexpr double kGamma11 = 1.0 / 7.0;
constexpr double kGamma01 = 6.0 / 7.0;
constexpr double kWenoEps = 1e-16;

/// Smoothness indicator of a quadratic (coefficients of one component).
double beta_quadratic(const std::array<double, kBasis>& a, const Basis& b, double volume);
/// Smoothness indicator of a linear polynomial with gradient g.
double beta_linear(const Vec3& g, double volume);
/// beta0 from the neighbours' slopes: weighted combination of the per-neighbour
/// indicators, capped by the target cell's own indicator.
double beta0_from_neighbors(double beta_own, std::span<const double> beta_neighbors);

struct WenoWeights {
  double w22 = kGamma22;
  double w12 = kGamma12;
  double w02 = kGamma02;
};

WenoWeights nonlinear_weights(double beta2, double beta1, double beta0);

/// Component-wise nonlinear combination of P2, P1 and P0. The returned weights
/// (optional) are those of each component.
QuadraticPoly multires_weno(const QuadraticPoly& P2, const StateGradient& own_grad,
                            std::span<const StateGradient> neighbor_grads, const Basis& b, double volume,
                            std::array<WenoWeights, 5>* weights = nullptr);

struct CompressionParams {
  double C1 = 1.5;
  double C2 = 0.2;
  double Ks = 2.0;
  double Kt = 4.0;
  double eps = 1e-16;
  double eps_ma = 1e-8;  // floor on |Ma_l| + |Ma_r|; keeps round-off shear out of F
};

/// Face data for the compression factor at one Gaussian point.
struct CompressionInput {
  double Ql = 0, Qr = 0;                // density traces
  double Qbar_owner = 0, Qbar_neighbor = 0;  // adjacent cell means
  double pl = 1, pr = 1;
  double Ma2l = 0, Ma2r = 0, Ma3l = 0, Ma3r = 0;  // tangential Mach numbers
};

/// x such that alpha = 1 / (1 + x) at one Gaussian point.
double compression_excess(const CompressionInput& in, const CompressionParams& p = {});
inline double compression_factor_face(const CompressionInput& in, const CompressionParams& p = {}) {
  return 1.0 / (1.0 + compression_excess(in, p));
}

struct CellCompression {
  double alpha = 1.0;
  double one_minus_alpha = 0.0;  // computed without cancellation
};

/// Product of the point factors over all Gaussian points of a cell.
CellCompression compression_factor_cell(std::span<const double> excess);

/// True when the polynomial gives positive density and pressure at every point.
bool admissible_at(const QuadraticPoly& p, const Basis& b, std::span<const Vec3> points, const GasModel& gas);

}  // namespace cgks::recon
