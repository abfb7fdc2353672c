#include "cgks/reconstruction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace cgks::recon {

Basis Basis::of(const CellGeometry& g) {
  Basis b;
  b.center = g.centroid;
  b.h = g.dr;
  const double s = 1.0 / (g.dr * g.dr);
  for (int i = 0; i < 6; ++i) b.m[i] = g.second_moments[i] * s;
  return b;
}

std::array<double, kBasis> Basis::values(const Vec3& x) const {
  const Vec3 q = (1.0 / h) * (x - center);
  return {q.x, q.y, q.z, q.x * q.x - m[0], q.y * q.y - m[1], q.z * q.z - m[2], q.x * q.y - m[3], q.x * q.z - m[4],
          q.y * q.z - m[5]};
}

std::array<std::array<double, kBasis>, 3> Basis::derivatives(const Vec3& x) const {
  const Vec3 q = (1.0 / h) * (x - center);
  return {{{1, 0, 0, 2 * q.x, 0, 0, q.y, q.z, 0}, {0, 1, 0, 0, 2 * q.y, 0, q.x, 0, q.z},
           {0, 0, 1, 0, 0, 2 * q.z, 0, q.x, q.y}}};
}

QuadraticPoly linear_poly(const State& mean, const StateGradient& grad, double h) {
  QuadraticPoly p;
  p.mean = mean;
  for (int d = 0; d < 3; ++d) p.a[d] = h * grad[d];
  return p;
}

QuadraticPoly constant_poly(const State& mean) {
  QuadraticPoly p;
  p.mean = mean;
  return p;
}

PointValue evaluate(const QuadraticPoly& p, const Basis& b, const Vec3& x) {
  const auto v = b.values(x);
  const auto D = b.derivatives(x);
  PointValue r;
  r.W = p.mean;
  for (int k = 0; k < kBasis; ++k) {
    for (int c = 0; c < 5; ++c) r.W[c] += p.a[k][c] * v[k];
  }
  const double inv_h = 1.0 / b.h;
  for (int d = 0; d < 3; ++d) {
    State g{};
    for (int k = 0; k < kBasis; ++k) {
      if (D[d][k] == 0.0) continue;
      for (int c = 0; c < 5; ++c) g[c] += p.a[k][c] * D[d][k];
    }
    r.grad[d] = inv_h * g;
  }
  return r;
}

LeastSquaresOperator LeastSquaresOperator::build(const Basis& target, std::span<const StencilGeometry> neighbors) {
  const int n = static_cast<int>(neighbors.size());
  if (n < 3) throw DegenerateStencil("stencil has fewer than three neighbours");
  if (n > 6) throw DegenerateStencil("stencil has more than six neighbours");
  const double h = target.h;
  const auto& m = target.m;
  Eigen::MatrixXd A(n, kBasis), B(3 * n, kBasis);
  for (int j = 0; j < n; ++j) {
    const Vec3 d = (1.0 / h) * (neighbors[j].centroid - target.center);
    std::array<double, 6> S;
    for (int i = 0; i < 6; ++i) S[i] = neighbors[j].second_moments[i] / (h * h);
    A.row(j) << d.x, d.y, d.z, S[0] + d.x * d.x - m[0], S[1] + d.y * d.y - m[1], S[2] + d.z * d.z - m[2],
        S[3] + d.x * d.y - m[3], S[4] + d.x * d.z - m[4], S[5] + d.y * d.z - m[5];
    B.row(3 * j + 0) << 1, 0, 0, 2 * d.x, 0, 0, d.y, d.z, 0;
    B.row(3 * j + 1) << 0, 1, 0, 0, 2 * d.y, 0, d.x, 0, d.z;
    B.row(3 * j + 2) << 0, 0, 1, 0, 0, 2 * d.z, 0, d.x, d.y;
  }
  const int N = kBasis + n;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  K.topLeftCorner(kBasis, kBasis) = B.transpose() * B;
  K.topRightCorner(kBasis, n) = A.transpose();
  K.bottomLeftCorner(n, kBasis) = A;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, 4 * n);
  R.block(0, n, kBasis, 3 * n) = B.transpose();
  R.block(kBasis, 0, n, n).setIdentity();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  lu.setThreshold(1e-10);
  if (lu.rank() < N) throw DegenerateStencil("constrained least-squares system is rank deficient");
  const Eigen::MatrixXd X = lu.solve(R);

  LeastSquaresOperator op;
  op.n_ = n;
  op.h_ = h;
  op.C_.resize(static_cast<size_t>(kBasis) * 4 * n);
  for (int k = 0; k < kBasis; ++k)
    for (int c = 0; c < 4 * n; ++c) op.C_[k * 4 * n + c] = X(k, c);
  return op;
}

QuadraticPoly LeastSquaresOperator::solve(const State& mean, std::span<const State> neighbor_means,
                                          std::span<const StateGradient> neighbor_grads) const {
  const int n = n_;
  // Right-hand side columns: mean jumps, then slopes scaled by h.
  std::array<State, 24> rhs;
  for (int j = 0; j < n; ++j) {
    rhs[j] = neighbor_means[j] - mean;
    for (int d = 0; d < 3; ++d) rhs[n + 3 * j + d] = h_ * neighbor_grads[j][d];
  }
  QuadraticPoly p;
  p.mean = mean;
  const int cols = 4 * n;
  for (int k = 0; k < kBasis; ++k) {
    const double* row = &C_[k * cols];
    State acc{};
    for (int c = 0; c < cols; ++c) {
      for (int v = 0; v < 5; ++v) acc[v] += row[c] * rhs[c][v];
    }
    p.a[k] = acc;
  }
  return p;
}

double beta_quadratic(const std::array<double, kBasis>& a, const Basis& b, double volume) {
  // Hessian in scaled coordinates.
  const double H[3][3] = {{2 * a[3], a[6], a[7]}, {a[6], 2 * a[4], a[8]}, {a[7], a[8], 2 * a[5]}};
  const double M[3][3] = {{b.m[0], b.m[3], b.m[4]}, {b.m[3], b.m[1], b.m[5]}, {b.m[4], b.m[5], b.m[2]}};
  double first = 0.0;
  for (int i = 0; i < 3; ++i) {
    double quad = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) quad += H[i][j] * M[j][k] * H[i][k];
    first += a[i] * a[i] + quad;
  }
  double second = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) second += H[i][j] * H[i][j];
  const double v23 = std::cbrt(volume * volume);
  const double h2 = b.h * b.h;
  return v23 / h2 * first + v23 * v23 / (h2 * h2) * second;
}

double beta_linear(const Vec3& g, double volume) { return std::cbrt(volume * volume) * dot(g, g); }

double beta0_from_neighbors(double beta_own, std::span<const double> beta_neighbors) {
  const size_t n = beta_neighbors.size();
  if (n == 0) return beta_own;
  double sigma = 0.0;
  if (n > 1) {
    double sum = 0.0;
    for (size_t j = 0; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) sum += std::abs(beta_neighbors[j] - beta_neighbors[k]);
    sigma = std::pow(sum / (0.5 * n * (n - 1)), 4.0 / 3.0);
  }
  double wsum = 0.0, combined = 0.0;
  for (double b : beta_neighbors) {
    const double w = 1.0 + sigma / (kWenoEps + b);
    wsum += w;
    combined += w * b;
  }
  return std::min(combined / wsum, beta_own);
}

WenoWeights nonlinear_weights(double beta2, double beta1, double beta0) {
  const double sigma = std::pow(0.5 * (std::abs(beta2 - beta1) + std::abs(beta2 - beta0)), 4.0 / 3.0);
  const double w2 = kGamma22 * (1.0 + sigma / (kWenoEps + beta2));
  const double w1 = kGamma12 * (1.0 + sigma / (kWenoEps + beta1));
  const double w0 = kGamma02 * (1.0 + sigma / (kWenoEps + beta0));
  const double s = w2 + w1 + w0;
  return {w2 / s, w1 / s, w0 / s};
}

QuadraticPoly multires_weno(const QuadraticPoly& P2, const StateGradient& own_grad,
                            std::span<const StateGradient> neighbor_grads, const Basis& b, double volume,
                            std::array<WenoWeights, 5>* weights) {
  QuadraticPoly R;
  R.mean = P2.mean;
  std::array<double, 6> nb{};
  for (int c = 0; c < 5; ++c) {
    std::array<double, kBasis> a;
    for (int k = 0; k < kBasis; ++k) a[k] = P2.a[k][c];
    const Vec3 g{own_grad[0][c], own_grad[1][c], own_grad[2][c]};
    const double beta2 = beta_quadratic(a, b, volume);
    const double beta1 = beta_linear(g, volume);
    const size_t n = std::min<size_t>(neighbor_grads.size(), nb.size());
    for (size_t j = 0; j < n; ++j) {
      nb[j] = beta_linear({neighbor_grads[j][0][c], neighbor_grads[j][1][c], neighbor_grads[j][2][c]}, volume);
    }
    const double beta0 = beta0_from_neighbors(beta1, {nb.data(), n});
    const WenoWeights w = nonlinear_weights(beta2, beta1, beta0);
    if (weights) (*weights)[c] = w;
    // Hierarchy p1 = P1 / g11 - (g01 / g11) P0, p2 = P2 / g22 - (g12 / g22) p1 - (g02 / g22) P0;
    // the means coincide, so only the non-constant coefficients are combined.
    for (int k = 0; k < kBasis; ++k) {
      const double p1 = (k < 3 ? b.h * g[k] : 0.0) / kGamma11;
      const double p2 = (a[k] - kGamma12 * p1) / kGamma22;
      R.a[k][c] = w.w22 * p2 + w.w12 * p1;
    }
  }
  return R;
}

double compression_excess(const CompressionInput& in, const CompressionParams& p) {
  const double dQ = std::abs(in.Ql - in.Qr);
  if (dQ == 0.0) return 0.0;
  const double dQbar = std::abs(in.Qbar_owner - in.Qbar_neighbor);
  const double Dp = std::abs((in.pl - in.pr) / (in.pl + in.pr));
  const auto dma = [&](double l, double r) {
    return std::abs(l - r) / std::max(std::abs(l) + std::abs(r), p.eps_ma);
  };
  const double F = std::pow(p.C1 * Dp + p.C2 * (dma(in.Ma2l, in.Ma2r) + dma(in.Ma3l, in.Ma3r)), p.Kt);
  return std::pow(dQ / (dQbar + p.eps), p.Ks) * F;
}

CellCompression compression_factor_cell(std::span<const double> excess) {
  double s = 0.0;
  for (double x : excess) s += std::log1p(x);
  return {std::exp(-s), -std::expm1(-s)};
}

bool admissible_at(const QuadraticPoly& p, const Basis& b, std::span<const Vec3> points, const GasModel& gas) {
  for (const auto& x : points) {
    const auto v = b.values(x);
    State W = p.mean;
    for (int k = 0; k < kBasis; ++k)
      for (int c = 0; c < 5; ++c) W[c] += p.a[k][c] * v[k];
    if (!is_admissible(W, gas)) return false;
  }
  return true;
}

}  // namespace cgks::recon
