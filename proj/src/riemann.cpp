#include <cmath>
#include <stdexcept>

#include "cgks/harness.hpp"

namespace cgks::harness {

namespace {

// Pressure function of one side and its derivative (shock or rarefaction branch).
void side_function(double p, const Riemann1D& s, double c, double g, double& f, double& df) {
  if (p > s.p) {
    const double A = 2.0 / ((g + 1.0) * s.rho);
    const double B = (g - 1.0) / (g + 1.0) * s.p;
    const double q = std::sqrt(A / (p + B));
    f = (p - s.p) * q;
    df = q * (1.0 - 0.5 * (p - s.p) / (p + B));
  } else {
    const double r = p / s.p;
    f = 2.0 * c / (g - 1.0) * (std::pow(r, (g - 1.0) / (2.0 * g)) - 1.0);
    df = 1.0 / (s.rho * c) * std::pow(r, -(g + 1.0) / (2.0 * g));
  }
}

}  // namespace

ExactRiemann::ExactRiemann(Riemann1D left, Riemann1D right, double gamma) : l_(left), r_(right), g_(gamma) {
  if (!(l_.rho > 0 && l_.p > 0 && r_.rho > 0 && r_.p > 0)) throw InvalidState("Riemann data must be positive");
  cl_ = std::sqrt(g_ * l_.p / l_.rho);
  cr_ = std::sqrt(g_ * r_.p / r_.rho);
  const double du = r_.u - l_.u;
  if (2.0 * (cl_ + cr_) / (g_ - 1.0) <= du) throw InvalidState("Riemann data generate vacuum");

  // Two-rarefaction guess, then Newton on f_l(p) + f_r(p) + du = 0.
  const double z = (g_ - 1.0) / (2.0 * g_);
  double p = std::pow((cl_ + cr_ - 0.5 * (g_ - 1.0) * du) / (cl_ / std::pow(l_.p, z) + cr_ / std::pow(r_.p, z)), 1.0 / z);
  p = std::max(p, 1e-12);
  for (int it = 0; it < 100; ++it) {
    double fl, dfl, fr, dfr;
    side_function(p, l_, cl_, g_, fl, dfl);
    side_function(p, r_, cr_, g_, fr, dfr);
    const double next = std::max(p - (fl + fr + du) / (dfl + dfr), 1e-14);
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < 1e-15) break;
  }
  double fl, dfl, fr, dfr;
  side_function(p, l_, cl_, g_, fl, dfl);
  side_function(p, r_, cr_, g_, fr, dfr);
  p_star_ = p;
  u_star_ = 0.5 * (l_.u + r_.u) + 0.5 * (fr - fl);
}

Riemann1D ExactRiemann::sample(double xi) const {
  const double g = g_;
  const double gm = (g - 1.0) / (g + 1.0);
  if (xi <= u_star_) {
    const Riemann1D& s = l_;
    const double c = cl_;
    if (p_star_ > s.p) {
      const double pr = p_star_ / s.p;
      const double speed = s.u - c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
      if (xi <= speed) return s;
      return {s.rho * (pr + gm) / (gm * pr + 1.0), u_star_, p_star_};
    }
    const double head = s.u - c;
    const double c_star = c * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ - c_star;
    if (xi <= head) return s;
    if (xi >= tail) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
    const double k = 2.0 / (g + 1.0) + gm / c * (s.u - xi);
    return {s.rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * s.u + xi),
            s.p * std::pow(k, 2.0 * g / (g - 1.0))};
  }
  const Riemann1D& s = r_;
  const double c = cr_;
  if (p_star_ > s.p) {
    const double pr = p_star_ / s.p;
    const double speed = s.u + c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
    if (xi >= speed) return s;
    return {s.rho * (pr + gm) / (gm * pr + 1.0), u_star_, p_star_};
  }
  const double head = s.u + c;
  const double c_star = c * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star_ + c_star;
  if (xi >= head) return s;
  if (xi <= tail) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
  const double k = 2.0 / (g + 1.0) - gm / c * (s.u - xi);
  return {s.rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * s.u + xi),
          s.p * std::pow(k, 2.0 * g / (g - 1.0))};
}

}  // namespace cgks::harness
