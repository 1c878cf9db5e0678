#include "kfdg/kfvs_ns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kfdg/errors.hpp"
#include "kfdg/kinetic_scalar.hpp"

namespace kfdg::kfvs {

namespace {

kinetic::SplitCoeffs coeffs(const Primitive& w, const GasModel& g) {
  gas::check_physical(w);
  return kinetic::split_coeffs(w.u, w.beta(g));
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

Vec3 euler_flux(const Primitive& w, const GasModel& g) {
  const double p = w.p(g);
  const double re = w.rho * (g.cv() * w.T + 0.5 * w.u * w.u);
  return {w.rho * w.u, p + w.rho * w.u * w.u, (re + p) * w.u};
}

Vec3 euler_split(const Primitive& w, const GasModel& g, Side side) {
  const auto k = coeffs(w, g);
  const double a = k.a(side);
  const double b = k.b(side);
  const double p = w.p(g);
  const double re = w.rho * (g.cv() * w.T + 0.5 * w.u * w.u);
  return {w.rho * w.u * a + w.rho * b, (p + w.rho * w.u * w.u) * a + w.rho * w.u * b,
          (re + p) * w.u * a + (re + 0.5 * p) * b};
}

Vec3 euler_kfvs_flux(const Primitive& left, const Primitive& right, const GasModel& g) {
  const auto fp = euler_split(left, g, Side::Plus);
  const auto fm = euler_split(right, g, Side::Minus);
  return {fp[0] + fm[0], fp[1] + fm[1], fp[2] + fm[2]};
}

Vec3 viscous_flux(const Primitive& w, double tau, double q) { return {0.0, -tau, -w.u * tau + q}; }

Vec3 viscous_split(const Primitive& w, double tau, double q, const GasModel& g, Side side) {
  const auto k = coeffs(w, g);
  const double a = k.a(side);
  const double b = k.b(side);
  const double beta = w.beta(g);
  return {-(tau + 0.8 * beta * w.u * q) * beta * b, -tau * a + 0.8 * beta * q * b,
          (-w.u * tau + q) * a - (1.5 * tau + 0.4 * beta * w.u * q) * b};
}

Vec3 NsFlux::total() const {
  Vec3 t;
  for (int i = 0; i < 3; ++i) t[i] = convective[i] + diffusive_plus[i] + diffusive_minus[i];
  return t;
}

NsFlux ns_kfvs_flux(const TraceData& left, const TraceData& right, const GasModel& g) {
  NsFlux f;
  f.convective = euler_kfvs_flux(left.w, right.w, g);
  f.diffusive_plus = viscous_split(left.w, left.tau, left.q, g, Side::Plus);
  f.diffusive_minus = viscous_split(right.w, right.tau, right.q, g, Side::Minus);
  return f;
}

double eflux_diagnostic(const Vec3& v_plus, const Vec3& v_minus, const GasModel& g, int n_samples,
                        const ConvectiveFlux& flux) {
  if (n_samples < 2) throw InvalidArgument("E-flux diagnostic needs at least two samples");
  const auto wp = gas::entropy_to_primitive(v_plus, g);
  const auto wm = gas::entropy_to_primitive(v_minus, g);
  const Vec3 h = flux ? flux(wp, wm, g) : euler_kfvs_flux(wp, wm, g);
  const Vec3 jump{v_plus[0] - v_minus[0], v_plus[1] - v_minus[1], v_plus[2] - v_minus[2]};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / (n_samples - 1);
    Vec3 v;
    for (int c = 0; c < 3; ++c) v[c] = s * v_plus[c] + (1.0 - s) * v_minus[c];
    Primitive w;
    try {
      w = gas::entropy_to_primitive(v, g);
      gas::check_physical(w);
    } catch (const std::exception& e) {
      throw PositivityViolation("E-flux sample " + std::to_string(i) + " at s=" + std::to_string(s) +
                                ": " + e.what());
    }
    const auto f = euler_flux(w, g);
    best = std::min(best, dot(jump, Vec3{h[0] - f[0], h[1] - f[1], h[2] - f[2]}));
  }
  return best;
}

double entropy_potential(const Primitive& w, const GasModel& g) {
  gas::check_physical(w);
  (void)g;
  return w.rho * w.u;
}

double numerical_entropy_flux(const Primitive& left, const Primitive& right, const GasModel& g) {
  const auto h = euler_kfvs_flux(left, right, g);
  auto vl = gas::primitive_to_entropy(left, g);
  auto vr = gas::primitive_to_entropy(right, g);
  // eta'(U) rather than the shifted V, so the flux is consistent with entropy_pair
  vl[0] += gas::entropy_shift(g);
  vr[0] += gas::entropy_shift(g);
  const Vec3 avg{0.5 * (vl[0] + vr[0]), 0.5 * (vl[1] + vr[1]), 0.5 * (vl[2] + vr[2])};
  return dot(avg, h) - 0.5 * (entropy_potential(left, g) + entropy_potential(right, g));
}

double entropy_jump_dissipation(const Primitive& left, const Primitive& right, const GasModel& g) {
  const auto h = euler_kfvs_flux(left, right, g);
  const auto vl = gas::primitive_to_entropy(left, g);
  const auto vr = gas::primitive_to_entropy(right, g);
  const Vec3 jump{vl[0] - vr[0], vl[1] - vr[1], vl[2] - vr[2]};
  return 0.5 * (dot(jump, h) - (entropy_potential(left, g) - entropy_potential(right, g)));
}

}  // namespace kfdg::kfvs
