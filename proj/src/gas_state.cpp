#include "kfdg/gas_state.hpp"

#include <cmath>
#include <string>

#include "kfdg/errors.hpp"

namespace kfdg::gas {

double ViscosityLaw::operator()(double T) const {
  if (kind == Kind::Constant) return mu0;
  return mu0 * std::pow(T / t_ref, omega);
}

double ViscosityLaw::derivative(double T) const {
  if (kind == Kind::Constant) return 0.0;
  return mu0 * omega / t_ref * std::pow(T / t_ref, omega - 1.0);
}

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gamma", "must exceed 1");
  if (!(R > 0.0)) throw ConfigError("R", "must be positive");
  if (!(prandtl > 0.0)) throw ConfigError("prandtl", "must be positive");
  if (!(viscosity.mu0 >= 0.0)) throw ConfigError("mu", "must be non-negative");
  if (viscosity.kind == ViscosityLaw::Kind::Power && !(viscosity.t_ref > 0.0))
    throw ConfigError("mu_t_ref", "must be positive");
}

void check_physical(const Primitive& w) {
  if (!(w.rho > 0.0)) throw PositivityViolation("density " + std::to_string(w.rho));
  if (!(w.T > 0.0)) throw PositivityViolation("temperature " + std::to_string(w.T));
}

Vec3 primitive_to_conserved(const Primitive& w, const GasModel& g) {
  check_physical(w);
  return {w.rho, w.rho * w.u, w.rho * (g.cv() * w.T + 0.5 * w.u * w.u)};
}

Primitive conserved_to_primitive(const Vec3& U, const GasModel& g) {
  if (!(U[0] > 0.0)) throw PositivityViolation("density " + std::to_string(U[0]));
  Primitive w;
  w.rho = U[0];
  w.u = U[1] / U[0];
  const double internal = U[2] - 0.5 * U[1] * w.u;
  if (!(internal > 0.0)) throw PositivityViolation("internal energy " + std::to_string(internal));
  w.T = internal / (U[0] * g.cv());
  return w;
}

double physical_entropy(const Primitive& w, const GasModel& g) {
  return std::log(w.p(g)) - g.gamma * std::log(w.rho);
}

Vec3 primitive_to_entropy(const Primitive& w, const GasModel& g) {
  check_physical(w);
  const double rt = g.R * w.T;
  const double s = physical_entropy(w, g);
  return {-s / (g.gamma - 1.0) - 0.5 * w.u * w.u / rt, w.u / rt, -1.0 / rt};
}

Primitive entropy_to_primitive(const Vec3& V, const GasModel& g) {
  if (!(V[2] < 0.0)) throw InvalidArgument("invalid entropy state: V3 must be negative");
  Primitive w;
  const double rt = -1.0 / V[2];
  w.T = rt / g.R;
  w.u = V[1] * rt;
  const double s = -(g.gamma - 1.0) * (V[0] + 0.5 * w.u * w.u / rt);
  w.rho = std::exp((std::log(rt) - s) / (g.gamma - 1.0));
  return w;
}

Vec3 conserved_to_entropy(const Vec3& U, const GasModel& g) {
  return primitive_to_entropy(conserved_to_primitive(U, g), g);
}

Vec3 entropy_to_conserved(const Vec3& V, const GasModel& g) {
  return primitive_to_conserved(entropy_to_primitive(V, g), g);
}

double entropy_shift(const GasModel& g) { return g.gamma / (g.gamma - 1.0); }

EntropyPair entropy_pair(const Vec3& U, const GasModel& g) {
  const auto w = conserved_to_primitive(U, g);
  EntropyPair out;
  out.eta = -w.rho * physical_entropy(w, g) / (g.gamma - 1.0);
  out.theta = out.eta * w.u;
  return out;
}

Mat3 dUdV(const Vec3& V, const GasModel& g) {
  const auto w = entropy_to_primitive(V, g);
  const double rt = g.R * w.T;
  // derivatives of (ln rho, u, T) with respect to V
  const Vec3 dlnrho{1.0, w.u, rt / (g.gamma - 1.0) + 0.5 * w.u * w.u};
  const Vec3 du{0.0, rt, w.u * rt};
  const Vec3 dT{0.0, 0.0, rt * w.T};
  const double e = g.cv() * w.T + 0.5 * w.u * w.u;
  Mat3 a{};
  for (int j = 0; j < 3; ++j) {
    const double drho = w.rho * dlnrho[j];
    a[0][j] = drho;
    a[1][j] = w.u * drho + w.rho * du[j];
    a[2][j] = e * drho + w.rho * (g.cv() * dT[j] + w.u * du[j]);
  }
  return a;
}

Transport transport(const Primitive& w, const GasModel& g, double u_x, double T_x) {
  if (!(w.T > 0.0)) throw PositivityViolation("temperature " + std::to_string(w.T));
  return {4.0 / 3.0 * g.mu(w.T) * u_x, -g.kappa(w.T) * T_x};
}

VelocityTemperatureGradient gradient_from_conserved(const Vec3& U, const Vec3& U_x, const GasModel& g) {
  const auto w = conserved_to_primitive(U, g);
  VelocityTemperatureGradient d;
  d.u_x = (U_x[1] - w.u * U_x[0]) / w.rho;
  const double e = U[2] / U[0];
  const double eps_x = (U_x[2] - e * U_x[0]) / w.rho - w.u * d.u_x;
  d.T_x = eps_x / g.cv();
  return d;
}

VelocityTemperatureGradient gradient_from_entropy(const Primitive& w, const Vec3& V_x, const GasModel& g) {
  const double rt = g.R * w.T;
  return {rt * V_x[1] + w.u * rt * V_x[2], rt * w.T * V_x[2]};
}

Vec3 entropy_gradient(const Vec3& U, const Vec3& U_x, const GasModel& g) {
  const auto w = conserved_to_primitive(U, g);
  const auto d = gradient_from_conserved(U, U_x, g);
  const double rt = g.R * w.T;
  const double s_x = d.T_x / w.T - (g.gamma - 1.0) * U_x[0] / w.rho;
  return {-s_x / (g.gamma - 1.0) - w.u * d.u_x / rt + 0.5 * w.u * w.u * d.T_x / (rt * w.T),
          d.u_x / rt - w.u * d.T_x / (rt * w.T), d.T_x / (rt * w.T)};
}

double sound_speed(const Primitive& w, const GasModel& g) { return std::sqrt(g.gamma * g.R * w.T); }

}  // namespace kfdg::gas
