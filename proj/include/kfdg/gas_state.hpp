#pragma once

#include <array>

namespace kfdg::gas {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct ViscosityLaw {
  enum class Kind { Constant, Power };
  Kind kind = Kind::Constant;
  double mu0 = 0.01;     // constant value, or mu_1 at T_ref for the power law
  double t_ref = 1.0;
  double omega = 0.8;

  static ViscosityLaw constant(double mu) { return {Kind::Constant, mu, 1.0, 0.0}; }
  static ViscosityLaw power(double mu1, double t1, double omega) { return {Kind::Power, mu1, t1, omega}; }

  double operator()(double T) const;
  double derivative(double T) const;
};

struct GasModel {
  double gamma = 1.4;
  double R = 1.0;
  double prandtl = 2.0 / 3.0;
  ViscosityLaw viscosity;

  double cp() const { return gamma * R / (gamma - 1.0); }
  double cv() const { return R / (gamma - 1.0); }
  double mu(double T) const { return viscosity(T); }
  /// kappa = mu gamma R / ((gamma-1) Pr)
  double kappa(double T) const { return mu(T) * cp() / prandtl; }
  void validate() const;
};

struct Primitive {
  double rho = 1.0;
  double u = 0.0;
  double T = 1.0;

  double p(const GasModel& g) const { return rho * g.R * T; }
  double beta(const GasModel& g) const { return 1.0 / (2.0 * g.R * T); }
};

/// Throws PositivityViolation when rho <= 0 or T <= 0.
void check_physical(const Primitive& w);

/// U = (rho, rho u, rho e), e = eps + u^2/2, eps = p/(rho (gamma-1)).
Vec3 primitive_to_conserved(const Primitive& w, const GasModel& g);
Primitive conserved_to_primitive(const Vec3& U, const GasModel& g);

/// Physical entropy s = ln(p / rho^gamma).
double physical_entropy(const Primitive& w, const GasModel& g);

/// V = (-s/(gamma-1) - u^2/(2RT), u/(RT), -1/(RT)).
Vec3 primitive_to_entropy(const Primitive& w, const GasModel& g);
Primitive entropy_to_primitive(const Vec3& V, const GasModel& g);
Vec3 conserved_to_entropy(const Vec3& U, const GasModel& g);
Vec3 entropy_to_conserved(const Vec3& V, const GasModel& g);

/// V differs from the gradient of eta = -rho s/(gamma-1) by a constant in its
/// first component: eta'(U) = V + (entropy_shift, 0, 0). The shift is the
/// gradient of the linear function gamma rho/(gamma-1), so it changes neither
/// the Hessian nor any entropy balance.
double entropy_shift(const GasModel& g);

struct EntropyPair {
  double eta = 0.0;
  double theta = 0.0;
};

/// eta = -rho s/(gamma-1), theta = eta u.
EntropyPair entropy_pair(const Vec3& U, const GasModel& g);

/// dU/dV, symmetric positive definite. Throws InvalidArgument if V3 >= 0.
Mat3 dUdV(const Vec3& V, const GasModel& g);

struct Transport {
  double tau = 0.0;
  double q = 0.0;
};

/// tau = (4/3) mu u_x, q = -kappa T_x with mu = mu(T).
Transport transport(const Primitive& w, const GasModel& g, double u_x, double T_x);

/// (u_x, T_x) from a conserved-variable gradient at state U.
struct VelocityTemperatureGradient {
  double u_x = 0.0;
  double T_x = 0.0;
};
VelocityTemperatureGradient gradient_from_conserved(const Vec3& U, const Vec3& U_x, const GasModel& g);
/// (u_x, T_x) from an entropy-variable gradient at state w.
VelocityTemperatureGradient gradient_from_entropy(const Primitive& w, const Vec3& V_x, const GasModel& g);

/// d_x V from a conserved-variable gradient at state U.
Vec3 entropy_gradient(const Vec3& U, const Vec3& U_x, const GasModel& g);

double sound_speed(const Primitive& w, const GasModel& g);

}  // namespace kfdg::gas
