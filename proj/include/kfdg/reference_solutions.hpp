#pragma once

#include <string>
#include <vector>

#include "kfdg/gas_state.hpp"

namespace kfdg::reference {

/// -exp(-mu pi^2 t) sin(pi (x - c t)) on (-1, 1).
double exact_convdiff(double x, double t, double c, double mu);
double exact_convdiff_dx(double x, double t, double c, double mu);

/// 4 + (8/pi) e^{-mu (pi/2)^2 t} sin(pi (x-ct)/2) + (16/(3 pi)) e^{-mu (3pi/2)^2 t} sin(3 pi (x-ct)/2)
/// on (0, 4).
double exact_test3(double x, double t, double c, double mu);
double exact_test3_dx(double x, double t, double c, double mu);

/// Downstream state of a normal shock; velocity from rho u = const.
gas::Primitive rankine_hugoniot(double mach, double gamma, const gas::Primitive& upstream, double R = 1.0);

struct ShockSetup {
  double mach = 1.5;
  double gamma = 5.0 / 3.0;
  double prandtl = 2.0 / 3.0;
  double omega = 0.8;
  double mu1 = 0.0005;
  double R = 1.0;
  double rho1 = 1.0;
  double T1 = 1.0;

  double u1() const;
  gas::GasModel gas() const;
  gas::Primitive upstream() const;
  void validate() const;
};

struct ProfileSample {
  double x = 0.0;
  double rho = 0.0;
  double u = 0.0;
  double T = 0.0;
  double tau = 0.0;
  double q = 0.0;
};

/// Viscous shock profile from the two first-order ODEs in (u, T) obtained from
/// the conserved mass, momentum and energy fluxes. Centered so that
/// u(0) = (u1 + u2)/2. Outside the integrated range the profile relaxes
/// exponentially toward the end states.
class ShockProfile {
 public:
  static ShockProfile compute(const ShockSetup& setup, double rtol = 1e-10);

  const ShockSetup& setup() const { return setup_; }
  gas::Primitive upstream() const { return setup_.upstream(); }
  gas::Primitive downstream() const { return down_; }

  ProfileSample at(double x) const;
  gas::Primitive state(double x) const;
  /// Samples on [x_min, x_max] (n >= 2, uniform).
  std::vector<ProfileSample> sample(double x_min, double x_max, int n) const;
  /// Width (u1-u2)/max|u_x|.
  double thickness() const;
  /// Range actually covered by the ODE solution.
  double x_first() const { return xs_.front(); }
  double x_last() const { return xs_.back(); }
  /// Largest relative defect of the mass, momentum and energy flux invariants
  /// over the stored nodes.
  double invariant_defect() const;

 private:
  ShockSetup setup_;
  gas::Primitive down_;
  double m_ = 0.0, P_ = 0.0, E_ = 0.0;
  std::vector<double> xs_, us_, ts_, dus_, dts_;
  double lambda_up_ = 0.0, lambda_down_ = 0.0;  // tail decay rates

  void rhs(double u, double T, double& du, double& dT) const;
};

/// Writes x rho u T tau q, one sample per line, whitespace separated.
void write_profile_table(const std::string& path, const std::vector<ProfileSample>& samples);

}  // namespace kfdg::reference
