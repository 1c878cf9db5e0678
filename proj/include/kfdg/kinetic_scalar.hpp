#pragma once

#include "kfdg/dg_field.hpp"

namespace kfdg::kinetic {

/// Parameters of the scalar Maxwellian g(v,u) = u sqrt(beta/pi) exp(-beta (v-c)^2)
/// and the diffusion coefficient of its Chapman-Enskog correction.
struct ScalarKinetics {
  double c = 1.0;
  double beta = 1.0;
  double mu = 0.0;

  void validate() const;
};

/// Half-space moments of the Maxwellian: A+ + A- = 1, B+ + B- = 0.
struct SplitCoeffs {
  double a_plus = 0.5;
  double a_minus = 0.5;
  double b_plus = 0.0;
  double b_minus = 0.0;
  double s = 0.0;  // c sqrt(beta)

  double a(Side side) const { return side == Side::Plus ? a_plus : a_minus; }
  double b(Side side) const { return side == Side::Plus ? b_plus : b_minus; }
};

SplitCoeffs split_coeffs(double c, double beta);

/// F+(u) or F-(u) = c u A± + u B±.
double convective_split_flux(double u, double c, Side side, const SplitCoeffs& coeffs);

/// KFVS flux F+(u+) + F-(u-), where u+ is the left trace and u- the right.
double convective_numerical_flux(double u_plus, double u_minus, double c, double beta);

/// Dissipation coefficient of the central-plus-dissipation form of the flux.
double dissipation_D(double c, double beta);

/// Split diffusive flux F_d±(u_x) = -mu u_x A±.
double diffusive_split_flux(double u_x, double mu, Side side, const SplitCoeffs& coeffs);

}  // namespace kfdg::kinetic
