#include "kfdg/kinetic_scalar.hpp"

#include <cmath>
#include <numbers>

#include "kfdg/errors.hpp"

namespace kfdg::kinetic {

void ScalarKinetics::validate() const {
  if (!(beta > 0.0)) throw InvalidArgument("kinetic parameter beta must be positive");
  if (!(mu >= 0.0)) throw InvalidArgument("diffusion coefficient mu must be non-negative");
}

SplitCoeffs split_coeffs(double c, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("kinetic parameter beta must be positive");
  SplitCoeffs k;
  k.s = c * std::sqrt(beta);
  // erfc keeps the small half accurate in the upwind limit
  k.a_plus = 0.5 * std::erfc(-k.s);
  k.a_minus = 0.5 * std::erfc(k.s);
  k.b_plus = std::exp(-k.s * k.s) / (2.0 * std::sqrt(std::numbers::pi * beta));
  k.b_minus = -k.b_plus;
  return k;
}

double convective_split_flux(double u, double c, Side side, const SplitCoeffs& coeffs) {
  return c * u * coeffs.a(side) + u * coeffs.b(side);
}

double convective_numerical_flux(double u_plus, double u_minus, double c, double beta) {
  const auto k = split_coeffs(c, beta);
  return convective_split_flux(u_plus, c, Side::Plus, k) +
         convective_split_flux(u_minus, c, Side::Minus, k);
}

double dissipation_D(double c, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("kinetic parameter beta must be positive");
  const double s = c * std::sqrt(beta);
  return c * std::erf(s) + std::exp(-s * s) / std::sqrt(std::numbers::pi * beta);
}

double diffusive_split_flux(double u_x, double mu, Side side, const SplitCoeffs& coeffs) {
  return -mu * u_x * coeffs.a(side);
}

}  // namespace kfdg::kinetic
