#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "kfdg/errors.hpp"
#include "kfdg/kinetic_scalar.hpp"

using namespace kfdg;
using namespace kfdg::kinetic;
using std::numbers::pi;

namespace {

// half-range moments of the Maxwellian by quadrature
struct Moments {
  double a_plus, b_plus;
};

Moments half_range(double c, double beta) {
  auto g = [=](double v) { return std::sqrt(beta / pi) * std::exp(-beta * (v - c) * (v - c)); };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double a = integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity());
  const double b =
      integrator.integrate([&](double v) { return (v - c) * g(v); }, 0.0, std::numeric_limits<double>::infinity());
  return {a, b};
}

}  // namespace

TEST(SplitCoeffs, ZeroSpeed) {
  const auto s = split_coeffs(0.0, 1.0);
  EXPECT_DOUBLE_EQ(s.a_plus, 0.5);
  EXPECT_DOUBLE_EQ(s.a_minus, 0.5);
  EXPECT_NEAR(s.b_plus, 0.2820948, 1e-7);
  EXPECT_NEAR(s.b_minus, -0.2820948, 1e-7);
}

TEST(SplitCoeffs, UnitSpeedAgainstQuadrature) {
  const auto s = split_coeffs(1.0, 1.0);
  const auto q = half_range(1.0, 1.0);
  EXPECT_NEAR(s.a_plus, q.a_plus, 1e-12);
  EXPECT_NEAR(s.b_plus, q.b_plus, 1e-12);
  EXPECT_NEAR(s.a_plus, 0.9213504, 1e-7);
  EXPECT_NEAR(s.b_plus, 0.1037769, 1e-7);
}

TEST(SplitCoeffs, RandomAgainstQuadrature) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> cd(-3.0, 3.0), bd(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double c = cd(rng), beta = bd(rng);
    const auto s = split_coeffs(c, beta);
    const auto q = half_range(c, beta);
    EXPECT_NEAR(s.a_plus, q.a_plus, 1e-10);
    EXPECT_NEAR(s.b_plus, q.b_plus, 1e-10);
    EXPECT_NEAR(s.a_plus + s.a_minus, 1.0, 1e-15);
    EXPECT_NEAR(s.b_plus + s.b_minus, 0.0, 1e-15);
  }
}

TEST(SplitCoeffs, UpwindLimit) {
  const auto s = split_coeffs(1.0, 1e6);
  EXPECT_NEAR(s.a_plus, 1.0, 1e-12);
  EXPECT_NEAR(s.b_plus, 0.0, 1e-12);
  EXPECT_THROW(split_coeffs(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(split_coeffs(1.0, -1.0), InvalidArgument);
}

TEST(ConvectiveFlux, Consistency) {
  for (double u : {-2.0, 0.0, 0.7, 3.0})
    for (double c : {-1.0, 0.0, 1.0}) EXPECT_NEAR(convective_numerical_flux(u, u, c, 1.0), c * u, 1e-14);
}

TEST(ConvectiveFlux, UnitJump) {
  const double D = std::erf(1.0) + std::exp(-1.0) / std::sqrt(pi);
  EXPECT_NEAR(convective_numerical_flux(1.0, 0.0, 1.0, 1.0), 0.5 + 0.5 * D, 1e-14);
  EXPECT_NEAR(convective_numerical_flux(1.0, 0.0, 1.0, 1.0), 1.0251273, 1e-7);
  EXPECT_NEAR(convective_numerical_flux(1.0, 0.0, 1.0, 1e8), 1.0, 1e-6);
}

TEST(ConvectiveFlux, CentralPlusDissipationForm) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double up = d(rng), um = d(rng), c = d(rng), beta = 0.2 + std::abs(d(rng));
    const double expected = 0.5 * c * (up + um) + 0.5 * dissipation_D(c, beta) * (up - um);
    EXPECT_NEAR(convective_numerical_flux(up, um, c, beta), expected, 1e-13);
  }
}

TEST(Dissipation, Values) {
  EXPECT_NEAR(dissipation_D(0.0, 1.0), 1.0 / std::sqrt(pi), 1e-15);
  EXPECT_NEAR(dissipation_D(1.0, 1.0), 1.0502545, 1e-7);
  EXPECT_NEAR(dissipation_D(-1.0, 1.0), 1.0502545, 1e-7);
  EXPECT_NEAR(dissipation_D(2.0, 1e8), 2.0, 1e-6);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) EXPECT_GT(dissipation_D(d(rng), 0.01 + std::abs(d(rng))), 0.0);
}

TEST(DiffusiveFlux, Values) {
  const auto s0 = split_coeffs(0.0, 1.0);
  EXPECT_EQ(diffusive_split_flux(3.0, 0.0, Side::Plus, s0), 0.0);
  EXPECT_DOUBLE_EQ(diffusive_split_flux(1.0, 1.0, Side::Plus, s0), -0.5);
  EXPECT_DOUBLE_EQ(diffusive_split_flux(1.0, 1.0, Side::Minus, s0), -0.5);
  const auto s1 = split_coeffs(1.0, 1.0);
  EXPECT_NEAR(diffusive_split_flux(2.0, 1.0, Side::Plus, s1), -2.0 * 0.5 * std::erfc(-1.0), 1e-15);
  EXPECT_NEAR(diffusive_split_flux(2.0, 1.0, Side::Plus, s1), -1.8427008, 1e-7);
}
