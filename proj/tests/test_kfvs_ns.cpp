#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kfdg/errors.hpp"
#include "kfdg/gas_state.hpp"
#include "kfdg/kfvs_ns.hpp"

using namespace kfdg;
using namespace kfdg::gas;
using namespace kfdg::kfvs;
using std::numbers::pi;

namespace {

GasModel air() {
  GasModel g;
  g.gamma = 1.4;
  g.viscosity = ViscosityLaw::constant(0.1);
  return g;
}

// Half-range moments of the 1-D Maxwellian carrying the internal energy as a
// velocity-independent term.
Vec3 half_flux_by_quadrature(const Primitive& w, const GasModel& g, bool positive) {
  const double beta = w.beta(g);
  const double e_int = g.R * w.T / (g.gamma - 1.0) - 0.5 * g.R * w.T;
  auto f = [&](double v) { return w.rho * std::sqrt(beta / pi) * std::exp(-beta * (v - w.u) * (v - w.u)); };
  boost::math::quadrature::exp_sinh<double> q;
  const double inf = std::numeric_limits<double>::infinity();
  const double sgn = positive ? 1.0 : -1.0;
  // v = sgn x over x > 0
  auto mom = [&](auto psi) { return q.integrate([&](double x) {
      const double fx = f(sgn * x);
      return fx == 0.0 ? 0.0 : psi(sgn * x) * fx;
    }, 0.0, inf); };
  return {mom([](double v) { return v; }), mom([](double v) { return v * v; }),
          mom([&](double v) { return v * (0.5 * v * v + e_int); })};
}

}  // namespace

TEST(EulerSplit, RestState) {
  const auto g = air();
  const Primitive w{1.0, 0.0, 1.0};
  const auto fp = euler_split(w, g, Side::Plus);
  EXPECT_NEAR(fp[0], 0.3989423, 1e-7);
  EXPECT_NEAR(fp[1], 0.5, 1e-15);
  EXPECT_NEAR(fp[2], (2.5 + 0.5) * 0.3989423, 1e-6);
  EXPECT_NEAR(fp[2], 1.1968268, 1e-7);
  const auto F = euler_kfvs_flux(w, w, g);
  EXPECT_NEAR(F[0], 0.0, 1e-15);
  EXPECT_NEAR(F[1], 1.0, 1e-15);
  EXPECT_NEAR(F[2], 0.0, 1e-15);
}

TEST(EulerSplit, MatchesKineticMoments) {
  const auto g = air();
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> r(0.3, 3.0), u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Primitive w{r(rng), u(rng), r(rng)};
    for (bool pos : {true, false}) {
      const auto q = half_flux_by_quadrature(w, g, pos);
      const auto f = euler_split(w, g, pos ? Side::Plus : Side::Minus);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(f[c], q[c], 1e-10 * (1.0 + std::abs(q[c])));
    }
  }
}

TEST(EulerSplit, SumIsEulerFlux) {
  const auto g = air();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> r(0.1, 10.0), u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Primitive w{r(rng), u(rng), r(rng)};
    const auto a = euler_split(w, g, Side::Plus), b = euler_split(w, g, Side::Minus), F = euler_flux(w, g);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(a[c] + b[c], F[c], 1e-13 * (1.0 + std::abs(F[c])));
    const auto H = euler_kfvs_flux(w, w, g);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(H[c], F[c], 1e-13 * (1.0 + std::abs(F[c])));
  }
}

TEST(EulerSplit, SupersonicUpwinding) {
  const auto g = air();
  const Primitive w{1.0, 6.0 / std::sqrt(0.5), 1.0};  // u sqrt(beta) = 6
  const auto fp = euler_split(w, g, Side::Plus), fm = euler_split(w, g, Side::Minus);
  for (int c = 0; c < 3; ++c) EXPECT_LE(std::abs(fm[c]), 1e-8 * std::abs(fp[c]));
}

TEST(EulerSplit, SodLikeMassFlux) {
  const auto g = air();
  const Primitive l{1.0, 0.0, 1.0}, r{0.125, 0.0, 0.8};  // p = 1 and 0.1
  const double bl = 1.0 / (2.0 * std::sqrt(pi * l.beta(g))), br = -1.0 / (2.0 * std::sqrt(pi * r.beta(g)));
  const auto H = euler_kfvs_flux(l, r, g);
  EXPECT_NEAR(H[0], l.rho * bl + r.rho * br, 1e-14);
  EXPECT_GT(H[0], 0.0);
}

TEST(ViscousSplit, RestValues) {
  const auto g = air();
  const Primitive w{1.0, 0.0, 1.0};
  const double tau0 = 0.3, beta = w.beta(g);
  for (auto side : {Side::Plus, Side::Minus}) {
    const double B = (side == Side::Plus ? 1.0 : -1.0) / (2.0 * std::sqrt(pi * beta));
    const auto G = viscous_split(w, tau0, 0.0, g, side);
    EXPECT_NEAR(G[0], -tau0 * beta * B, 1e-14);
    EXPECT_NEAR(G[1], -tau0 / 2.0, 1e-14);
    EXPECT_NEAR(G[2], -1.5 * tau0 * B, 1e-14);
    const auto Z = viscous_split(w, 0.0, 0.0, g, side);
    for (double z : Z) EXPECT_EQ(z, 0.0);
  }
}

TEST(ViscousSplit, SumIsViscousFlux) {
  const auto g = air();
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> r(0.2, 4.0), d(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Primitive w{r(rng), d(rng), r(rng)};
    const double tau = d(rng), q = d(rng);
    const auto a = viscous_split(w, tau, q, g, Side::Plus), b = viscous_split(w, tau, q, g, Side::Minus);
    const auto G = viscous_flux(w, tau, q);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(a[c] + b[c], G[c], 1e-13 * (1.0 + std::abs(G[c])));
  }
}

TEST(NsFlux, Consistency) {
  const auto g = air();
  const TraceData t{{1.3, 0.4, 0.9}, 0.2, -0.1};
  const auto f = ns_kfvs_flux(t, t, g);
  const auto F = euler_flux(t.w, g), G = viscous_flux(t.w, t.tau, t.q);
  const auto H = f.total();
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(H[c], F[c] + G[c], 1e-14);
  const TraceData a{{1.0, 0.1, 1.0}, 0.0, 0.0}, b{{0.5, -0.2, 1.4}, 0.0, 0.0};
  const auto Hab = ns_kfvs_flux(a, b, g).total(), Hc = euler_kfvs_flux(a.w, b.w, g);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(Hab[c], Hc[c]);
}

TEST(EFlux, EqualStatesGiveZero) {
  const auto g = air();
  const auto V = primitive_to_entropy({1.2, 0.3, 0.8}, g);
  EXPECT_EQ(eflux_diagnostic(V, V, g), 0.0);
}

TEST(EFlux, NonNegativeOnRandomPairs) {
  const auto g = air();
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> ratio(std::log(0.1), std::log(10.0)), u(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const Primitive a{1.0, u(rng), 1.0};
    const Primitive b{std::exp(ratio(rng)), u(rng), std::exp(ratio(rng))};
    EXPECT_GE(eflux_diagnostic(primitive_to_entropy(a, g), primitive_to_entropy(b, g), g), -1e-12);
  }
}

TEST(EFlux, CentralFluxViolates) {
  const auto g = air();
  const ConvectiveFlux central = [](const Primitive& l, const Primitive& r, const GasModel& gm) {
    const auto a = euler_flux(l, gm), b = euler_flux(r, gm);
    return Vec3{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
  };
  std::mt19937 rng(78);
  std::uniform_real_distribution<double> ratio(std::log(0.1), std::log(10.0)), u(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Primitive a{1.0, u(rng), 1.0};
    const Primitive b{std::exp(ratio(rng)), u(rng), std::exp(ratio(rng))};
    worst = std::min(worst, eflux_diagnostic(primitive_to_entropy(a, g), primitive_to_entropy(b, g), g, 33, central));
  }
  EXPECT_LT(worst, -1e-6);
}

TEST(EFlux, ReportsNonPhysicalSample) {
  const auto g = air();
  EXPECT_THROW(eflux_diagnostic({0.0, 0.0, -1.0}, {0.0, 0.0, 1.0}, g), InvalidArgument);
}

TEST(EntropyFlux, ConsistentAndDissipative) {
  const auto g = air();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> r(0.2, 3.0), u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Primitive a{r(rng), u(rng), r(rng)}, b{r(rng), u(rng), r(rng)};
    const auto pair = entropy_pair(primitive_to_conserved(a, g), g);
    EXPECT_NEAR(numerical_entropy_flux(a, a, g), pair.theta, 1e-12 * (1.0 + std::abs(pair.theta)));
    EXPECT_NEAR(entropy_jump_dissipation(a, a, g), 0.0, 1e-13);
    EXPECT_NEAR(entropy_potential(a, g), a.rho * a.u, 1e-15);
    EXPECT_GE(entropy_jump_dissipation(a, b, g), -1e-12);
  }
}
