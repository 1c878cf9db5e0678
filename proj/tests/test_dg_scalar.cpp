#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kfdg/dg_scalar.hpp"
#include "kfdg/errors.hpp"
#include "kfdg/kinetic_scalar.hpp"

using namespace kfdg;
using namespace kfdg::scalar;
using std::numbers::pi;

namespace {

SchemeConfig make(Variant v, double c, double mu, double cip = 10.0, double beta = 1.0) {
  SchemeConfig s;
  s.variant = v;
  s.penalty = cip;
  s.kinetics = {c, beta, mu};
  return s;
}

DGField random_field(int n, int k, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  DGField u(build_uniform_mesh(-1.0, 1.0, n, true), Basis(k));
  for (auto& x : u.coefficients()) x = d(rng);
  return u;
}

// <phi_i, L phi_j> over the whole mesh, i.e. the mass-weighted operator matrix
std::vector<double> weighted_matrix(int n, int k, const SchemeConfig& cfg) {
  const auto mesh = build_uniform_mesh(-1.0, 1.0, n, true);
  const Basis basis(k);
  DGField u(mesh, basis);
  const int N = static_cast<int>(u.coefficients().size());
  std::vector<double> A(N * N);
  for (int j = 0; j < N; ++j) {
    std::fill(u.coefficients().begin(), u.coefficients().end(), 0.0);
    u.coefficients()[j] = 1.0;
    const auto r = assemble_rhs(u, cfg);
    for (int e = 0; e < n; ++e)
      for (int m = 0; m <= k; ++m) {
        const int i = static_cast<int>(u.index(e, m, 0));
        A[i * N + j] = 0.5 * mesh.h() * basis.mass(m) * r.coefficients()[i];
      }
  }
  return A;
}

}  // namespace

TEST(ScalarVariant, Parse) {
  EXPECT_EQ(parse_variant("none"), Variant::Unstabilized);
  EXPECT_EQ(parse_variant("nipg"), Variant::NonSymmetric);
  EXPECT_EQ(parse_variant("sipg"), Variant::Symmetric);
  EXPECT_THROW(parse_variant("ldg"), InvalidArgument);
  EXPECT_EQ(make(Variant::NonSymmetric, 1, 1).epsilon(), -1.0);
  EXPECT_EQ(make(Variant::Symmetric, 1, 1).epsilon(), 1.0);
  EXPECT_EQ(make(Variant::Unstabilized, 1, 1).epsilon(), 0.0);
}

TEST(ScalarRhs, ConstantPreserved) {
  for (auto v : {Variant::Unstabilized, Variant::NonSymmetric, Variant::Symmetric})
    for (int k : {0, 1, 2, 3}) {
      const auto u = project([](double) { return 2.5; }, build_uniform_mesh(-1.0, 1.0, 7, true), Basis(k));
      const auto r = assemble_rhs(u, make(v, 1.0, 0.3));
      for (double x : r.coefficients()) EXPECT_NEAR(x, 0.0, 1e-13);
    }
}

TEST(ScalarRhs, InviscidVariantsAgree) {
  const auto u = random_field(9, 2, 5);
  const auto r0 = assemble_rhs(u, make(Variant::Unstabilized, 1.0, 0.0));
  for (auto v : {Variant::NonSymmetric, Variant::Symmetric}) {
    const auto r = assemble_rhs(u, make(v, 1.0, 0.0));
    for (std::size_t i = 0; i < r.coefficients().size(); ++i)
      EXPECT_EQ(r.coefficients()[i], r0.coefficients()[i]);
  }
}

TEST(ScalarRhs, NonPeriodicRejected) {
  DGField u(build_uniform_mesh(0.0, 1.0, 4, false), Basis(1));
  EXPECT_THROW(assemble_rhs(u, make(Variant::NonSymmetric, 1.0, 1.0)), UnsupportedBoundary);
}

TEST(ScalarRhs, LinearOperatorMatchesAssembly) {
  const auto u = random_field(12, 3, 9);
  const auto cfg = make(Variant::Symmetric, 0.7, 0.2);
  const auto r = assemble_rhs(u, cfg);
  const auto op = LinearOperator::compile(u.mesh(), u.basis(), cfg);
  std::vector<double> out(u.coefficients().size());
  op.apply(u.coefficients(), out);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], r.coefficients()[i], 1e-14 * (1.0 + std::abs(out[i])));
}

TEST(ScalarRhs, SymmetricVariantIsSymmetric) {
  // c = 0 leaves only the diffusive form and the symmetric jump dissipation
  for (int k : {1, 2}) {
    const int n = 5, N = n * (k + 1);
    const auto s = weighted_matrix(n, k, make(Variant::Symmetric, 0.0, 1.0));
    const auto ns = weighted_matrix(n, k, make(Variant::NonSymmetric, 0.0, 1.0));
    double asym_s = 0.0, asym_ns = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        asym_s = std::max(asym_s, std::abs(s[i * N + j] - s[j * N + i]));
        asym_ns = std::max(asym_ns, std::abs(ns[i * N + j] - ns[j * N + i]));
      }
    EXPECT_LT(asym_s, 1e-12);
    EXPECT_GT(asym_ns, 1e-3);
  }
}

TEST(ScalarRhs, GalerkinConsistency) {
  // residual of the projected exact solution against the projected time derivative
  auto defect = [](int n) {
    const double c = 1.0, mu = 0.5;
    const auto mesh = build_uniform_mesh(-1.0, 1.0, n, true);
    const Basis basis(2);
    const auto u = project([](double x) { return std::sin(pi * x); }, mesh, basis);
    const auto ut = project(
        [&](double x) { return -c * pi * std::cos(pi * x) - mu * pi * pi * std::sin(pi * x); }, mesh, basis);
    const auto r = assemble_rhs(u, make(Variant::Symmetric, c, mu));
    double s = 0.0;
    for (int e = 0; e < n; ++e)
      for (int m = 0; m <= 2; ++m) {
        const double d = r.coeff(e, m, 0) - ut.coeff(e, m, 0);
        s += 0.5 * mesh.h() * basis.mass(m) * d * d;
      }
    return std::sqrt(s);
  };
  const double d10 = defect(10), d20 = defect(20), d40 = defect(40);
  EXPECT_LT(d20, d10);
  EXPECT_LT(d40, d20);
  EXPECT_GT(std::log2(d20 / d40), 0.9);
}

TEST(ScalarEnergy, Values) {
  DGField zero(build_uniform_mesh(-1.0, 1.0, 4, true), Basis(2));
  EXPECT_EQ(energy(zero), 0.0);
  const auto u =
      project([](double x) { return -std::sin(pi * x); }, build_uniform_mesh(-1.0, 1.0, 80, true), Basis(3));
  EXPECT_NEAR(energy(u), 0.5, 1e-9);
  const double t = 0.05, mu = 1.0;
  const auto ue = project([&](double x) { return -std::exp(-mu * pi * pi * t) * std::sin(pi * (x - t)); },
                          build_uniform_mesh(-1.0, 1.0, 80, true), Basis(3));
  EXPECT_NEAR(energy(ue), 0.5 * std::exp(-2.0 * mu * pi * pi * t), 1e-9);
}

TEST(ScalarEnergy, NonSymmetricIdentity) {
  for (double cip : {0.0, 10.0})
    for (int k : {1, 2, 3})
      for (unsigned seed : {1u, 2u, 3u}) {
        const auto u = random_field(11, k, seed);
        const auto b = energy_budget(u, make(Variant::NonSymmetric, 0.8, 0.3, cip, 1.7));
        EXPECT_LE(std::abs(b.imbalance()), 1e-12 * b.scale()) << "k=" << k << " cip=" << cip;
        EXPECT_GE(b.dissipation_jump, 0.0);
        EXPECT_GE(b.dissipation_volume, 0.0);
        EXPECT_GE(b.dissipation_penalty, 0.0);
      }
}

TEST(ScalarEnergy, ConstantBudgetIsZero) {
  const auto u = project([](double) { return 1.3; }, build_uniform_mesh(-1.0, 1.0, 6, true), Basis(2));
  const auto b = energy_budget(u, make(Variant::NonSymmetric, 1.0, 1.0));
  EXPECT_NEAR(b.dissipation_jump, 0.0, 1e-14);
  EXPECT_NEAR(b.dissipation_volume, 0.0, 1e-14);
  EXPECT_NEAR(b.dissipation_penalty, 0.0, 1e-14);
  EXPECT_NEAR(b.residual_power, 0.0, 1e-13);
}

TEST(ScalarEnergy, OnlyForNonSymmetric) {
  const auto u = random_field(4, 1, 1);
  EXPECT_THROW(energy_budget(u, make(Variant::Symmetric, 1.0, 1.0)), NotApplicable);
  EXPECT_THROW(energy_budget(u, make(Variant::Unstabilized, 1.0, 1.0)), NotApplicable);
}

TEST(CellEnergyFluxes, Consistency) {
  // linear field: continuous value and slope at every face
  const auto mesh = build_uniform_mesh(-1.0, 1.0, 4, true);
  DGField u(mesh, Basis(1));
  for (int e = 0; e < 4; ++e) {
    u.coeff(e, 0, 0) = 0.7;
    u.coeff(e, 1, 0) = 0.0;
  }
  const auto cfg = make(Variant::NonSymmetric, 1.0, 0.4);
  const auto f = cell_energy_fluxes(u, cfg, 2);
  EXPECT_NEAR(f.convective, 0.5 * 0.49, 1e-14);
  EXPECT_NEAR(f.diffusive, 0.0, 1e-14);

  // slope g = 0.2 with u = 0.7 at face 2 (x = 0) on a single smooth line would
  // not be periodic, so set the traces on two elements directly
  DGField v(mesh, Basis(1));
  const double g = 0.2, h = mesh.h();
  v.coeff(1, 0, 0) = 0.7 - 0.5 * h * g;  // element left of x = 0
  v.coeff(1, 1, 0) = 0.5 * h * g;
  v.coeff(2, 0, 0) = 0.7 + 0.5 * h * g;  // element right of x = 0
  v.coeff(2, 1, 0) = 0.5 * h * g;
  const auto fv = cell_energy_fluxes(v, cfg, 2);
  EXPECT_NEAR(fv.convective, 0.5 * 0.49, 1e-14);
  EXPECT_NEAR(fv.diffusive, -0.4 * 0.7 * g, 1e-14);
}

TEST(CellEnergyFluxes, UnitJump) {
  DGField u(build_uniform_mesh(0.0, 2.0, 2, true), Basis(0));
  u.coeff(0, 0, 0) = 1.0;  // plus trace at face 1
  u.coeff(1, 0, 0) = 0.0;
  const auto f = cell_energy_fluxes(u, make(Variant::NonSymmetric, 1.0, 0.0), 1);
  const double F = kinetic::convective_numerical_flux(1.0, 0.0, 1.0, 1.0);
  EXPECT_NEAR(f.convective, 0.5 * F - 0.25, 1e-14);
  EXPECT_NEAR(f.convective, 0.2625636, 1e-7);
}

TEST(CellEnergyFluxes, PerCellDissipation) {
  for (int k : {1, 2})
    for (double mu : {0.0, 0.1, 1.0}) {
      const auto u = random_field(10, k, 17 + k);
      const auto cfg = make(Variant::NonSymmetric, 1.0, mu, 0.0);
      const auto r = assemble_rhs(u, cfg);
      const auto& mesh = u.mesh();
      for (int e = 0; e < 10; ++e) {
        double power = 0.0;
        for (int m = 0; m <= k; ++m)
          power += 0.5 * mesh.h() * u.basis().mass(m) * u.coeff(e, m, 0) * r.coeff(e, m, 0);
        const auto fr = cell_energy_fluxes(u, cfg, e + 1);
        const auto fl = cell_energy_fluxes(u, cfg, e);
        EXPECT_LE(power + fr.convective + fr.diffusive - fl.convective - fl.diffusive, 1e-12);
      }
    }
}
