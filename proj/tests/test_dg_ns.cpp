#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kfdg/dg_ns.hpp"
#include "kfdg/errors.hpp"
#include "kfdg/kfvs_ns.hpp"
#include "kfdg/time_integration.hpp"

using namespace kfdg;
using namespace kfdg::ns;
using std::numbers::pi;

namespace {

NSSchemeConfig periodic_scheme(scalar::Variant v, double mu = 0.05) {
  NSSchemeConfig s;
  s.variant = v;
  s.penalty = 10.0;
  s.gas.gamma = 1.4;
  s.gas.viscosity = gas::ViscosityLaw::constant(mu);
  return s;
}

DGField uniform_field(const Mesh1D& mesh, int k, const Primitive& w, const GasModel& g) {
  const auto U = gas::primitive_to_conserved(w, g);
  return project([&](double, std::span<double> out) { std::copy(U.begin(), U.end(), out.begin()); }, mesh,
                 Basis(k), 3);
}

// smooth positive periodic field with random Fourier content on [0, 1)
DGField random_smooth(const Mesh1D& mesh, int k, const GasModel& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> a(-0.3, 0.3), ph(0.0, 2.0 * pi);
  const double ar = a(rng), au = a(rng), aT = a(rng), pr = ph(rng), pu = ph(rng), pT = ph(rng);
  return project(
      [&](double x, std::span<double> out) {
        const Primitive w{1.0 + ar * std::sin(2 * pi * x + pr), 0.5 + au * std::sin(4 * pi * x + pu),
                          1.0 + aT * std::cos(2 * pi * x + pT)};
        const auto U = gas::primitive_to_conserved(w, g);
        std::copy(U.begin(), U.end(), out.begin());
      },
      mesh, Basis(k), 3);
}

}  // namespace

TEST(NsScheme, Validation) {
  auto s = periodic_scheme(scalar::Variant::Symmetric);
  s.penalty = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  auto t = periodic_scheme(scalar::Variant::NonSymmetric);
  t.left = BoundaryOperator::adiabatic_wall();
  EXPECT_THROW(t.validate(), UnsupportedBoundary);
  auto w = periodic_scheme(scalar::Variant::NonSymmetric);
  w.left = w.right = BoundaryOperator::isothermal_wall(-1.0);
  EXPECT_THROW(w.validate(), ConfigError);
}

TEST(NsRhs, FreeStreamPreservation) {
  for (auto v : {scalar::Variant::Unstabilized, scalar::Variant::NonSymmetric, scalar::Variant::Symmetric})
    for (int k : {1, 2, 3}) {
      const auto s = periodic_scheme(v);
      const auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 8, true), k, {1.3, 0.7, 0.9}, s.gas);
      const auto r = assemble_ns_rhs(U, s);
      for (double x : r.coefficients()) EXPECT_NEAR(x, 0.0, 1e-12);
    }
}

TEST(NsRhs, FarfieldFreeStream) {
  auto s = periodic_scheme(scalar::Variant::Symmetric);
  const Primitive w{0.8, 1.2, 1.1};
  s.left = s.right = BoundaryOperator::far_field(w);
  const auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 6, false), 2, w, s.gas);
  const auto r = assemble_ns_rhs(U, s);
  for (double x : r.coefficients()) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(NsRhs, InviscidIgnoresVariant) {
  const auto mesh = build_uniform_mesh(0.0, 1.0, 10, true);
  auto a = periodic_scheme(scalar::Variant::NonSymmetric);
  auto b = periodic_scheme(scalar::Variant::Symmetric, 3.0);
  a.viscous = b.viscous = false;
  const auto U = random_smooth(mesh, 2, a.gas, 3);
  const auto ra = assemble_ns_rhs(U, a), rb = assemble_ns_rhs(U, b);
  for (std::size_t i = 0; i < ra.coefficients().size(); ++i) EXPECT_EQ(ra.coefficients()[i], rb.coefficients()[i]);
}

TEST(NsRhs, MeshAndBoundaryMismatch) {
  const auto s = periodic_scheme(scalar::Variant::NonSymmetric);
  const auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 4, false), 1, {1.0, 0.0, 1.0}, s.gas);
  EXPECT_THROW(assemble_ns_rhs(U, s), UnsupportedBoundary);
}

TEST(NsRhs, PositivityViolationCarriesElement) {
  const auto s = periodic_scheme(scalar::Variant::NonSymmetric);
  auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 5, true), 1, {1.0, 0.0, 1.0}, s.gas);
  U.coeff(3, 0, 2) = -1.0;  // negative energy in element 3
  try {
    assemble_ns_rhs(U, s);
    FAIL() << "expected a positivity violation";
  } catch (const PositivityViolation& e) {
    EXPECT_EQ(e.element(), 3);
    EXPECT_GE(e.point(), 0);
  }
}

TEST(NsRhs, PeriodicConservation) {
  const auto mesh = build_uniform_mesh(0.0, 1.0, 16, true);
  for (auto v : {scalar::Variant::NonSymmetric, scalar::Variant::Symmetric}) {
    const auto s = periodic_scheme(v);
    const auto U0 = random_smooth(mesh, 2, s.gas, 5);
    std::vector<double> u(U0.coefficients().begin(), U0.coefficients().end());
    DGField work(U0);
    const time::Rhs rhs = [&](std::span<const double> a, std::span<double> out) {
      std::copy(a.begin(), a.end(), work.coefficients().begin());
      assemble_ns_rhs(work, s, out);
    };
    auto totals = [&](const std::vector<double>& c) {
      gas::Vec3 t{};
      for (int e = 0; e < mesh.n_elements; ++e)
        for (int q = 0; q < 3; ++q) t[q] += mesh.h() * c[U0.index(e, 0, q)];
      return t;
    };
    const auto before = totals(u);
    time::rk3_step(u, 1e-3, rhs);
    const auto after = totals(u);
    for (int q = 0; q < 3; ++q) EXPECT_NEAR(after[q], before[q], 1e-12 * (1.0 + std::abs(before[q])));
  }
}

TEST(Gamma, AdiabaticWall) {
  GasModel g;
  const Primitive w{1.2, 0.4, 1.3};
  const auto V = gas::primitive_to_entropy(w, g);
  const gas::Vec3 grad{0.1, -0.2, 0.3};
  const auto t = apply_gamma(V, grad, BoundaryOperator::adiabatic_wall(), g);
  const auto wg = gas::entropy_to_primitive(t.v_int, g);
  EXPECT_EQ(wg.u, 0.0);
  EXPECT_NEAR(wg.T, w.T, 1e-14);
  const auto d = gas::gradient_from_entropy(wg, t.grad_int, g);
  EXPECT_EQ(gas::transport(wg, g, d.u_x, d.T_x).q, 0.0);
  EXPECT_EQ(gamma_test_gradient(grad, BoundaryOperator::adiabatic_wall())[2], 0.0);
}

TEST(Gamma, IsothermalFixedPoint) {
  GasModel g;
  const Primitive w{0.9, 0.0, 1.7};
  const auto V = gas::primitive_to_entropy(w, g);
  const gas::Vec3 grad{0.3, 0.1, -0.2};
  const auto t = apply_gamma(V, grad, BoundaryOperator::isothermal_wall(1.7), g);
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(t.v_int[c], V[c], 1e-15);
    EXPECT_NEAR(t.v_ext[c], V[c], 1e-15);
    EXPECT_EQ(t.grad_int[c], grad[c]);
  }
}

TEST(Gamma, FarfieldSameState) {
  GasModel g;
  const Primitive w{0.9, 0.5, 1.7};
  const auto V = gas::primitive_to_entropy(w, g);
  const auto t = apply_gamma(V, {0.0, 0.0, 0.0}, BoundaryOperator::far_field(w), g);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(t.v_ext[c], t.v_int[c], 1e-14);
  const auto bad = gas::Vec3{0.0, 0.0, 1.0};
  EXPECT_THROW(apply_gamma(bad, {}, BoundaryOperator::far_field(w), g), PositivityViolation);
}

TEST(Mms, SourceMatchesFluxDerivative) {
  GasModel g;
  g.gamma = 1.4;
  g.R = 1.0;
  g.prandtl = 2.0 / 3.0;
  g.viscosity = gas::ViscosityLaw::constant(0.01);
  auto flux = [&](double x) {
    const auto m = mms_exact(x);
    const auto t = gas::transport(m.w, g, m.u_x, m.T_x);
    const auto F = kfvs::euler_flux(m.w, g), G = kfvs::viscous_flux(m.w, t.tau, t.q);
    return gas::Vec3{F[0] + G[0], F[1] + G[1], F[2] + G[2]};
  };
  for (double x : {0.2, 0.5, 0.77}) {
    const double h = 1e-3;
    const auto f = mms_source(x, g);
    const auto p2 = flux(x + 2 * h), p1 = flux(x + h), m1 = flux(x - h), m2 = flux(x - 2 * h);
    for (int c = 0; c < 3; ++c) {
      const double fd = (-p2[c] + 8.0 * p1[c] - 8.0 * m1[c] + m2[c]) / (12.0 * h);
      EXPECT_NEAR(f[c], fd, 1e-7) << "x=" << x << " c=" << c;
    }
  }
}

TEST(Mms, ExactSolutionDerivatives) {
  for (double x : {0.1, 0.45, 0.9}) {
    const double h = 1e-5;
    const auto m = mms_exact(x), p = mms_exact(x + h), q = mms_exact(x - h);
    EXPECT_NEAR(m.rho_x, (p.w.rho - q.w.rho) / (2 * h), 1e-8);
    EXPECT_NEAR(m.u_x, (p.w.u - q.w.u) / (2 * h), 1e-8);
    EXPECT_NEAR(m.T_x, (p.w.T - q.w.T) / (2 * h), 1e-8);
    EXPECT_NEAR(m.u_xx, (p.u_x - q.u_x) / (2 * h), 1e-7);
    EXPECT_NEAR(m.T_xx, (p.T_x - q.T_x) / (2 * h), 1e-7);
  }
  const auto w0 = mms_exact(0.0).w, w1 = mms_exact(1.0).w;
  EXPECT_EQ(w0.u, 0.0);
  EXPECT_NEAR(w1.u, 0.0, 1e-15);
  EXPECT_EQ(mms_exact(0.0).T_x, 0.0);
  EXPECT_NEAR(mms_exact(1.0).T_x, 0.0, 1e-15);
}

TEST(CellEntropy, UniformStateIsZero) {
  const auto s = periodic_scheme(scalar::Variant::NonSymmetric);
  const auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 6, true), 2, {1.1, 0.3, 0.8}, s.gas);
  for (const auto& c : cell_entropy_balance(U, s)) {
    EXPECT_NEAR(c.entropy_rate, 0.0, 1e-12);
    EXPECT_NEAR(c.flux_out, 0.0, 1e-12);
    EXPECT_NEAR(c.jump_dissipation, 0.0, 1e-12);
    EXPECT_NEAR(c.penalty_dissipation, 0.0, 1e-12);
    EXPECT_NEAR(c.production, 0.0, 1e-12);
  }
}

TEST(CellEntropy, ProductionNonPositive) {
  const auto mesh = build_uniform_mesh(0.0, 1.0, 12, true);
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto s = periodic_scheme(scalar::Variant::NonSymmetric, 0.1);
    const auto U = random_smooth(mesh, 2, s.gas, seed);
    for (const auto& c : cell_entropy_balance(U, s)) {
      EXPECT_LE(c.production, 1e-12);
      EXPECT_GE(c.jump_dissipation, -1e-12);
      EXPECT_GE(c.penalty_dissipation, -1e-12);
    }
  }
}

TEST(CellEntropy, OnlyNonSymmetric) {
  const auto s = periodic_scheme(scalar::Variant::Symmetric);
  const auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 4, true), 1, {1.0, 0.0, 1.0}, s.gas);
  EXPECT_THROW(cell_entropy_balance(U, s), NotApplicable);
}

TEST(NsDt, RestState) {
  GasModel g;
  const auto U = uniform_field(build_uniform_mesh(0.0, 1.0, 10, true), 1, {1.0, 0.0, 1.0}, g);
  EXPECT_NEAR(compute_dt(U, g, 5.0), 5.0 * 0.1 / std::sqrt(1.4), 1e-14);
}
