#include "kfdg/dg_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfdg/errors.hpp"

namespace kfdg::scalar {

Variant parse_variant(std::string_view name) {
  if (name == "none") return Variant::Unstabilized;
  if (name == "nipg") return Variant::NonSymmetric;
  if (name == "sipg") return Variant::Symmetric;
  throw InvalidArgument("unknown scheme variant '" + std::string(name) + "' (expected none, nipg, sipg)");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Unstabilized: return "none";
    case Variant::NonSymmetric: return "nipg";
    case Variant::Symmetric: return "sipg";
  }
  return "?";
}

double SchemeConfig::epsilon() const {
  switch (variant) {
    case Variant::NonSymmetric: return -1.0;
    case Variant::Symmetric: return 1.0;
    case Variant::Unstabilized: return 0.0;
  }
  return 0.0;
}

void SchemeConfig::validate() const {
  kinetics.validate();
  if (!(penalty >= 0.0)) throw InvalidArgument("penalty constant must be non-negative");
  if (variant == Variant::Symmetric && !(penalty > 0.0))
    throw InvalidArgument("symmetric variant requires a positive penalty constant");
}

namespace {

struct FaceTraces {
  int left = 0;
  int right = 0;
  double u_plus = 0.0;   // from the left element
  double u_minus = 0.0;  // from the right element
  double g_plus = 0.0;   // d_x u from the left
  double g_minus = 0.0;
  double h_left = 0.0;
  double h_right = 0.0;
  double jump() const { return u_plus - u_minus; }
};

FaceTraces face_traces(const DGField& u, int face) {
  FaceTraces t;
  t.left = u.element_on_side(face, Side::Plus);
  t.right = u.element_on_side(face, Side::Minus);
  const auto& basis = u.basis();
  t.h_left = u.mesh().element_size(t.left);
  t.h_right = u.mesh().element_size(t.right);
  for (int m = 0; m < u.n_modes(); ++m) {
    const double al = u.coeff(t.left, m, 0);
    const double ar = u.coeff(t.right, m, 0);
    t.u_plus += al * basis.right_value(m);
    t.u_minus += ar * basis.left_value(m);
    t.g_plus += al * basis.right_derivative(m);
    t.g_minus += ar * basis.left_derivative(m);
  }
  t.g_plus *= 2.0 / t.h_left;
  t.g_minus *= 2.0 / t.h_right;
  return t;
}

void require_periodic(const DGField& u) {
  if (!u.mesh().periodic)
    throw UnsupportedBoundary("scalar scheme is implemented for periodic meshes only");
  if (u.n_components() != 1) throw InvalidArgument("scalar scheme expects a one-component field");
}

}  // namespace

void assemble_rhs(const DGField& u, const SchemeConfig& cfg, std::span<double> dudt) {
  cfg.validate();
  require_periodic(u);
  if (dudt.size() != u.coefficients().size()) throw InvalidArgument("rhs buffer has wrong size");

  const auto& basis = u.basis();
  const auto& quad = basis.quadrature();
  const int nm = u.n_modes();
  const int n = u.n_elements();
  const double c = cfg.kinetics.c;
  const double mu = cfg.kinetics.mu;
  const auto k = kinetic::split_coeffs(c, cfg.kinetics.beta);
  const double eps = cfg.epsilon();
  const bool stabilized = cfg.variant != Variant::Unstabilized;

  std::fill(dudt.begin(), dudt.end(), 0.0);
  // dudt holds the residual R until the final mass scaling

  for (int e = 0; e < n; ++e) {
    const double h = u.mesh().element_size(e);
    for (int p = 0; p < quad.size(); ++p) {
      double up = 0.0;
      double uxi = 0.0;
      for (int m = 0; m < nm; ++m) {
        up += u.coeff(e, m, 0) * basis.value(m, p);
        uxi += u.coeff(e, m, 0) * basis.derivative(m, p);
      }
      const double w = quad.weights[p];
      for (int m = 0; m < nm; ++m) {
        dudt[u.index(e, m, 0)] += w * basis.derivative(m, p) * (-c * up + mu * (2.0 / h) * uxi);
      }
    }
  }

  for (int f = 0; f < n; ++f) {
    const auto t = face_traces(u, f);
    const double jump = t.jump();
    const double flux = kinetic::convective_split_flux(t.u_plus, c, Side::Plus, k) +
                        kinetic::convective_split_flux(t.u_minus, c, Side::Minus, k) +
                        kinetic::diffusive_split_flux(t.g_plus, mu, Side::Plus, k) +
                        kinetic::diffusive_split_flux(t.g_minus, mu, Side::Minus, k);
    const double delta = stabilized ? cfg.penalty * mu / (0.5 * (t.h_left + t.h_right)) * jump : 0.0;
    for (int m = 0; m < nm; ++m) {
      double left = (flux + delta) * basis.right_value(m);
      double right = -(flux + delta) * basis.left_value(m);
      if (stabilized) {
        left += eps * kinetic::diffusive_split_flux(2.0 / t.h_left * basis.right_derivative(m), mu,
                                                    Side::Plus, k) * jump;
        right += eps * kinetic::diffusive_split_flux(2.0 / t.h_right * basis.left_derivative(m), mu,
                                                     Side::Minus, k) * jump;
      }
      dudt[u.index(t.left, m, 0)] += left;
      dudt[u.index(t.right, m, 0)] += right;
    }
  }

  for (int e = 0; e < n; ++e) {
    const double h = u.mesh().element_size(e);
    for (int m = 0; m < nm; ++m) dudt[u.index(e, m, 0)] *= -1.0 / (0.5 * h * basis.mass(m));
  }
}

DGField assemble_rhs(const DGField& u, const SchemeConfig& cfg) {
  DGField out(u.mesh(), u.basis(), 1);
  assemble_rhs(u, cfg, out.coefficients());
  return out;
}

double energy(const DGField& u) {
  double sum = 0.0;
  for (int e = 0; e < u.n_elements(); ++e) {
    const double h = u.mesh().element_size(e);
    for (int m = 0; m < u.n_modes(); ++m)
      for (int c = 0; c < u.n_components(); ++c) {
        const double a = u.coeff(e, m, c);
        sum += 0.5 * h * u.basis().mass(m) * a * a;
      }
  }
  return 0.5 * sum;
}

double EnergyBudget::scale() const {
  return std::max({std::abs(dissipation_jump), std::abs(dissipation_volume),
                   std::abs(dissipation_penalty), std::abs(residual_power)});
}

EnergyBudget energy_budget(const DGField& u, const SchemeConfig& cfg) {
  if (cfg.variant != Variant::NonSymmetric)
    throw NotApplicable("energy identity holds only for the non-symmetric variant");
  require_periodic(u);
  const auto rhs = assemble_rhs(u, cfg);
  const auto& basis = u.basis();
  const auto& quad = basis.quadrature();
  const double mu = cfg.kinetics.mu;
  const double D = kinetic::dissipation_D(cfg.kinetics.c, cfg.kinetics.beta);

  EnergyBudget b;
  for (int e = 0; e < u.n_elements(); ++e) {
    const double h = u.mesh().element_size(e);
    for (int m = 0; m < u.n_modes(); ++m)
      b.residual_power += 0.5 * h * basis.mass(m) * rhs.coeff(e, m, 0) * u.coeff(e, m, 0);
    double grad2 = 0.0;
    for (int p = 0; p < quad.size(); ++p) {
      double uxi = 0.0;
      for (int m = 0; m < u.n_modes(); ++m) uxi += u.coeff(e, m, 0) * basis.derivative(m, p);
      grad2 += quad.weights[p] * uxi * uxi;
    }
    b.dissipation_volume += mu * (2.0 / h) * grad2;
  }
  for (int f = 0; f < u.n_elements(); ++f) {
    const auto t = face_traces(u, f);
    const double j2 = t.jump() * t.jump();
    b.dissipation_jump += 0.5 * D * j2;
    b.dissipation_penalty += cfg.penalty * mu / (0.5 * (t.h_left + t.h_right)) * j2;
  }
  return b;
}

CellEnergyFluxes cell_energy_fluxes(const DGField& u, const SchemeConfig& cfg, int face) {
  const auto t = face_traces(u, face);
  const double c = cfg.kinetics.c;
  const double mu = cfg.kinetics.mu;
  const auto k = kinetic::split_coeffs(c, cfg.kinetics.beta);
  const double fc = kinetic::convective_numerical_flux(t.u_plus, t.u_minus, c, cfg.kinetics.beta);
  CellEnergyFluxes out;
  out.convective = fc * 0.5 * (t.u_plus + t.u_minus) -
                   0.5 * c * 0.5 * (t.u_plus * t.u_plus + t.u_minus * t.u_minus);
  out.diffusive = kinetic::diffusive_split_flux(t.g_plus, mu, Side::Plus, k) * t.u_minus +
                  kinetic::diffusive_split_flux(t.g_minus, mu, Side::Minus, k) * t.u_plus;
  return out;
}

LinearOperator LinearOperator::compile(const Mesh1D& mesh, const Basis& basis,
                                       const SchemeConfig& cfg) {
  if (!mesh.periodic) throw UnsupportedBoundary("linear operator needs a periodic mesh");
  const double h = mesh.h();
  for (int e = 0; e < mesh.n_elements; ++e)
    if (std::abs(mesh.element_size(e) - h) > 1e-12 * h)
      throw InvalidArgument("linear operator needs a uniform mesh");

  LinearOperator op;
  op.n_elements_ = mesh.n_elements;
  op.n_modes_ = basis.n_modes();
  const int nm = op.n_modes_;
  const auto probe_mesh = build_uniform_mesh(0.0, 3.0 * h, 3, true);
  for (auto& b : op.blocks_) b.assign(static_cast<std::size_t>(nm) * nm, 0.0);
  DGField probe(probe_mesh, basis, 1);
  DGField out(probe_mesh, basis, 1);
  for (int j = 0; j < nm; ++j) {
    std::fill(probe.coefficients().begin(), probe.coefficients().end(), 0.0);
    probe.coeff(1, j, 0) = 1.0;
    assemble_rhs(probe, cfg, out.coefficients());
    // response of element 1+d to a unit in element 1 is the coupling of an
    // element to its neighbor at offset -d
    for (int i = 0; i < nm; ++i) {
      op.blocks_[2][i * nm + j] = out.coeff(0, i, 0);  // row element sees right neighbor
      op.blocks_[1][i * nm + j] = out.coeff(1, i, 0);
      op.blocks_[0][i * nm + j] = out.coeff(2, i, 0);  // row element sees left neighbor
    }
  }
  return op;
}

void LinearOperator::apply(std::span<const double> u, std::span<double> dudt) const {
  const int n = n_elements_;
  const int nm = n_modes_;
  std::fill(dudt.begin(), dudt.end(), 0.0);
  for (int e = 0; e < n; ++e) {
    const int nbr[3] = {(e - 1 + n) % n, e, (e + 1) % n};
    double* out = dudt.data() + static_cast<std::size_t>(e) * nm;
    for (int d = 0; d < 3; ++d) {
      const double* in = u.data() + static_cast<std::size_t>(nbr[d]) * nm;
      const double* blk = blocks_[d].data();
      for (int i = 0; i < nm; ++i) {
        double s = 0.0;
        for (int j = 0; j < nm; ++j) s += blk[i * nm + j] * in[j];
        out[i] += s;
      }
    }
  }
}

}  // namespace kfdg::scalar
