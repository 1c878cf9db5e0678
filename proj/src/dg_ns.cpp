#include "kfdg/dg_ns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kfdg/errors.hpp"
#include "kfdg/kfvs_ns.hpp"

namespace kfdg::ns {

using std::numbers::pi;

double NSSchemeConfig::epsilon() const {
  scalar::SchemeConfig s;
  s.variant = variant;
  return s.epsilon();
}

void NSSchemeConfig::validate() const {
  gas.validate();
  if (!(penalty >= 0.0)) throw ConfigError("cip", "penalty constant must be non-negative");
  if (variant == scalar::Variant::Symmetric && viscous && !(penalty > 0.0))
    throw ConfigError("cip", "symmetric variant requires a positive penalty constant");
  for (const auto* op : {&left, &right}) {
    if (op->kind == BoundaryKind::NoSlipIsothermal && !(op->t_wall > 0.0))
      throw ConfigError("t_wall", "wall temperature must be positive");
    if (op->kind == BoundaryKind::Farfield) gas::check_physical(op->farfield);
  }
  if ((left.kind == BoundaryKind::Periodic) != (right.kind == BoundaryKind::Periodic))
    throw UnsupportedBoundary("periodic boundaries must be applied at both ends");
}

namespace {

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 scale(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// One side of a face after any boundary modification.
struct Slot {
  Primitive w;
  Vec3 U{};
  Vec3 V{};
  Vec3 Vx{};
};

Slot make_slot(const Vec3& V, const Vec3& Vx, const GasModel& g) {
  Slot s;
  s.V = V;
  s.Vx = Vx;
  s.w = gas::entropy_to_primitive(V, g);
  gas::check_physical(s.w);
  s.U = gas::primitive_to_conserved(s.w, g);
  return s;
}

gas::Transport slot_transport(const Primitive& w, const Vec3& Vx, const GasModel& g) {
  const auto d = gas::gradient_from_entropy(w, Vx, g);
  return gas::transport(w, g, d.u_x, d.T_x);
}

Vec3 diffusive_half(const Primitive& w, const Vec3& Vx, const GasModel& g, Side side) {
  const auto t = slot_transport(w, Vx, g);
  return kfvs::viscous_split(w, t.tau, t.q, g, side);
}

/// Conserved value and physical derivative at reference xi of element e.
void element_point(const DGField& U, int e, double xi, Vec3& u, Vec3& ux) {
  for (int c = 0; c < 3; ++c) {
    u[c] = U.value(e, xi, c);
    ux[c] = U.derivative(e, xi, c);
  }
}

/// Interior trace of element e at xi = +-1 as a slot.
Slot trace_slot(const DGField& U, int e, double xi, const GasModel& g) {
  Vec3 u, ux;
  element_point(U, e, xi, u, ux);
  try {
    Slot s;
    s.U = u;
    s.w = gas::conserved_to_primitive(u, g);
    s.V = gas::primitive_to_entropy(s.w, g);
    s.Vx = gas::entropy_gradient(u, ux, g);
    return s;
  } catch (const PositivityViolation& pv) {
    throw pv.At(e, -1);
  }
}

double kinematic_viscosity(const Primitive& a, const Primitive& b, const GasModel& g) {
  const double rho = 0.5 * (a.rho + b.rho);
  const double T = 0.5 * (a.T + b.T);
  return g.mu(T) / rho;
}

struct FaceSlots {
  Slot left, right;
  int element = -1;  // interior element for boundary faces
  bool boundary = false;
  bool interior_on_left = false;  // boundary faces: the domain lies left of the face
  const BoundaryOperator* op = nullptr;
  Vec3 v_trace{};  // raw interior V for boundary faces
  Vec3 u_trace{};
  double h = 0.0;
};

FaceSlots gather_face(const DGField& U, const NSSchemeConfig& cfg, int f) {
  const auto& g = cfg.gas;
  const int n = U.n_elements();
  const bool periodic = U.mesh().periodic;
  FaceSlots fs;
  if (periodic || (f > 0 && f < n)) {
    const int l = U.element_on_side(f, Side::Plus);
    const int r = U.element_on_side(f, Side::Minus);
    fs.left = trace_slot(U, l, 1.0, g);
    fs.right = trace_slot(U, r, -1.0, g);
    fs.h = 0.5 * (U.mesh().element_size(l) + U.mesh().element_size(r));
    return fs;
  }
  fs.boundary = true;
  fs.interior_on_left = f == n;
  fs.element = fs.interior_on_left ? n - 1 : 0;
  fs.op = fs.interior_on_left ? &cfg.right : &cfg.left;
  fs.h = U.mesh().element_size(fs.element);
  const auto tr = trace_slot(U, fs.element, fs.interior_on_left ? 1.0 : -1.0, g);
  fs.v_trace = tr.V;
  fs.u_trace = tr.U;
  GammaTraces gt;
  try {
    gt = apply_gamma(tr.V, tr.Vx, *fs.op, g);
    const auto in = make_slot(gt.v_int, gt.grad_int, g);
    const auto ex = make_slot(gt.v_ext, gt.grad_ext, g);
    fs.left = fs.interior_on_left ? in : ex;
    fs.right = fs.interior_on_left ? ex : in;
  } catch (const PositivityViolation& pv) {
    throw pv.At(fs.element, -1);
  }
  return fs;
}

/// Interior (possibly Gamma-modified) slot of a boundary face.
const Slot& interior_slot(const FaceSlots& fs) { return fs.interior_on_left ? fs.left : fs.right; }

}  // namespace

GammaTraces apply_gamma(const Vec3& v_trace, const Vec3& grad_trace, const BoundaryOperator& op,
                        const GasModel& g) {
  if (!(v_trace[2] < 0.0)) throw PositivityViolation("boundary trace has non-positive temperature");
  GammaTraces out;
  switch (op.kind) {
    case BoundaryKind::Periodic:
      throw UnsupportedBoundary("periodic ends have no boundary operator");
    case BoundaryKind::NoSlipAdiabatic:
      out.v_int = {v_trace[0], 0.0, v_trace[2]};
      out.grad_int = {grad_trace[0], grad_trace[1], 0.0};
      break;
    case BoundaryKind::NoSlipIsothermal:
      out.v_int = {v_trace[0], 0.0, -1.0 / (g.R * op.t_wall)};
      out.grad_int = grad_trace;
      break;
    case BoundaryKind::Farfield:
      out.v_int = v_trace;
      out.grad_int = grad_trace;
      out.v_ext = gas::primitive_to_entropy(op.farfield, g);
      out.grad_ext = grad_trace;
      return out;
  }
  out.v_ext = out.v_int;
  out.grad_ext = out.grad_int;
  return out;
}

Vec3 gamma_test_gradient(const Vec3& grad, const BoundaryOperator& op) {
  if (op.kind == BoundaryKind::NoSlipAdiabatic) return {grad[0], grad[1], 0.0};
  return grad;
}

void assemble_ns_rhs(const DGField& U, const NSSchemeConfig& cfg, std::span<double> dudt) {
  cfg.validate();
  if (U.n_components() != 3) throw InvalidArgument("NS scheme expects a three-component field");
  if (dudt.size() != U.coefficients().size()) throw InvalidArgument("rhs buffer has wrong size");
  const bool periodic = U.mesh().periodic;
  if (periodic != (cfg.left.kind == BoundaryKind::Periodic))
    throw UnsupportedBoundary("boundary operators do not match the mesh periodicity");

  const auto& g = cfg.gas;
  const auto& basis = U.basis();
  const auto& quad = basis.quadrature();
  const int nm = U.n_modes();
  const int n = U.n_elements();
  const double eps = cfg.epsilon();
  const bool viscous = cfg.viscous;
  const bool stabilized = viscous && cfg.variant != scalar::Variant::Unstabilized;
  const double k2 = static_cast<double>(basis.degree()) * basis.degree();
  const auto source_quad = gauss_quadrature(basis.degree() + 10);

  std::fill(dudt.begin(), dudt.end(), 0.0);
  auto R = [&](int e, int m, int c) -> double& { return dudt[U.index(e, m, c)]; };

  for (int e = 0; e < n; ++e) {
    const double h = U.mesh().element_size(e);
    const double xc = U.mesh().center(e);
    for (int p = 0; p < quad.size(); ++p) {
      Vec3 u{}, uxi{};
      for (int m = 0; m < nm; ++m)
        for (int c = 0; c < 3; ++c) {
          u[c] += U.coeff(e, m, c) * basis.value(m, p);
          uxi[c] += U.coeff(e, m, c) * basis.derivative(m, p);
        }
      Vec3 flux;
      try {
        const auto w = gas::conserved_to_primitive(u, g);
        flux = kfvs::euler_flux(w, g);
        if (viscous) {
          const auto d = gas::gradient_from_conserved(u, scale(2.0 / h, uxi), g);
          const auto t = gas::transport(w, g, d.u_x, d.T_x);
          flux = add(flux, kfvs::viscous_flux(w, t.tau, t.q));
        }
      } catch (const PositivityViolation& pv) {
        throw pv.At(e, p);
      }
      const double wq = quad.weights[p];
      for (int m = 0; m < nm; ++m)
        for (int c = 0; c < 3; ++c) R(e, m, c) += -wq * flux[c] * basis.derivative(m, p);
    }
    if (cfg.source) {
      // the forcing is not polynomial; integrate it on a finer rule so its
      // discrete mean matches the boundary fluxes
      for (int p = 0; p < source_quad.size(); ++p) {
        const Vec3 src = cfg.source(xc + 0.5 * h * source_quad.nodes[p]);
        const auto P = legendre_eval(basis.degree(), source_quad.nodes[p]);
        const double wq = 0.5 * h * source_quad.weights[p];
        for (int m = 0; m < nm; ++m)
          for (int c = 0; c < 3; ++c) R(e, m, c) -= wq * src[c] * P.values[m];
      }
    }
  }

  // G+- at a state is linear in d_x V; column j is the response to e_j
  auto adjoint_columns = [&](const Primitive& w, Side side, Vec3 (&cols)[3]) {
    for (int j = 0; j < 3; ++j) {
      Vec3 ej{};
      ej[j] = 1.0;
      cols[j] = diffusive_half(w, ej, g, side);
    }
  };

  for (int f = 0; f <= n; ++f) {
    if (periodic && f == n) break;
    const auto fs = gather_face(U, cfg, f);
    Vec3 H = kfvs::euler_kfvs_flux(fs.left.w, fs.right.w, g);
    if (viscous) {
      H = add(H, diffusive_half(fs.left.w, fs.left.Vx, g, Side::Plus));
      H = add(H, diffusive_half(fs.right.w, fs.right.Vx, g, Side::Minus));
    }

    if (!fs.boundary) {
      const int l = U.element_on_side(f, Side::Plus);
      const int r = U.element_on_side(f, Side::Minus);
      Vec3 delta{};
      const Vec3 jumpV = sub(fs.left.V, fs.right.V);
      Vec3 adj_l{}, adj_r{};
      if (stabilized) {
        const double nu = kinematic_viscosity(fs.left.w, fs.right.w, g);
        delta = scale(cfg.penalty * k2 * nu / fs.h, sub(fs.left.U, fs.right.U));
        Vec3 cl[3], cr[3];
        adjoint_columns(fs.left.w, Side::Plus, cl);
        adjoint_columns(fs.right.w, Side::Minus, cr);
        for (int j = 0; j < 3; ++j) {
          adj_l[j] = dot(cl[j], jumpV);
          adj_r[j] = dot(cr[j], jumpV);
        }
      }
      const double hl = U.mesh().element_size(l);
      const double hr = U.mesh().element_size(r);
      for (int m = 0; m < nm; ++m)
        for (int c = 0; c < 3; ++c) {
          R(l, m, c) += (H[c] + delta[c]) * basis.right_value(m) +
                        eps * 2.0 / hl * basis.right_derivative(m) * adj_l[c];
          R(r, m, c) += -(H[c] + delta[c]) * basis.left_value(m) +
                        eps * 2.0 / hr * basis.left_derivative(m) * adj_r[c];
        }
      continue;
    }

    const int e = fs.element;
    const double sgn = fs.interior_on_left ? 1.0 : -1.0;
    const auto& in = interior_slot(fs);
    Vec3 delta{}, adj{};
    if (stabilized) {
      const auto w_tr = gas::conserved_to_primitive(fs.u_trace, g);
      const double nu = kinematic_viscosity(w_tr, in.w, g);
      delta = scale(cfg.penalty * k2 * nu / fs.h, sub(fs.u_trace, in.U));
      // oriented jump of V between the left and right slots of the face
      const Vec3 jumpV = fs.interior_on_left ? sub(fs.v_trace, in.V) : sub(in.V, fs.v_trace);
      Vec3 cl[3], cr[3];
      adjoint_columns(fs.left.w, Side::Plus, cl);
      adjoint_columns(fs.right.w, Side::Minus, cr);
      for (int j = 0; j < 3; ++j) {
        Vec3 ej{};
        ej[j] = 1.0;
        const Vec3 gj = gamma_test_gradient(ej, *fs.op);
        Vec3 col{};
        for (int i = 0; i < 3; ++i) col = add(col, scale(gj[i], add(cl[i], cr[i])));
        adj[j] = dot(col, jumpV);
      }
    }
    const double h = U.mesh().element_size(e);
    for (int m = 0; m < nm; ++m) {
      const double phi = fs.interior_on_left ? basis.right_value(m) : basis.left_value(m);
      const double dphi = fs.interior_on_left ? basis.right_derivative(m) : basis.left_derivative(m);
      for (int c = 0; c < 3; ++c)
        R(e, m, c) += sgn * H[c] * phi + delta[c] * phi + eps * 2.0 / h * dphi * adj[c];
    }
  }

  for (int e = 0; e < n; ++e) {
    const double h = U.mesh().element_size(e);
    for (int m = 0; m < nm; ++m)
      for (int c = 0; c < 3; ++c) R(e, m, c) *= -1.0 / (0.5 * h * basis.mass(m));
  }
}

DGField assemble_ns_rhs(const DGField& U, const NSSchemeConfig& cfg) {
  DGField out(U.mesh(), U.basis(), 3);
  assemble_ns_rhs(U, cfg, out.coefficients());
  return out;
}

double compute_dt(const DGField& U, const GasModel& g, double cfl) {
  if (!(cfl > 0.0)) throw InvalidArgument("CFL must be positive");
  const auto& basis = U.basis();
  const auto& quad = basis.quadrature();
  double dt = std::numeric_limits<double>::infinity();
  for (int e = 0; e < U.n_elements(); ++e) {
    double smax = 0.0;
    for (int p = 0; p < quad.size(); ++p) {
      Vec3 u{};
      for (int m = 0; m < U.n_modes(); ++m)
        for (int c = 0; c < 3; ++c) u[c] += U.coeff(e, m, c) * basis.value(m, p);
      try {
        const auto w = gas::conserved_to_primitive(u, g);
        smax = std::max(smax, std::abs(w.u) + gas::sound_speed(w, g));
      } catch (const PositivityViolation& pv) {
        throw pv.At(e, p);
      }
    }
    dt = std::min(dt, cfl * U.mesh().element_size(e) / smax);
  }
  return dt;
}

double l2_norm(const DGField& f) {
  double s = 0.0;
  for (int e = 0; e < f.n_elements(); ++e) {
    const double h = f.mesh().element_size(e);
    for (int m = 0; m < f.n_modes(); ++m)
      for (int c = 0; c < f.n_components(); ++c) s += 0.5 * h * f.basis().mass(m) * f.coeff(e, m, c) * f.coeff(e, m, c);
  }
  return std::sqrt(s);
}

MmsPoint mms_exact(double x) {
  const double P = x * x * (1.0 - x) * (1.0 - x);
  const double P1 = 2.0 * (x - x * x) * (1.0 - 2.0 * x);
  const double P2 = 2.0 * (1.0 - 2.0 * x) * (1.0 - 2.0 * x) - 4.0 * (x - x * x);
  const double S = std::sin(2.0 * pi * x);
  const double C = std::cos(2.0 * pi * x);
  const double S1 = 2.0 * pi * C;
  const double S2 = -4.0 * pi * pi * S;
  MmsPoint pt;
  pt.w.rho = 1.0 + 0.5 * C;
  pt.w.u = 10.0 * P * S;
  pt.w.T = 1.0 + 2.0 * P;
  pt.rho_x = -pi * S;
  pt.u_x = 10.0 * (P1 * S + P * S1);
  pt.u_xx = 10.0 * (P2 * S + 2.0 * P1 * S1 + P * S2);
  pt.T_x = 2.0 * P1;
  pt.T_xx = 2.0 * P2;
  return pt;
}

Vec3 mms_source(double x, const GasModel& g) {
  const auto pt = mms_exact(x);
  const double rho = pt.w.rho, u = pt.w.u, T = pt.w.T;
  const double mu = g.mu(T);
  const double dmu = g.viscosity.derivative(T);
  const double kappa = g.kappa(T);
  const double dkappa = dmu * g.cp() / g.prandtl;
  const double tau = 4.0 / 3.0 * mu * pt.u_x;
  const double tau_x = 4.0 / 3.0 * (dmu * pt.T_x * pt.u_x + mu * pt.u_xx);
  const double q_x = -(dkappa * pt.T_x * pt.T_x + kappa * pt.T_xx);
  const double p_x = g.R * (pt.rho_x * T + rho * pt.T_x);
  const double H = rho * (g.cp() * T + 0.5 * u * u);
  const double H_x = pt.rho_x * (g.cp() * T + 0.5 * u * u) + rho * (g.cp() * pt.T_x + u * pt.u_x);
  Vec3 f;
  f[0] = pt.rho_x * u + rho * pt.u_x;
  f[1] = p_x + pt.rho_x * u * u + 2.0 * rho * u * pt.u_x - tau_x;
  f[2] = H_x * u + H * pt.u_x - (tau_x * u + tau * pt.u_x) + q_x;
  return f;
}

DGField mms_projection(const Mesh1D& mesh, const Basis& basis, const GasModel& g) {
  return project(
      [&g](double x, std::span<double> out) {
        const auto U = gas::primitive_to_conserved(mms_exact(x).w, g);
        std::copy(U.begin(), U.end(), out.begin());
      },
      mesh, basis, 3);
}

PointState point_state(const DGField& U, const GasModel& g, int e, double xi) {
  Vec3 u, ux;
  element_point(U, e, xi, u, ux);
  PointState s;
  try {
    s.w = gas::conserved_to_primitive(u, g);
    const auto d = gas::gradient_from_conserved(u, ux, g);
    const auto t = gas::transport(s.w, g, d.u_x, d.T_x);
    s.tau = t.tau;
    s.q = t.q;
  } catch (const PositivityViolation& pv) {
    throw pv.At(e, -1);
  }
  return s;
}

std::vector<CellEntropy> cell_entropy_balance(const DGField& U, const NSSchemeConfig& cfg) {
  if (cfg.variant != scalar::Variant::NonSymmetric)
    throw NotApplicable("cell entropy inequality holds only for the non-symmetric variant");
  const auto& g = cfg.gas;
  const auto rhs = assemble_ns_rhs(U, cfg);
  const auto& basis = U.basis();
  const auto& quad = basis.quadrature();
  const int n = U.n_elements();
  const int nm = U.n_modes();
  const double shift = gas::entropy_shift(g);
  std::vector<CellEntropy> out(n);

  for (int e = 0; e < n; ++e) {
    const double h = U.mesh().element_size(e);
    for (int p = 0; p < quad.size(); ++p) {
      Vec3 u{}, uxi{}, ut{};
      for (int m = 0; m < nm; ++m)
        for (int c = 0; c < 3; ++c) {
          u[c] += U.coeff(e, m, c) * basis.value(m, p);
          uxi[c] += U.coeff(e, m, c) * basis.derivative(m, p);
          ut[c] += rhs.coeff(e, m, c) * basis.value(m, p);
        }
      const Vec3 ux = scale(2.0 / h, uxi);
      auto V = gas::conserved_to_entropy(u, g);
      V[0] += shift;
      const double jac = 0.5 * h * quad.weights[p];
      out[e].entropy_rate += jac * dot(V, ut);
      if (cfg.viscous) {
        const auto w = gas::conserved_to_primitive(u, g);
        const auto d = gas::gradient_from_conserved(u, ux, g);
        const auto t = gas::transport(w, g, d.u_x, d.T_x);
        out[e].production += jac * dot(kfvs::viscous_flux(w, t.tau, t.q), gas::entropy_gradient(u, ux, g));
      }
    }
  }

  const bool periodic = U.mesh().periodic;
  const double k2 = static_cast<double>(basis.degree()) * basis.degree();
  for (int f = 0; f <= n; ++f) {
    if (periodic && f == n) break;
    const auto fs = gather_face(U, cfg, f);
    auto vl = fs.left.V, vr = fs.right.V;
    vl[0] += shift;
    vr[0] += shift;
    double flux = kfvs::numerical_entropy_flux(fs.left.w, fs.right.w, g);
    const double diss = kfvs::entropy_jump_dissipation(fs.left.w, fs.right.w, g);
    double pen = 0.0;
    if (cfg.viscous) {
      flux += dot(diffusive_half(fs.left.w, fs.left.Vx, g, Side::Plus), vr) +
              dot(diffusive_half(fs.right.w, fs.right.Vx, g, Side::Minus), vl);
      const double nu = kinematic_viscosity(fs.left.w, fs.right.w, g);
      pen = cfg.penalty * k2 * nu / fs.h * dot(sub(fs.left.U, fs.right.U), sub(vl, vr));
    }
    if (fs.boundary) {
      auto& cell = out[fs.element];
      cell.flux_out += fs.interior_on_left ? flux : -flux;
      cell.jump_dissipation += diss;
      cell.penalty_dissipation += pen;
      continue;
    }
    const int l = U.element_on_side(f, Side::Plus);
    const int r = U.element_on_side(f, Side::Minus);
    out[l].flux_out += flux;
    out[r].flux_out -= flux;
    out[l].jump_dissipation += diss;
    out[r].jump_dissipation += diss;
    out[l].penalty_dissipation += 0.5 * pen;
    out[r].penalty_dissipation += 0.5 * pen;
  }
  return out;
}

}  // namespace kfdg::ns
