#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kfdg/dg_field.hpp"
#include "kfdg/dg_scalar.hpp"
#include "kfdg/gas_state.hpp"

namespace kfdg::ns {

using gas::GasModel;
using gas::Primitive;
using gas::Vec3;

enum class BoundaryKind { Periodic, NoSlipAdiabatic, NoSlipIsothermal, Farfield };

struct BoundaryOperator {
  BoundaryKind kind = BoundaryKind::Periodic;
  double t_wall = 1.0;  // isothermal walls
  Primitive farfield;   // farfield boundaries

  static BoundaryOperator periodic() { return {}; }
  static BoundaryOperator adiabatic_wall() { return {BoundaryKind::NoSlipAdiabatic, 1.0, {}}; }
  static BoundaryOperator isothermal_wall(double t) { return {BoundaryKind::NoSlipIsothermal, t, {}}; }
  static BoundaryOperator far_field(const Primitive& w) { return {BoundaryKind::Farfield, 1.0, w}; }
};

using SourceFunction = std::function<Vec3(double)>;

struct NSSchemeConfig {
  scalar::Variant variant = scalar::Variant::NonSymmetric;
  double penalty = 10.0;
  GasModel gas;
  bool viscous = true;
  BoundaryOperator left;
  BoundaryOperator right;
  SourceFunction source;  // empty: no source

  double epsilon() const;
  void validate() const;
};

/// Boundary traces after the Gamma operator, in entropy variables. `v_int`,
/// `grad_int` replace the interior trace; `v_ext`, `grad_ext` are the exterior
/// state. Gradients are d_x V.
struct GammaTraces {
  Vec3 v_int{};
  Vec3 v_ext{};
  Vec3 grad_int{};
  Vec3 grad_ext{};
};

GammaTraces apply_gamma(const Vec3& v_trace, const Vec3& grad_trace, const BoundaryOperator& op,
                        const GasModel& g);

/// Gamma applied to a test-function gradient (adiabatic walls drop the
/// temperature component).
Vec3 gamma_test_gradient(const Vec3& grad, const BoundaryOperator& op);

void assemble_ns_rhs(const DGField& U, const NSSchemeConfig& cfg, std::span<double> dudt);
DGField assemble_ns_rhs(const DGField& U, const NSSchemeConfig& cfg);

/// dt = CFL h / max(|u| + a) over quadrature points.
double compute_dt(const DGField& U, const GasModel& g, double cfl);

/// L2 norm over the domain of all components of a modal field.
double l2_norm(const DGField& f);

/// Manufactured steady solution on [0,1]:
///   rho = 1 + cos(2 pi x)/2, u = 10 x^2 (1-x)^2 sin(2 pi x), T = 1 + 2 x^2 (1-x)^2.
struct MmsPoint {
  Primitive w;
  double rho_x = 0.0, u_x = 0.0, T_x = 0.0;
  double u_xx = 0.0, T_xx = 0.0;
};
MmsPoint mms_exact(double x);
/// f = d_x(F + G) of the manufactured solution.
Vec3 mms_source(double x, const GasModel& g);
DGField mms_projection(const Mesh1D& mesh, const Basis& basis, const GasModel& g);

/// Per-element entropy accounting with W = V. production = int G . d_x V is
/// nonpositive pointwise. The balance residual is not zero in general because
/// V is evaluated pointwise rather than lying in the test space.
struct CellEntropy {
  double entropy_rate = 0.0;      // int V . dU/dt
  double flux_out = 0.0;          // Theta + viscous entropy flux, right minus left face
  double jump_dissipation = 0.0;  // D of both faces
  double penalty_dissipation = 0.0;
  double production = 0.0;        // int G . d_x V
  double residual() const {
    return entropy_rate + flux_out + jump_dissipation + penalty_dissipation - production;
  }
};

/// Only for the non-symmetric variant; others throw NotApplicable.
std::vector<CellEntropy> cell_entropy_balance(const DGField& U, const NSSchemeConfig& cfg);

/// Primitive state and (tau, q) at reference coordinate xi of element e.
struct PointState {
  Primitive w;
  double tau = 0.0;
  double q = 0.0;
};
PointState point_state(const DGField& U, const GasModel& g, int e, double xi);

}  // namespace kfdg::ns
