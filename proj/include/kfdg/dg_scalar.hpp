#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "kfdg/dg_field.hpp"
#include "kfdg/kinetic_scalar.hpp"

namespace kfdg::scalar {

/// Treatment of the diffusive face terms.
///   Unstabilized: KFVS flux only.
///   NonSymmetric: adds -F_d(d_x phi)[u] and the interior penalty (NIPG).
///   Symmetric:    adds +F_d(d_x phi)[u] and the interior penalty (SIPG).
enum class Variant { Unstabilized, NonSymmetric, Symmetric };

/// Accepts "none", "nipg", "sipg".
Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

struct SchemeConfig {
  Variant variant = Variant::NonSymmetric;
  double penalty = 10.0;  // C_ip
  kinetic::ScalarKinetics kinetics;

  /// -1 for NIPG, +1 for SIPG, 0 when the adjoint term is absent.
  double epsilon() const;
  void validate() const;
};

/// du/dt for the semi-discrete scheme on a periodic mesh.
void assemble_rhs(const DGField& u, const SchemeConfig& cfg, std::span<double> dudt);
DGField assemble_rhs(const DGField& u, const SchemeConfig& cfg);

/// 1/2 ||u_h||^2.
double energy(const DGField& u);

/// Terms of the NIPG energy identity
///   residual_power + dissipation_jump + dissipation_volume + dissipation_penalty = 0
/// with residual_power = <du/dt, u>_M.
struct EnergyBudget {
  double dissipation_jump = 0.0;     // 1/2 D sum [u]^2
  double dissipation_volume = 0.0;   // mu sum int (u_x)^2
  double dissipation_penalty = 0.0;  // sum C_ip mu/h [u]^2
  double residual_power = 0.0;

  double imbalance() const {
    return residual_power + dissipation_jump + dissipation_volume + dissipation_penalty;
  }
  double scale() const;
};

/// Only defined for the non-symmetric variant; other variants throw NotApplicable.
EnergyBudget energy_budget(const DGField& u, const SchemeConfig& cfg);

/// Numerical fluxes of 1/2 c u^2 and -mu u u_x at a face.
struct CellEnergyFluxes {
  double convective = 0.0;
  double diffusive = 0.0;
};

CellEnergyFluxes cell_energy_fluxes(const DGField& u, const SchemeConfig& cfg, int face);

/// The scalar operator is linear with constant coefficients, so on a uniform
/// periodic mesh it is a block-circulant stencil. `compile` extracts the three
/// blocks by probing assemble_rhs; `apply` is the cheap matvec used inside time
/// stepping loops.
class LinearOperator {
 public:
  static LinearOperator compile(const Mesh1D& mesh, const Basis& basis, const SchemeConfig& cfg);

  void apply(std::span<const double> u, std::span<double> dudt) const;
  int n_modes() const { return n_modes_; }

 private:
  int n_elements_ = 0;
  int n_modes_ = 0;
  // blocks_[d] for neighbor offset d-1, row-major n_modes x n_modes
  std::vector<double> blocks_[3];
};

}  // namespace kfdg::scalar
