#pragma once

#include <functional>

#include "kfdg/dg_field.hpp"
#include "kfdg/gas_state.hpp"

namespace kfdg::kfvs {

using gas::GasModel;
using gas::Primitive;
using gas::Vec3;

/// Exact Euler flux (rho u, p + rho u^2, (rho e + p) u).
Vec3 euler_flux(const Primitive& w, const GasModel& g);

/// Inviscid half-flux F+ (Side::Plus) or F- (Side::Minus), s = u sqrt(beta).
Vec3 euler_split(const Primitive& w, const GasModel& g, Side side);

/// H_c = F+(left state) + F-(right state).
Vec3 euler_kfvs_flux(const Primitive& left, const Primitive& right, const GasModel& g);

/// Exact viscous flux (0, -tau, -u tau + q).
Vec3 viscous_flux(const Primitive& w, double tau, double q);

/// Viscous half-flux G+ or G- of the Chapman-Enskog distribution.
Vec3 viscous_split(const Primitive& w, double tau, double q, const GasModel& g, Side side);

/// One side of a face: state plus (tau, q).
struct TraceData {
  Primitive w;
  double tau = 0.0;
  double q = 0.0;
};

struct NsFlux {
  Vec3 convective{};      // H_c
  Vec3 diffusive_plus{};  // G+(left data)
  Vec3 diffusive_minus{}; // G-(right data)
  Vec3 total() const;
};

NsFlux ns_kfvs_flux(const TraceData& left, const TraceData& right, const GasModel& g);

/// Numerical flux used by the E-flux diagnostic in place of H_c.
using ConvectiveFlux = std::function<Vec3(const Primitive&, const Primitive&, const GasModel&)>;

/// Minimum over n_samples uniform s in [0,1] of [V].(H(V+,V-) - F(sV+ + (1-s)V-)),
/// [V] = V+ - V-. Uses the KFVS flux unless `flux` is given. A sample state
/// leaving the physical region throws PositivityViolation naming the sample.
double eflux_diagnostic(const Vec3& v_plus, const Vec3& v_minus, const GasModel& g, int n_samples = 33,
                        const ConvectiveFlux& flux = {});

/// Entropy flux potential psi = eta'(U).F - theta = rho u.
double entropy_potential(const Primitive& w, const GasModel& g);

/// Theta(V+,V-) = {eta'}.H_c - {psi}; Theta(V,V) is the entropy flux theta of
/// gas::entropy_pair.
double numerical_entropy_flux(const Primitive& left, const Primitive& right, const GasModel& g);

/// D(V+,V-) = 1/2([V].H_c - [psi]), the entropy dissipated at a face.
double entropy_jump_dissipation(const Primitive& left, const Primitive& right, const GasModel& g);

}  // namespace kfdg::kfvs
