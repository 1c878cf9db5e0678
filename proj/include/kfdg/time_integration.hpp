#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kfdg::time {

/// Semi-discrete operator: writes L(u) = du/dt into the second argument.
using Rhs = std::function<void(std::span<const double>, std::span<double>)>;

enum class Mode { ExplicitRk3, ImplicitBackwardEuler };

struct TimeControls {
  double cfl = 0.3;
  double t_final = 0.0;
  Mode mode = Mode::ExplicitRk3;
  double newton_tol = 1e-10;       // relative to the initial Newton residual
  double newton_step_tol = 1e-9;   // or: update norm relative to 1 + |u|
  int newton_max_iters = 25;
  double steady_tol = 1e-10;  // used by march_to_steady

  void validate() const;
};

/// Three-stage SSP Runge-Kutta step. A failing rhs evaluation is rethrown as
/// StepFailure carrying the stage index (1..3).
void rk3_step(std::vector<double>& u, double dt, const Rhs& rhs);

/// Sparsity of a compact DG Jacobian: n_blocks element blocks of size
/// block_size, each coupled to its two neighbors. Non-periodic only.
struct BlockTridiagonal {
  int block_size = 1;
  int n_blocks = 1;
  int size() const { return block_size * n_blocks; }
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;  // final relative residual
  std::vector<double> history;  // absolute residual norms, starting with the initial guess
};

/// Backward Euler: solves u_next - u - dt L(u_next) = 0 by damped Newton with a
/// colored finite-difference Jacobian and banded LU. Stops when the relative
/// residual drops below newton_tol or the damped update below newton_step_tol;
/// otherwise throws StepFailure after newton_max_iters.
NewtonReport be_step(std::vector<double>& u, double dt, const Rhs& rhs, const BlockTridiagonal& pattern,
                     const TimeControls& controls);

/// Assembles J = dL/du by finite differences over the block-tridiagonal
/// pattern, returned as LAPACK general-band storage with kl = ku = 2*block_size-1
/// (leading dimension 2*kl+ku+1, room for pivoting fill).
std::vector<double> fd_jacobian_band(std::span<const double> u, const Rhs& rhs,
                                     const BlockTridiagonal& pattern);

/// dt = CFL * min(h/|c|, h^2/mu), ignoring whichever term has a zero
/// coefficient.
double compute_dt_scalar(double h, double c, double mu, double cfl);

struct SteadyReport {
  int steps = 0;
  double residual = 0.0;
  bool converged = false;
  bool stalled = false;  // residual stopped decreasing above steady_tol
  std::vector<double> history;
};

/// Pseudo-time marching with backward Euler until ||L(u)||_M <= steady_tol.
/// `dt_of` supplies the CFL-based step for the current state; `cfl_growth`
/// scales it by min(cfl_growth_max, r0/r) (switched evolution relaxation).
/// `residual_norm` measures L(u).
struct SteadyControls {
  TimeControls time;
  int max_steps = 2000;
  double cfl_growth_max = 1.0;  // 1 keeps a fixed CFL
  /// Stop when the best residual of the last `stall_window` steps is not
  /// below `stall_ratio` times the best one before them, and return the
  /// iterate with the smallest residual seen. 0 disables.
  int stall_window = 0;
  double stall_ratio = 0.99;
};

SteadyReport march_to_steady(std::vector<double>& u, const Rhs& rhs, const BlockTridiagonal& pattern,
                             const std::function<double(std::span<const double>)>& dt_of,
                             const std::function<double(std::span<const double>)>& residual_norm,
                             const SteadyControls& controls);

}  // namespace kfdg::time
