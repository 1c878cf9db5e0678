#include "kfdg/time_integration.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kfdg/errors.hpp"

namespace kfdg::time {

void TimeControls::validate() const {
  if (!(cfl > 0.0)) throw ConfigError("cfl", "must be positive");
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol", "must be positive");
  if (!(newton_step_tol >= 0.0)) throw ConfigError("newton_step_tol", "must be non-negative");
  if (newton_max_iters < 1) throw ConfigError("newton_max_iters", "must be at least 1");
  if (!(steady_tol > 0.0)) throw ConfigError("steady_tol", "must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("t_final", "must be non-negative");
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void eval_stage(const Rhs& rhs, std::span<const double> u, std::span<double> out, int stage) {
  try {
    rhs(u, out);
  } catch (const StepFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StepFailure(std::string("RK3 stage ") + std::to_string(stage) + ": " + e.what(),
                      std::numeric_limits<double>::quiet_NaN(), stage);
  }
}

}  // namespace

void rk3_step(std::vector<double>& u, double dt, const Rhs& rhs) {
  const std::size_t n = u.size();
  std::vector<double> l(n), u1(n), u2(n);
  eval_stage(rhs, u, l, 1);
  for (std::size_t i = 0; i < n; ++i) u1[i] = u[i] + dt * l[i];
  eval_stage(rhs, u1, l, 2);
  for (std::size_t i = 0; i < n; ++i) u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * l[i]);
  eval_stage(rhs, u2, l, 3);
  for (std::size_t i = 0; i < n; ++i) u[i] = (u[i] + 2.0 * (u2[i] + dt * l[i])) / 3.0;
}

std::vector<double> fd_jacobian_band(std::span<const double> u, const Rhs& rhs,
                                     const BlockTridiagonal& pattern) {
  const int bs = pattern.block_size;
  const int nb = pattern.n_blocks;
  const int n = pattern.size();
  if (static_cast<int>(u.size()) != n) throw InvalidArgument("state size does not match the Jacobian pattern");
  const int kl = 2 * bs - 1;
  const int ku = kl;
  const int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);

  std::vector<double> base(n), pert(u.begin(), u.end()), out(n), step(n);
  rhs(u, base);
  const int n_colors = std::min(3, nb);
  for (int color = 0; color < n_colors; ++color) {
    for (int j = 0; j < bs; ++j) {
      std::copy(u.begin(), u.end(), pert.begin());
      for (int b = color; b < nb; b += 3) {
        const int col = b * bs + j;
        step[col] = 1e-7 * (1.0 + std::abs(u[col]));
        pert[col] += step[col];
      }
      rhs(pert, out);
      for (int b = color; b < nb; b += 3) {
        const int col = b * bs + j;
        const int r0 = std::max(0, b - 1) * bs;
        const int r1 = std::min(nb, b + 2) * bs;
        for (int row = r0; row < r1; ++row)
          ab[static_cast<std::size_t>(col) * ldab + kl + ku + row - col] = (out[row] - base[row]) / step[col];
      }
    }
  }
  return ab;
}

NewtonReport be_step(std::vector<double>& u, double dt, const Rhs& rhs, const BlockTridiagonal& pattern,
                     const TimeControls& controls) {
  controls.validate();
  const int n = pattern.size();
  if (static_cast<int>(u.size()) != n) throw InvalidArgument("state size does not match the Jacobian pattern");
  const int bs = pattern.block_size;
  const int kl = 2 * bs - 1;
  const int ku = kl;
  const int ldab = 2 * kl + ku + 1;

  const std::vector<double> u_old = u;
  std::vector<double> l(n), g(n), trial(n);
  auto residual = [&](const std::vector<double>& v, std::vector<double>& out) {
    rhs(v, l);
    for (int i = 0; i < n; ++i) out[i] = v[i] - u_old[i] - dt * l[i];
    return norm2(out);
  };

  NewtonReport report;
  double r = residual(u, g);
  const double r0 = r;
  report.history.push_back(r);
  // a state already at the root (to round-off) needs no iteration
  const double floor = 1e-15 * (1.0 + norm2(u));
  auto converged = [&](double rr) { return rr <= controls.newton_tol * r0 || rr <= floor; };
  if (converged(r)) {
    report.residual = r0 > 0.0 ? r / r0 : 0.0;
    return report;
  }

  std::vector<lapack_int> ipiv(n);
  for (int it = 1; it <= controls.newton_max_iters; ++it) {
    auto ab = fd_jacobian_band(u, rhs, pattern);
    // A = I - dt J
    for (int col = 0; col < n; ++col) {
      for (int row = std::max(0, col - ku); row < std::min(n, col + kl + 1); ++row) {
        double& a = ab[static_cast<std::size_t>(col) * ldab + kl + ku + row - col];
        a = (row == col ? 1.0 : 0.0) - dt * a;
      }
    }
    std::vector<double> du(g);
    for (double& x : du) x = -x;
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(), ldab, ipiv.data(),
                                          du.data(), n);
    if (info != 0)
      throw StepFailure("singular Newton matrix (dgbsv info " + std::to_string(info) + ")", r / r0);

    double lambda = 1.0;
    double r_trial = 0.0;
    for (int damp = 0; damp < 8; ++damp) {
      for (int i = 0; i < n; ++i) trial[i] = u[i] + lambda * du[i];
      try {
        r_trial = residual(trial, g);
      } catch (const PositivityViolation&) {
        r_trial = std::numeric_limits<double>::infinity();
      }
      if (r_trial < r) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(r_trial)) throw StepFailure("Newton update left the admissible set", r / r0);
    u = trial;
    r = r_trial;
    report.iterations = it;
    report.history.push_back(r);
    // the residual can stagnate at a round-off floor of order dt |L| eps; a
    // negligible update then means the iterate is as good as it gets
    if (converged(r) || lambda * norm2(du) <= controls.newton_step_tol * (1.0 + norm2(u))) {
      report.residual = r / r0;
      return report;
    }
  }
  u = u_old;
  throw StepFailure("Newton did not converge in " + std::to_string(controls.newton_max_iters) +
                        " iterations",
                    r / r0);
}

double compute_dt_scalar(double h, double c, double mu, double cfl) {
  if (!(h > 0.0)) throw InvalidArgument("element size must be positive");
  if (!(cfl > 0.0)) throw InvalidArgument("CFL must be positive");
  double limit = std::numeric_limits<double>::infinity();
  if (c != 0.0) limit = std::min(limit, h / std::abs(c));
  if (mu > 0.0) limit = std::min(limit, h * h / mu);
  if (!std::isfinite(limit)) throw InvalidArgument("time step undefined when c = 0 and mu = 0");
  return cfl * limit;
}

SteadyReport march_to_steady(std::vector<double>& u, const Rhs& rhs, const BlockTridiagonal& pattern,
                             const std::function<double(std::span<const double>)>& dt_of,
                             const std::function<double(std::span<const double>)>& residual_norm,
                             const SteadyControls& controls) {
  controls.time.validate();
  SteadyReport report;
  double r = residual_norm(u);
  const double r0 = r;
  report.history.push_back(r);
  std::vector<double> best = u;
  double best_r = r;
  double shrink = 1.0;
  while (report.steps < controls.max_steps) {
    if (r <= controls.time.steady_tol) {
      report.converged = true;
      break;
    }
    const double growth = r > 0.0 ? std::min(controls.cfl_growth_max, std::max(1.0, r0 / r)) : 1.0;
    const double dt = dt_of(u) * growth * shrink;
    try {
      be_step(u, dt, rhs, pattern, controls.time);
      shrink = std::min(1.0, 2.0 * shrink);
    } catch (const StepFailure&) {
      shrink *= 0.5;
      if (shrink < 1e-6) throw;
      continue;
    }
    ++report.steps;
    r = residual_norm(u);
    report.history.push_back(r);
    if (!std::isfinite(r)) throw StepFailure("steady march diverged", r);
    if (r < best_r) {
      best_r = r;
      best = u;
    }
    const int w = controls.stall_window;
    if (w > 0 && report.steps >= 2 * w && r > controls.time.steady_tol) {
      const auto& h = report.history;
      const auto split = h.end() - w;
      if (*std::min_element(split, h.end()) > controls.stall_ratio * *std::min_element(h.begin(), split)) {
        report.stalled = true;
        u = best;
        r = best_r;
        break;
      }
    }
  }
  if (r <= controls.time.steady_tol) report.converged = true;
  report.residual = r;
  return report;
}

}  // namespace kfdg::time
