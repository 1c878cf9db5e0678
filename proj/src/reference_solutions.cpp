#include "kfdg/reference_solutions.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "kfdg/errors.hpp"

namespace kfdg::reference {

using std::numbers::pi;

double exact_convdiff(double x, double t, double c, double mu) {
  return -std::exp(-mu * pi * pi * t) * std::sin(pi * (x - c * t));
}

double exact_convdiff_dx(double x, double t, double c, double mu) {
  return -pi * std::exp(-mu * pi * pi * t) * std::cos(pi * (x - c * t));
}

double exact_test3(double x, double t, double c, double mu) {
  const double k1 = 0.5 * pi;
  const double k3 = 1.5 * pi;
  const double xi = x - c * t;
  return 4.0 + 8.0 / pi * std::exp(-mu * k1 * k1 * t) * std::sin(k1 * xi) +
         16.0 / (3.0 * pi) * std::exp(-mu * k3 * k3 * t) * std::sin(k3 * xi);
}

double exact_test3_dx(double x, double t, double c, double mu) {
  const double k1 = 0.5 * pi;
  const double k3 = 1.5 * pi;
  const double xi = x - c * t;
  return 8.0 / pi * k1 * std::exp(-mu * k1 * k1 * t) * std::cos(k1 * xi) +
         16.0 / (3.0 * pi) * k3 * std::exp(-mu * k3 * k3 * t) * std::cos(k3 * xi);
}

gas::Primitive rankine_hugoniot(double mach, double gamma, const gas::Primitive& upstream, double R) {
  if (!(mach > 1.0)) throw InvalidArgument("Rankine-Hugoniot needs an upstream Mach number above 1");
  if (!(gamma > 1.0)) throw InvalidArgument("gamma must exceed 1");
  gas::check_physical(upstream);
  const double m2 = mach * mach;
  const double rho_ratio = (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
  const double p_ratio = 1.0 + 2.0 * gamma * (m2 - 1.0) / (gamma + 1.0);
  gas::Primitive down;
  down.rho = upstream.rho * rho_ratio;
  down.u = upstream.u / rho_ratio;
  const double p2 = upstream.rho * R * upstream.T * p_ratio;
  down.T = p2 / (down.rho * R);
  return down;
}

double ShockSetup::u1() const { return mach * std::sqrt(gamma * R * T1); }

gas::GasModel ShockSetup::gas() const {
  gas::GasModel g;
  g.gamma = gamma;
  g.R = R;
  g.prandtl = prandtl;
  g.viscosity = gas::ViscosityLaw::power(mu1, T1, omega);
  return g;
}

gas::Primitive ShockSetup::upstream() const { return {rho1, u1(), T1}; }

void ShockSetup::validate() const {
  if (!(mach > 1.0)) throw ConfigError("mach", "must exceed 1");
  if (!(gamma > 1.0)) throw ConfigError("gamma", "must exceed 1");
  if (!(prandtl > 0.0)) throw ConfigError("prandtl", "must be positive");
  if (!(mu1 > 0.0)) throw ConfigError("mu1", "must be positive");
  if (!(rho1 > 0.0) || !(T1 > 0.0) || !(R > 0.0)) throw ConfigError("upstream", "must be physical");
}

void ShockProfile::rhs(double u, double T, double& du, double& dT) const {
  const auto g = setup_.gas();
  const double mu = g.mu(T);
  const double kappa = g.kappa(T);
  du = 0.75 / mu * (m_ * u + m_ * g.R * T / u - P_);
  dT = (m_ * g.cp() * T - 0.5 * m_ * u * u - m_ * g.R * T + P_ * u - E_) / kappa;
}

namespace {

struct Eigen2 {
  double lo, hi;
};

Eigen2 eigenvalues(double a, double b, double c, double d) {
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) throw ProfileError("complex eigenvalues at a shock end state");
  const double r = std::sqrt(disc);
  return {0.5 * (tr - r), 0.5 * (tr + r)};
}

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

ShockProfile ShockProfile::compute(const ShockSetup& setup, double rtol) {
  setup.validate();
  ShockProfile prof;
  prof.setup_ = setup;
  const auto g = setup.gas();
  const auto up = setup.upstream();
  prof.down_ = rankine_hugoniot(setup.mach, setup.gamma, up, setup.R);
  prof.m_ = up.rho * up.u;
  prof.P_ = prof.m_ * up.u + up.p(g);
  prof.E_ = prof.m_ * (g.cp() * up.T + 0.5 * up.u * up.u);

  auto jacobian = [&](const gas::Primitive& w, double& a, double& b, double& c, double& d) {
    const double mu = g.mu(w.T);
    const double kappa = g.kappa(w.T);
    a = 0.75 / mu * (prof.m_ - prof.m_ * g.R * w.T / (w.u * w.u));
    b = 0.75 / mu * (prof.m_ * g.R / w.u);
    c = (prof.P_ - prof.m_ * w.u) / kappa;
    d = prof.m_ * g.cv() / kappa;
  };

  double a, b, c, d;
  jacobian(prof.down_, a, b, c, d);
  const auto ev_down = eigenvalues(a, b, c, d);
  if (!(ev_down.lo < 0.0 && ev_down.hi > 0.0)) throw ProfileError("downstream state is not a saddle");
  prof.lambda_down_ = ev_down.lo;
  std::array<double, 2> vec{b, ev_down.lo - a};
  if (std::abs(vec[0]) + std::abs(vec[1]) == 0.0) vec = {ev_down.lo - d, c};
  const double norm = std::hypot(vec[0], vec[1]);
  vec = {vec[0] / norm, vec[1] / norm};
  if (vec[0] < 0.0) vec = {-vec[0], -vec[1]};  // point toward the upstream velocity

  jacobian(up, a, b, c, d);
  const auto ev_up = eigenvalues(a, b, c, d);
  if (!(ev_up.lo > 0.0)) throw ProfileError("upstream state is not an unstable node");
  prof.lambda_up_ = ev_up.lo;

  // integrate in s = -x from the saddle along its stable direction
  using State = std::array<double, 2>;
  const double du_total = up.u - prof.down_.u;
  const double delta = 1e-9 * du_total;
  State y{prof.down_.u + delta * vec[0], prof.down_.T + delta * vec[1]};
  auto sys = [&prof](const State& s, State& dsdt, double) {
    double du, dT;
    prof.rhs(s[0], s[1], du, dT);
    dsdt = {-du, -dT};
  };
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_dense_output(1e-14 * std::max(up.u, up.T), rtol,
                                           odeint::runge_kutta_dopri5<State>());
  const double thickness_scale = setup.mu1 / prof.m_;
  stepper.initialize(y, 0.0, 1e-3 * thickness_scale);

  std::vector<double> s_list{0.0};
  std::vector<State> y_list{y};
  const int max_steps = 400000;
  // the integrator wanders at the level of its tolerance near the node; the
  // exponential tail covers the remaining distance
  const double arrive = std::max(1e-12, 100.0 * rtol);
  bool reached = false;
  for (int i = 0; i < max_steps; ++i) {
    stepper.do_step(sys);
    const State cur = stepper.current_state();
    if (!(cur[0] > 0.0) || !(cur[1] > 0.0) || !std::isfinite(cur[0]) || !std::isfinite(cur[1]))
      throw ProfileError("shock ODE left the physical region at s = " + std::to_string(stepper.current_time()));
    s_list.push_back(stepper.current_time());
    y_list.push_back(cur);
    if (std::abs(cur[0] - up.u) < arrive * up.u && std::abs(cur[1] - up.T) < arrive * up.T) {
      reached = true;
      break;
    }
    if (cur[0] > up.u * (1.0 + 1e-6))
      throw ProfileError("shock ODE overshot the upstream velocity (u = " + std::to_string(cur[0]) + ")");
  }
  if (!reached)
    throw ProfileError("shock ODE did not reach the upstream state within " + std::to_string(max_steps) +
                       " steps; last u = " + std::to_string(y_list.back()[0]) +
                       ", T = " + std::to_string(y_list.back()[1]));

  const std::size_t n = s_list.size();
  prof.xs_.resize(n);
  prof.us_.resize(n);
  prof.ts_.resize(n);
  prof.dus_.resize(n);
  prof.dts_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    prof.xs_[i] = -s_list[j];
    prof.us_[i] = y_list[j][0];
    prof.ts_[i] = y_list[j][1];
    prof.rhs(prof.us_[i], prof.ts_[i], prof.dus_[i], prof.dts_[i]);
  }

  // shift so u(0) is the mid velocity
  const double u_mid = 0.5 * (up.u + prof.down_.u);
  std::size_t k = 0;
  while (k + 1 < n && prof.us_[k + 1] > u_mid) ++k;
  if (k + 1 >= n) throw ProfileError("profile does not cross the mid velocity");
  double lo = prof.xs_[k], hi = prof.xs_[k + 1];
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double um = hermite(prof.xs_[k], prof.xs_[k + 1], prof.us_[k], prof.us_[k + 1], prof.dus_[k],
                              prof.dus_[k + 1], mid);
    (um > u_mid ? lo : hi) = mid;
  }
  const double x0 = 0.5 * (lo + hi);
  for (double& x : prof.xs_) x -= x0;
  return prof;
}

ProfileSample ShockProfile::at(double x) const {
  const auto g = setup_.gas();
  const auto up = setup_.upstream();
  double u, T;
  if (x <= xs_.front()) {
    const double f = std::exp(lambda_up_ * (x - xs_.front()));
    u = up.u + (us_.front() - up.u) * f;
    T = up.T + (ts_.front() - up.T) * f;
  } else if (x >= xs_.back()) {
    const double f = std::exp(lambda_down_ * (x - xs_.back()));
    u = down_.u + (us_.back() - down_.u) * f;
    T = down_.T + (ts_.back() - down_.T) * f;
  } else {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
    u = hermite(xs_[k], xs_[k + 1], us_[k], us_[k + 1], dus_[k], dus_[k + 1], x);
    T = hermite(xs_[k], xs_[k + 1], ts_[k], ts_[k + 1], dts_[k], dts_[k + 1], x);
  }
  double du, dT;
  rhs(u, T, du, dT);
  ProfileSample s;
  s.x = x;
  s.u = u;
  s.T = T;
  s.rho = m_ / u;
  s.tau = 4.0 / 3.0 * g.mu(T) * du;
  s.q = -g.kappa(T) * dT;
  return s;
}

gas::Primitive ShockProfile::state(double x) const {
  const auto s = at(x);
  return {s.rho, s.u, s.T};
}

std::vector<ProfileSample> ShockProfile::sample(double x_min, double x_max, int n) const {
  if (n < 2 || !(x_max > x_min)) throw InvalidArgument("profile sampling needs n >= 2 and x_max > x_min");
  std::vector<ProfileSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(at(x_min + (x_max - x_min) * i / (n - 1)));
  return out;
}

double ShockProfile::thickness() const {
  double g = 0.0;
  for (double d : dus_) g = std::max(g, std::abs(d));
  return (setup_.upstream().u - down_.u) / g;
}

double ShockProfile::invariant_defect() const {
  const auto g = setup_.gas();
  double worst = 0.0;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double u = us_[i], T = ts_[i];
    const double rho = m_ / u;
    const double tau = 4.0 / 3.0 * g.mu(T) * dus_[i];
    const double q = -g.kappa(T) * dts_[i];
    const double mom = m_ * u + rho * g.R * T - tau;
    const double en = m_ * (g.cp() * T + 0.5 * u * u) - tau * u + q;
    worst = std::max({worst, std::abs(rho * u - m_) / m_, std::abs(mom - P_) / P_, std::abs(en - E_) / E_});
  }
  return worst;
}

void write_profile_table(const std::string& path, const std::vector<ProfileSample>& samples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "# x rho u T tau q\n" << std::scientific << std::setprecision(12);
  for (const auto& s : samples)
    out << s.x << ' ' << s.rho << ' ' << s.u << ' ' << s.T << ' ' << s.tau << ' ' << s.q << '\n';
}

}  // namespace kfdg::reference
