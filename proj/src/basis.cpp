#include "kfdg/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kfdg/errors.hpp"

namespace kfdg {

LegendreValues legendre_eval(int k, double xi) {
  if (k < 0) throw InvalidArgument("negative polynomial degree");
  LegendreValues out;
  out.values.assign(k + 1, 0.0);
  out.derivatives.assign(k + 1, 0.0);
  out.values[0] = 1.0;
  if (k >= 1) {
    out.values[1] = xi;
    out.derivatives[1] = 1.0;
  }
  for (int n = 1; n < k; ++n) {
    out.values[n + 1] = ((2 * n + 1) * xi * out.values[n] - n * out.values[n - 1]) / (n + 1);
    // P'_{n+1} = P'_{n-1} + (2n+1) P_n
    out.derivatives[n + 1] = out.derivatives[n - 1] + (2 * n + 1) * out.values[n];
  }
  return out;
}

QuadratureRule gauss_quadrature(int q) {
  if (q < 1) throw InvalidArgument("quadrature needs at least one point, got " + std::to_string(q));
  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  // Newton iteration on P_q from the Chebyshev-like initial guesses; roots are
  // symmetric so only half are computed.
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto lv = legendre_eval(q, x);
      dp = lv.derivatives[q];
      const double dx = lv.values[q] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre_eval(q, x).derivatives[q];
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

Basis::Basis(int degree, int quad_order)
    : degree_(degree), quad_(gauss_quadrature(quad_order > 0 ? quad_order : degree + 2)) {
  if (degree < 0) throw InvalidArgument("negative polynomial degree");
  const int nm = n_modes();
  values_.resize(static_cast<std::size_t>(quad_.size()) * nm);
  derivs_.resize(values_.size());
  for (int p = 0; p < quad_.size(); ++p) {
    const auto lv = legendre_eval(degree_, quad_.nodes[p]);
    for (int m = 0; m < nm; ++m) {
      values_[p * nm + m] = lv.values[m];
      derivs_[p * nm + m] = lv.derivatives[m];
    }
  }
}

}  // namespace kfdg
