#pragma once

#include <vector>

namespace kfdg {

struct LegendreValues {
  std::vector<double> values;       // P_0..P_k
  std::vector<double> derivatives;  // P'_0..P'_k
};

/// Legendre polynomials and their derivatives by the three-term recurrence.
LegendreValues legendre_eval(int k, double xi);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// q-point Gauss-Legendre rule on [-1, 1], exact for degree <= 2q-1.
QuadratureRule gauss_quadrature(int q);

/// Modal Legendre basis P_0..P_k on the reference element [-1, 1], tabulated
/// at the Gauss points of a rule with `quad_order` points (default k+2).
///
/// Reference derivatives are d/dxi; multiply by 2/h for d/dx.
class Basis {
 public:
  explicit Basis(int degree, int quad_order = 0);

  int degree() const { return degree_; }
  int n_modes() const { return degree_ + 1; }
  const QuadratureRule& quadrature() const { return quad_; }
  int n_points() const { return quad_.size(); }

  double value(int mode, int point) const { return values_[point * n_modes() + mode]; }
  double derivative(int mode, int point) const { return derivs_[point * n_modes() + mode]; }

  /// P_m(+1) and P_m(-1).
  double right_value(int /*mode*/) const { return 1.0; }
  double left_value(int mode) const { return mode % 2 == 0 ? 1.0 : -1.0; }
  /// P'_m(+1) = m(m+1)/2 and P'_m(-1) = (-1)^(m+1) m(m+1)/2.
  double right_derivative(int mode) const { return 0.5 * mode * (mode + 1); }
  double left_derivative(int mode) const {
    return (mode % 2 == 0 ? -1.0 : 1.0) * 0.5 * mode * (mode + 1);
  }

  /// Diagonal of the reference mass matrix, 2/(2m+1).
  double mass(int mode) const { return 2.0 / (2 * mode + 1); }

 private:
  int degree_;
  QuadratureRule quad_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

}  // namespace kfdg
