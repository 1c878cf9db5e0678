#include "kfdg/dg_field.hpp"

#include <utility>

#include "kfdg/errors.hpp"

namespace kfdg {

DGField::DGField(Mesh1D mesh, Basis basis, int n_components)
    : mesh_(std::move(mesh)), basis_(std::move(basis)), n_comp_(n_components) {
  if (n_components < 1) throw InvalidArgument("field needs at least one component");
  coeffs_.assign(static_cast<std::size_t>(mesh_.n_elements) * block_size(), 0.0);
}

double DGField::value(int e, double xi, int c) const {
  const auto lv = legendre_eval(basis_.degree(), xi);
  double v = 0.0;
  for (int m = 0; m < n_modes(); ++m) v += coeff(e, m, c) * lv.values[m];
  return v;
}

double DGField::derivative(int e, double xi, int c) const {
  const auto lv = legendre_eval(basis_.degree(), xi);
  double v = 0.0;
  for (int m = 0; m < n_modes(); ++m) v += coeff(e, m, c) * lv.derivatives[m];
  return v * 2.0 / mesh_.element_size(e);
}

double DGField::evaluate(double x, int c) const {
  const int e = mesh_.locate(x);
  const double xi = 2.0 * (x - mesh_.center(e)) / mesh_.element_size(e);
  return value(e, xi, c);
}

double DGField::evaluate_derivative(double x, int c) const {
  const int e = mesh_.locate(x);
  const double xi = 2.0 * (x - mesh_.center(e)) / mesh_.element_size(e);
  return derivative(e, xi, c);
}

int DGField::element_on_side(int face, Side side) const {
  const int n = mesh_.n_elements;
  if (face < 0 || face > n) throw InvalidArgument("face index out of range");
  if (side == Side::Plus) {
    if (face == 0) {
      if (!mesh_.periodic) throw MissingNeighbor(face, "+");
      return n - 1;
    }
    return face - 1;
  }
  if (face == n) {
    if (!mesh_.periodic) throw MissingNeighbor(face, "-");
    return 0;
  }
  return face;
}

std::vector<double> DGField::trace(int face, Side side) const {
  const int e = element_on_side(face, side);
  std::vector<double> out(n_comp_, 0.0);
  for (int m = 0; m < n_modes(); ++m) {
    const double phi = side == Side::Plus ? basis_.right_value(m) : basis_.left_value(m);
    for (int c = 0; c < n_comp_; ++c) out[c] += coeff(e, m, c) * phi;
  }
  return out;
}

std::vector<double> DGField::trace_derivative(int face, Side side) const {
  const int e = element_on_side(face, side);
  const double scale = 2.0 / mesh_.element_size(e);
  std::vector<double> out(n_comp_, 0.0);
  for (int m = 0; m < n_modes(); ++m) {
    const double dphi = side == Side::Plus ? basis_.right_derivative(m) : basis_.left_derivative(m);
    for (int c = 0; c < n_comp_; ++c) out[c] += coeff(e, m, c) * dphi * scale;
  }
  return out;
}

double DGField::jump(int face, int c) const {
  return trace(face, Side::Plus)[c] - trace(face, Side::Minus)[c];
}

DGField project(const ScalarFunction& f, const Mesh1D& mesh, const Basis& basis) {
  return project([&f](double x, std::span<double> out) { out[0] = f(x); }, mesh, basis, 1);
}

DGField project(const VectorFunction& f, const Mesh1D& mesh, const Basis& basis, int n_components) {
  DGField field(mesh, basis, n_components);
  const auto& quad = basis.quadrature();
  std::vector<double> fx(n_components);
  for (int e = 0; e < mesh.n_elements; ++e) {
    const double xc = mesh.center(e);
    const double half = 0.5 * mesh.element_size(e);
    for (int p = 0; p < quad.size(); ++p) {
      f(xc + half * quad.nodes[p], fx);
      for (int m = 0; m < basis.n_modes(); ++m) {
        const double w = quad.weights[p] * basis.value(m, p) / basis.mass(m);
        for (int c = 0; c < n_components; ++c) field.coeff(e, m, c) += w * fx[c];
      }
    }
  }
  return field;
}

}  // namespace kfdg
