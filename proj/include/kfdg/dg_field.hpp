#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kfdg/basis.hpp"
#include "kfdg/mesh.hpp"

namespace kfdg {

/// Trace side at a face. `Plus` is the limit from the left of the face,
/// u+(x) = lim u(x - e); `Minus` is the limit from the right. Jumps are
/// [u] = u+ - u-.
enum class Side { Plus, Minus };

/// Modal DG coefficients laid out as (element, mode, component), component
/// fastest.
class DGField {
 public:
  DGField(Mesh1D mesh, Basis basis, int n_components = 1);

  const Mesh1D& mesh() const { return mesh_; }
  const Basis& basis() const { return basis_; }
  int n_components() const { return n_comp_; }
  int n_modes() const { return basis_.n_modes(); }
  int n_elements() const { return mesh_.n_elements; }
  /// Coefficients per element, n_modes * n_components.
  int block_size() const { return n_modes() * n_comp_; }

  std::span<double> coefficients() { return coeffs_; }
  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> element_block(int e) {
    return std::span<double>(coeffs_).subspan(static_cast<std::size_t>(e) * block_size(), block_size());
  }
  std::span<const double> element_block(int e) const {
    return std::span<const double>(coeffs_).subspan(static_cast<std::size_t>(e) * block_size(),
                                                    block_size());
  }

  double& coeff(int e, int m, int c) { return coeffs_[index(e, m, c)]; }
  double coeff(int e, int m, int c) const { return coeffs_[index(e, m, c)]; }
  std::size_t index(int e, int m, int c) const {
    return (static_cast<std::size_t>(e) * n_modes() + m) * n_comp_ + c;
  }

  /// Value at reference coordinate xi in element e.
  double value(int e, double xi, int c = 0) const;
  /// Physical derivative d/dx at reference coordinate xi in element e.
  double derivative(int e, double xi, int c = 0) const;
  /// Value at physical x (element located by Mesh1D::locate).
  double evaluate(double x, int c = 0) const;
  double evaluate_derivative(double x, int c = 0) const;

  /// Element supplying the trace on `side` of `face`; throws MissingNeighbor
  /// on a non-periodic boundary face without an element on that side.
  int element_on_side(int face, Side side) const;

  std::vector<double> trace(int face, Side side) const;
  std::vector<double> trace_derivative(int face, Side side) const;
  /// [u] = u+ - u- for component c at an interior (or periodic) face.
  double jump(int face, int c = 0) const;

 private:
  Mesh1D mesh_;
  Basis basis_;
  int n_comp_;
  std::vector<double> coeffs_;
};

using ScalarFunction = std::function<double(double)>;
using VectorFunction = std::function<void(double, std::span<double>)>;

/// Element-wise L2 projection using the basis quadrature.
DGField project(const ScalarFunction& f, const Mesh1D& mesh, const Basis& basis);
DGField project(const VectorFunction& f, const Mesh1D& mesh, const Basis& basis, int n_components);

}  // namespace kfdg
