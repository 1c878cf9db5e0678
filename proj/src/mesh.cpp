#include "kfdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfdg/errors.hpp"

namespace kfdg {

Mesh1D build_uniform_mesh(double x_min, double x_max, int n, bool periodic) {
  if (n < 1) throw InvalidArgument("mesh needs at least one element, got " + std::to_string(n));
  if (!(x_max > x_min)) throw InvalidArgument("mesh interval is empty or inverted");
  Mesh1D mesh;
  mesh.x_min = x_min;
  mesh.x_max = x_max;
  mesh.n_elements = n;
  mesh.periodic = periodic;
  mesh.faces.resize(n + 1);
  const double h = (x_max - x_min) / n;
  for (int j = 0; j <= n; ++j) mesh.faces[j] = x_min + j * h;
  mesh.faces[n] = x_max;
  return mesh;
}

int Mesh1D::locate(double x) const {
  const int j = static_cast<int>(std::floor((x - x_min) / h()));
  return std::clamp(j, 0, n_elements - 1);
}

}  // namespace kfdg
