#pragma once

#include <vector>

namespace kfdg {

/// Uniform 1-D mesh of `n_elements` intervals. Face j sits at faces[j]; element
/// j spans [faces[j], faces[j+1]]. On a periodic mesh face 0 and face N are the
/// same point.
struct Mesh1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_elements = 0;
  bool periodic = false;
  std::vector<double> faces;

  double h() const { return (x_max - x_min) / n_elements; }
  double element_size(int j) const { return faces[j + 1] - faces[j]; }
  double center(int j) const { return 0.5 * (faces[j] + faces[j + 1]); }
  int n_faces() const { return n_elements + 1; }

  /// Element containing x; points on a face belong to the element on the right
  /// (the last face belongs to the last element).
  int locate(double x) const;
};

Mesh1D build_uniform_mesh(double x_min, double x_max, int n, bool periodic);

}  // namespace kfdg
