#pragma once

#include <Eigen/Dense>

namespace efk {

using Matrix = Eigen::MatrixXd;

/// Uniform periodic mesh on [x_lo, x_hi) x [y_lo, y_hi). The node at the
/// upper bound is identified with the node at the lower bound.
struct PeriodicGrid {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
  int n_x = 2, n_y = 2;
  double h_x = 0.5, h_y = 0.5;

  double x(int i) const { return x_lo + i * h_x; }
  double y(int j) const { return y_lo + j * h_y; }
  double cell_area() const { return h_x * h_y; }
  double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;
};

/// Throws std::invalid_argument on non-positive extents or fewer than two
/// nodes along an axis.
PeriodicGrid build_grid(double x_lo, double x_hi, double y_lo, double y_hi, int n_x, int n_y);

/// Dense grid function. Rows run along x, columns along y; Eigen's
/// column-major storage therefore matches the lexicographic (x fastest)
/// vector layout of the semi-discrete system.
struct Field {
  PeriodicGrid grid;
  Matrix values;

  Field() = default;
  explicit Field(const PeriodicGrid& g) : grid(g), values(Matrix::Zero(g.n_x, g.n_y)) {}
  Field(const PeriodicGrid& g, Matrix v);

  static Field constant(const PeriodicGrid& g, double c) {
    return Field(g, Matrix::Constant(g.n_x, g.n_y, c));
  }

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  double operator()(int i, int j) const { return values(i, j); }
  double& operator()(int i, int j) { return values(i, j); }
};

/// Throws std::invalid_argument if the field's shape does not match `grid`.
void require_shape(const Field& f, const PeriodicGrid& grid);

}  // namespace efk
