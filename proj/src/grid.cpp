#include "efk/grid.hpp"

#include <stdexcept>
#include <string>

namespace efk {

PeriodicGrid build_grid(double x_lo, double x_hi, double y_lo, double y_hi, int n_x, int n_y) {
  if (!(x_hi > x_lo) || !(y_hi > y_lo))
    throw std::invalid_argument("build_grid: domain extents must be positive");
  if (n_x < 2 || n_y < 2)
    throw std::invalid_argument("build_grid: need at least two nodes per axis, got " +
                                std::to_string(n_x) + "x" + std::to_string(n_y));
  PeriodicGrid g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.y_lo = y_lo;
  g.y_hi = y_hi;
  g.n_x = n_x;
  g.n_y = n_y;
  g.h_x = (x_hi - x_lo) / n_x;
  g.h_y = (y_hi - y_lo) / n_y;
  return g;
}

Field::Field(const PeriodicGrid& g, Matrix v) : grid(g), values(std::move(v)) {
  require_shape(*this, g);
}

void require_shape(const Field& f, const PeriodicGrid& grid) {
  if (f.values.rows() != grid.n_x || f.values.cols() != grid.n_y)
    throw std::invalid_argument("field shape " + std::to_string(f.values.rows()) + "x" +
                                std::to_string(f.values.cols()) + " does not match grid " +
                                std::to_string(grid.n_x) + "x" + std::to_string(grid.n_y));
}

}  // namespace efk
