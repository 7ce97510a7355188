#include "gaf/grid.hpp"

#include <string>

namespace gaf {

GridDomain make_grid(double x_min, double x_max, double y_min, double y_max,
                     int nx, int ny) {
  if (nx < 2 || ny < 2)
    throw DegenerateGrid("make_grid: node counts must be >= 2 (got nx=" +
                         std::to_string(nx) + ", ny=" + std::to_string(ny) + ")");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw DegenerateGrid("make_grid: bounds must be ordered (x_min < x_max, y_min < y_max)");
  GridDomain g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.y_min = y_min;
  g.y_max = y_max;
  g.nx = nx;
  g.ny = ny;
  return g;
}

} // namespace gaf
