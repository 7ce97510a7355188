#pragma once

#include <complex>
#include <cstdint>

#include "gaf/errors.hpp"

namespace gaf {

using Complex = std::complex<double>;

/// Node index (column j along x, row k along y).
struct NodeIndex {
  int j = 0;
  int k = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Axis-aligned rectangular grid over [x_min,x_max] x [y_min,y_max] with
/// nx*ny nodes at node(j,k) = (x_min + j*hx) + i*(y_min + k*hy).
/// Rectangles are simply connected by construction.
struct GridDomain {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  int nx = 2, ny = 2;

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }

  std::int64_t size() const {
    return static_cast<std::int64_t>(nx) * static_cast<std::int64_t>(ny);
  }

  // Row-major storage, y outer / x inner.
  std::int64_t index(int j, int k) const {
    return static_cast<std::int64_t>(k) * nx + j;
  }

  double x(int j) const { return x_min + j * hx(); }
  double y(int k) const { return y_min + k * hy(); }
  Complex node(int j, int k) const { return {x(j), y(k)}; }
  Complex node(NodeIndex n) const { return node(n.j, n.k); }

  bool contains_index(int j, int k) const {
    return j >= 0 && j < nx && k >= 0 && k < ny;
  }
  bool contains_index(NodeIndex n) const { return contains_index(n.j, n.k); }

  friend bool operator==(const GridDomain&, const GridDomain&) = default;
};

GridDomain make_grid(double x_min, double x_max, double y_min, double y_max,
                     int nx, int ny);

inline void require_same_grid(const GridDomain& a, const GridDomain& b,
                              const char* where) {
  if (!(a == b))
    throw GridMismatch(std::string(where) + ": fields live on different grids");
}

} // namespace gaf
