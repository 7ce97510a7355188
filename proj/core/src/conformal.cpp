#include "gaf/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "gaf/vekua.hpp"

namespace gaf {

namespace {

std::string node_str(int j, int k) {
  return "(" + std::to_string(j) + "," + std::to_string(k) + ")";
}

// Discrete continuity across an edge: candidate and reference lie in the same
// half plane, i.e. |a - b| < |a + b|.
bool continuous(Complex a, Complex b) { return std::abs(a - b) < std::abs(a + b); }

} // namespace

HolomorphicChart chart_build(const ExprHandle& z_of_zeta, const GridDomain& grid_star,
                             NodeIndex branch_seed) {
  if (!z_of_zeta) throw Error("chart_build: empty map expression");
  if (!grid_star.contains_index(branch_seed.j, branch_seed.k))
    throw OutOfDomain("chart_build: branch seed " + node_str(branch_seed.j, branch_seed.k) +
                      " outside the grid");

  HolomorphicChart ch;
  ch.z_of_zeta = z_of_zeta;
  ch.dz_dzeta = ExprHandle{derivative(z_of_zeta.expr), z_of_zeta.params};
  ch.grid_star = grid_star;
  ch.branch_seed = branch_seed;
  const std::size_t n = grid_star.size();
  ch.map.resize(n);
  ch.deriv.resize(n);
  ch.sqrt_deriv.resize(n);

  for (int k = 0; k < grid_star.ny; ++k)
    for (int j = 0; j < grid_star.nx; ++j) {
      const std::size_t i = grid_star.index(j, k);
      const Complex zeta = grid_star.node(j, k);
      ch.map[i] = z_of_zeta(zeta);
      ch.deriv[i] = ch.dz_dzeta(zeta);
      if (std::abs(ch.deriv[i]) < kDerivativeFloor)
        throw CriticalPoint("chart_build: |dz/dzeta| = " +
                            std::to_string(std::abs(ch.deriv[i])) + " at node " +
                            node_str(j, k) + "; the map is not locally bijective");
    }

  // Branch signs by BFS. principal[i] is the cut-sensitive square root; the
  // propagated sign sigma flips wherever adjacent principal values jump.
  std::vector<Complex> principal(n);
  for (std::size_t i = 0; i < n; ++i) principal[i] = std::sqrt(ch.deriv[i]);
  std::vector<signed char> sigma(n, 0);
  std::deque<std::size_t> queue;
  const std::size_t seed_i = grid_star.index(branch_seed.j, branch_seed.k);
  sigma[seed_i] = 1;
  queue.push_back(seed_i);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const int j = static_cast<int>(i) % grid_star.nx;
    const int k = static_cast<int>(i) / grid_star.nx;
    const Complex here = static_cast<double>(sigma[i]) * principal[i];
    const int dj[4] = {1, -1, 0, 0};
    const int dk[4] = {0, 0, 1, -1};
    for (int e = 0; e < 4; ++e) {
      const int j2 = j + dj[e], k2 = k + dk[e];
      if (!grid_star.contains_index(j2, k2)) continue;
      const std::size_t i2 = grid_star.index(j2, k2);
      const bool plus_ok = continuous(principal[i2], here);
      const bool minus_ok = continuous(-principal[i2], here);
      if (plus_ok == minus_ok)
        throw BranchConflict("chart_build: no continuous sign across edge " +
                             node_str(j, k) + "-" + node_str(j2, k2));
      const signed char want = plus_ok ? 1 : -1;
      if (sigma[i2] == 0) {
        sigma[i2] = want;
        queue.push_back(i2);
      } else if (sigma[i2] != want) {
        throw BranchConflict("chart_build: inconsistent branch around node " +
                             node_str(j2, k2) + "; the derivative winds around zero");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    ch.sqrt_deriv[i] = static_cast<double>(sigma[i]) * principal[i];
  return ch;
}

namespace {

constexpr double kSnapCells = 1e-9;     // snap-to-node tolerance, in cells
constexpr int kInterpolationMargin = 2; // cells kept clear of the boundary

// Cubic Lagrange weights for the 4 nodes at local offsets 0..3, evaluated at
// t in node units measured from the first stencil node.
void lagrange4(double t, double w[4]) {
  w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
}

} // namespace

Complex field_value_at(const ComplexField& f, Complex z) {
  const GridDomain& g = f.domain;
  const double tx = (z.real() - g.x_min) / g.hx();
  const double ty = (z.imag() - g.y_min) / g.hy();

  const int jn = static_cast<int>(std::lround(tx));
  const int kn = static_cast<int>(std::lround(ty));
  if (std::abs(tx - jn) <= kSnapCells && std::abs(ty - kn) <= kSnapCells &&
      g.contains_index(jn, kn))
    return f.at(jn, kn);

  const bool inside = tx >= -kSnapCells && tx <= g.nx - 1 + kSnapCells &&
                      ty >= -kSnapCells && ty <= g.ny - 1 + kSnapCells;
  if (!inside)
    throw OutOfDomain("field_value_at: point (" + std::to_string(z.real()) + "," +
                      std::to_string(z.imag()) + ") outside the field domain");
  if (f.expr) return f.expr(z);

  if (tx < kInterpolationMargin || tx > g.nx - 1 - kInterpolationMargin ||
      ty < kInterpolationMargin || ty > g.ny - 1 - kInterpolationMargin)
    throw OutOfDomain("field_value_at: point (" + std::to_string(z.real()) + "," +
                      std::to_string(z.imag()) +
                      ") inside the rectangle but within the 2-cell interpolation margin");

  const int j0 = std::clamp(static_cast<int>(std::floor(tx)) - 1, 0, g.nx - 4);
  const int k0 = std::clamp(static_cast<int>(std::floor(ty)) - 1, 0, g.ny - 4);
  double wx[4], wy[4];
  lagrange4(tx - j0, wx);
  lagrange4(ty - k0, wy);
  Complex acc(0, 0);
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) acc += wy[b] * wx[a] * f.at(j0 + a, k0 + b);
  return acc;
}

PullbackResult pullback(const ComplexField& field, const HolomorphicChart& chart) {
  const GridDomain& gs = chart.grid_star;
  ComplexField out{gs, std::vector<Complex>(gs.size()), field.weight, {}};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const Complex v = field_value_at(field, chart.map[i]);
    switch (field.weight) {
      case FieldWeight::Scalar: out.values[i] = v; break;
      case FieldWeight::Spinor: out.values[i] = v * chart.sqrt_deriv[i]; break;
      case FieldWeight::Density: out.values[i] = v * std::abs(chart.deriv[i]); break;
      default: throw UnsupportedWeight("pullback: unknown field weight");
    }
  }
  return {std::move(out), print(chart.z_of_zeta.expr)};
}

std::pair<double, double> verify_transformed_pair(const ComplexField& u_star,
                                                  const ComplexField& psi_star,
                                                  const ComplexField& psi_plus_star,
                                                  DiffScheme scheme) {
  return residual_pair(u_star, psi_star, psi_plus_star, scheme);
}

double omega_invariance_check(const OmegaPotential& omega_z, const ComplexField& psi_star,
                              const ComplexField& psi_plus_star,
                              const HolomorphicChart& chart, NodeIndex anchor_star,
                              double exact_tol, DiffScheme scheme) {
  require_same_grid(chart.grid_star, psi_star.domain, "omega_invariance_check");
  require_same_grid(chart.grid_star, psi_plus_star.domain, "omega_invariance_check");
  if (!chart.grid_star.contains_index(anchor_star.j, anchor_star.k))
    throw OutOfDomain("omega_invariance_check: anchor outside the zeta grid");

  const Complex matched =
      field_value_at(omega_z.field, chart.z_at(anchor_star.j, anchor_star.k));
  const OmegaPotential w_star =
      omega_build(psi_star, psi_plus_star, anchor_star, matched.imag(), exact_tol, scheme,
                  "pullback:" + omega_z.source);

  double sup = 0.0;
  for (std::size_t i = 0; i < w_star.field.values.size(); ++i) {
    const Complex composed = field_value_at(omega_z.field, chart.map[i]);
    sup = std::max(sup, std::abs(w_star.field.values[i] - composed));
  }
  return sup;
}

} // namespace gaf
