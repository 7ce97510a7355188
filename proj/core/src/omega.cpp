#include "gaf/omega.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace gaf {

std::vector<Complex> cumulative_integral(const std::vector<Complex>& f, double h) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n, Complex(0, 0));
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  if (n == 3) {
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    out[2] = out[1] + h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]);
    return out;
  }
  for (std::size_t m = 0; m + 1 < n; ++m) {
    Complex inc;
    if (m == 0)
      inc = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    else if (m + 2 == n)
      inc = h / 24.0 * (f[m - 2] - 5.0 * f[m - 1] + 19.0 * f[m] + 9.0 * f[m + 1]);
    else
      inc = h / 24.0 * (-f[m - 1] + 13.0 * f[m] + 13.0 * f[m + 1] - f[m + 2]);
    out[m + 1] = out[m] + inc;
  }
  return out;
}

namespace {

// Restrictions of the 1-form g dz - conj(g) dzbar to grid lines: along a
// horizontal leg it is (g - conj g) dx, along a vertical leg i(g + conj g) dy.
// Both are purely imaginary, which is what makes omega imaginary-valued for
// any integration path, closed form or not.
Complex horiz_integrand(Complex g) { return g - std::conj(g); }
Complex vert_integrand(Complex g) { return Complex(0, 1) * (g + std::conj(g)); }

ComplexField integrate_l_paths(const ComplexField& prod, NodeIndex a, double kappa,
                               bool horizontal_first) {
  const GridDomain& g = prod.domain;
  ComplexField w{g, std::vector<Complex>(g.size()), FieldWeight::Scalar, {}};
  const Complex ik(0.0, kappa);
  if (horizontal_first) {
    std::vector<Complex> row(static_cast<std::size_t>(g.nx));
    for (int j = 0; j < g.nx; ++j) row[j] = horiz_integrand(prod.at(j, a.k));
    const auto h_leg = cumulative_integral(row, g.hx());
    std::vector<Complex> col(static_cast<std::size_t>(g.ny));
    for (int j = 0; j < g.nx; ++j) {
      for (int k = 0; k < g.ny; ++k) col[k] = vert_integrand(prod.at(j, k));
      const auto v_leg = cumulative_integral(col, g.hy());
      const Complex base = ik + (h_leg[j] - h_leg[a.j]);
      for (int k = 0; k < g.ny; ++k) w.at(j, k) = base + (v_leg[k] - v_leg[a.k]);
    }
  } else {
    std::vector<Complex> col(static_cast<std::size_t>(g.ny));
    for (int k = 0; k < g.ny; ++k) col[k] = vert_integrand(prod.at(a.j, k));
    const auto v_leg = cumulative_integral(col, g.hy());
    std::vector<Complex> row(static_cast<std::size_t>(g.nx));
    for (int k = 0; k < g.ny; ++k) {
      for (int j = 0; j < g.nx; ++j) row[j] = horiz_integrand(prod.at(j, k));
      const auto h_leg = cumulative_integral(row, g.hx());
      const Complex base = ik + (v_leg[k] - v_leg[a.k]);
      for (int j = 0; j < g.nx; ++j) w.at(j, k) = base + (h_leg[j] - h_leg[a.j]);
    }
  }
  return w;
}

ComplexField gated_product(const ComplexField& psi, const ComplexField& psi_plus,
                           NodeIndex anchor, double exact_tol, DiffScheme scheme,
                           const char* where) {
  require_same_grid(psi.domain, psi_plus.domain, where);
  if (!psi.domain.contains_index(anchor.j, anchor.k))
    throw OutOfDomain(std::string(where) + ": anchor node (" + std::to_string(anchor.j) +
                      "," + std::to_string(anchor.k) + ") outside the grid");
  const double defect = exactness_residual(psi, psi_plus, scheme);
  if (defect > exact_tol)
    throw NotExact(std::string(where) + ": closedness defect " + std::to_string(defect) +
                   " exceeds tolerance " + std::to_string(exact_tol));
  return mul(psi, psi_plus);
}

} // namespace

double exactness_residual(const ComplexField& psi, const ComplexField& psi_plus,
                          DiffScheme scheme) {
  require_same_grid(psi.domain, psi_plus.domain, "exactness_residual");
  const ComplexField prod = mul(psi, psi_plus);
  ComplexField defect = dbar(prod, scheme);
  for (Complex& v : defect.values) v = Complex(v.real(), 0.0);
  const double num = interior_norms(defect, kInteriorMargin).l2;
  const double den = interior_norms(prod, kInteriorMargin).l2;
  return num / std::max(den, kNormFloor);
}

OmegaPotential omega_build(const ComplexField& psi, const ComplexField& psi_plus,
                           NodeIndex anchor, double kappa, double exact_tol,
                           DiffScheme scheme, std::string source) {
  const ComplexField prod =
      gated_product(psi, psi_plus, anchor, exact_tol, scheme, "omega_build");
  OmegaPotential w;
  w.field = integrate_l_paths(prod, anchor, kappa, true);
  w.anchor = anchor;
  w.kappa = kappa;
  w.source = std::move(source);
  return w;
}

double path_independence(const ComplexField& psi, const ComplexField& psi_plus,
                         NodeIndex anchor, double kappa, double exact_tol,
                         DiffScheme scheme) {
  const ComplexField prod =
      gated_product(psi, psi_plus, anchor, exact_tol, scheme, "path_independence");
  const ComplexField a = integrate_l_paths(prod, anchor, kappa, true);
  const ComplexField b = integrate_l_paths(prod, anchor, kappa, false);
  return sup_difference(a, b);
}

} // namespace gaf
