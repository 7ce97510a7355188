#pragma once

#include <string>
#include <vector>

#include "gaf/diff.hpp"

namespace gaf {

/// Antiderivative of the exact 1-form (psi*psi_plus) dz - conj(psi*psi_plus) dzbar,
/// pinned by field(anchor) = i*kappa. For genuine solution pairs the form is
/// closed and the potential purely imaginary; the real part is carried
/// unprojected as a diagnostic rather than zeroed.
struct OmegaPotential {
  ComplexField field;  // weight (0,0)
  NodeIndex anchor{0, 0};
  double kappa = 0.0;
  std::string source;  // role labels, e.g. "f,f_plus"
};

/// Closedness defect of the 1-form:
/// ||Re dbar(psi*psi_plus)||_2 / max(||psi*psi_plus||_2, eps), interior
/// margin. Identically zero when (psi, psi_plus) solve the conjugate pair.
double exactness_residual(const ComplexField& psi, const ComplexField& psi_plus,
                          DiffScheme scheme = DiffScheme::Centered4);

/// Gate applied before integrating a 1-form that is supposed to be closed.
inline constexpr double kDefaultExactnessTol = 1e-2;

/// Integrate along L-shaped paths (across the anchor row, then up each
/// column) with a cumulative 4th-order rule. Throws NotExact when the
/// closedness defect exceeds exact_tol.
OmegaPotential omega_build(const ComplexField& psi, const ComplexField& psi_plus,
                           NodeIndex anchor, double kappa,
                           double exact_tol = kDefaultExactnessTol,
                           DiffScheme scheme = DiffScheme::Centered4,
                           std::string source = {});

/// sup difference between the horizontal-first and vertical-first L-path
/// integrations from the same anchor; a measured substitute for assuming
/// path independence.
double path_independence(const ComplexField& psi, const ComplexField& psi_plus,
                         NodeIndex anchor, double kappa,
                         double exact_tol = kDefaultExactnessTol,
                         DiffScheme scheme = DiffScheme::Centered4);

/// Cumulative line integral of uniformly sampled values: out[m] is the
/// integral from node 0 to node m, 4th order (one cubic per interval, with
/// one-sided stencils on the first and last intervals). Prefix differences
/// out[b] - out[a] are therefore exact sub-path integrals of the same rule.
std::vector<Complex> cumulative_integral(const std::vector<Complex>& f, double h);

} // namespace gaf
