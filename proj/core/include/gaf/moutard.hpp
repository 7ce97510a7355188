#pragma once

#include <utility>

#include "gaf/omega.hpp"
#include "gaf/vekua.hpp"

namespace gaf {

/// Fixed generator pair (f, f_plus) for the transform, with the potential
/// omega_ff cached and certified zero-free so the later divisions are safe.
struct MoutardKernel {
  ComplexField u;
  ComplexField f;
  ComplexField f_plus;
  OmegaPotential omega_ff;
  double min_abs_omega = 0.0; // full-grid min of |omega_ff|
};

struct MoutardOptions {
  double residual_tol = 1e-2;     // gate on the generator/solution residuals
  double omega_floor_scale = 1e-6; // singularity floor = scale * sup|omega_ff|
  DiffScheme scheme = DiffScheme::Centered4;
};

/// Validate the generators against their equations, build omega_ff with gauge
/// kappa_f at the anchor, and certify |omega_ff| bounded away from zero.
/// Throws NotASolution or SingularKernel.
MoutardKernel kernel_build(const ComplexField& u, const ComplexField& f,
                           const ComplexField& f_plus, NodeIndex anchor, double kappa_f,
                           const MoutardOptions& opts = {});

/// u~ = u + f*conj(f_plus)/omega_ff, weight (1/2,1/2).
ComplexField transform_potential(const MoutardKernel& k);

/// psi~ = psi - (omega_{psi,f_plus}/omega_ff) * f, weight (1/2,0).
/// omega_{psi,f_plus} is built with gauge kappa_pf at the kernel's anchor.
ComplexField transform_solution(const MoutardKernel& k, const ComplexField& psi,
                                double kappa_pf, const MoutardOptions& opts = {});

/// psi_plus~ = psi_plus - (omega_{f,psi_plus}/omega_ff) * f_plus.
ComplexField transform_solution_plus(const MoutardKernel& k, const ComplexField& psi_plus,
                                     double kappa_fp, const MoutardOptions& opts = {});

/// Residuals of the transformed pair equations: r6 for (u~, psi~),
/// r7 for (-conj(u~), psi_plus~).
std::pair<double, double> verify_transformed(const MoutardKernel& k,
                                             const ComplexField& u_tilde,
                                             const ComplexField& psi_tilde,
                                             const ComplexField& psi_plus_tilde,
                                             DiffScheme scheme = DiffScheme::Centered4);

/// Gauge constants for the five potentials entering the product identity.
struct ProductIdentityGauges {
  double kappa_psi_pair = 0.0; // omega_{psi,psi_plus}
  double kappa_pf = 0.0;       // omega_{psi,f_plus}
  double kappa_fp = 0.0;       // omega_{f,psi_plus}
  double kappa_tilde = 0.0;    // omega_{psi~,psi_plus~}
};

struct ProductIdentityResult {
  double max_deviation = 0.0; // max |Delta - c| where Delta = omega~ - RHS
  Complex c{0.0, 0.0};        // mean(Delta); imaginary for genuine pipelines
  double abs_re_c = 0.0;
};

/// Check that omega_{psi~,psi_plus~} differs from
/// (omega_{psi,psi_plus}*omega_ff - omega_{psi,f_plus}*omega_{f,psi_plus})/omega_ff
/// by a constant, and measure that constant.
ProductIdentityResult verify_product_identity(const MoutardKernel& k, const ComplexField& psi,
                         const ComplexField& psi_plus, const ProductIdentityGauges& gauges,
                         const MoutardOptions& opts = {});

} // namespace gaf
