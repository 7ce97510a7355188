#pragma once

#include <memory>

#include "gaf/field.hpp"

namespace gaf {

namespace detail {
struct PompeiuImpl;
}

/// Reusable fast-convolution plan for the solid Cauchy transform
/// (T g)(z) = -(1/pi) * integral of g(zeta)/(zeta - z) over the domain.
/// T is a right inverse of dbar, so dbar(T g) = g away from the boundary.
struct PompeiuPlan {
  GridDomain domain;
  int padded_x = 0; // linear-convolution FFT sizes, >= 2n-1 per axis
  int padded_y = 0;
  std::shared_ptr<const detail::PompeiuImpl> impl;
};

/// Midpoint quadrature weight hx*hy*K(ox*hx + i*oy*hy), K(w) = -1/(pi*w), at
/// integer node offset (ox, oy). The singular (0,0) sample is replaced by the
/// analytic cell integral of K over the hx-by-hy cell centered at 0, which
/// vanishes because the integrand is odd in both coordinates. Exposed so
/// direct-summation oracles share the regularization exactly.
Complex pompeiu_kernel_weight(int ox, int oy, double hx, double hy);

/// Same for the modulus kernel (1/pi)/|w|. The center sample is the analytic
/// cell integral 4*(b*asinh(a/b) + a*asinh(b/a))/pi with a = hx/2, b = hy/2.
double pompeiu_abs_kernel_weight(int ox, int oy, double hx, double hy);

/// Build a plan for one grid. Padded sizes are the smallest 2,3,5,7-smooth
/// integers >= 2n-1. Budgeted allocation is two padded complex arrays (kernel
/// image plus work space); beyond GAF_MAX_ALLOC_BYTES (default 2 GiB) the
/// build throws AllocationLimit instead of degrading.
PompeiuPlan plan_build(const GridDomain& grid);

/// Apply T to a field on the plan's grid. Output has weight (0,0).
ComplexField pompeiu_apply(const PompeiuPlan& plan, const ComplexField& g);

/// Upper estimate of the sup-norm operator bound: max over nodes z of
/// sum over zeta of the modulus kernel weight at z - zeta. One extra padded
/// convolution against the all-ones field.
double operator_norm_estimate(const PompeiuPlan& plan);

} // namespace gaf
