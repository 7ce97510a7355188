#pragma once

#include <functional>
#include <vector>

#include "gaf/expr.hpp"
#include "gaf/grid.hpp"

namespace gaf {

/// Transformation weight (p,q) under holomorphic changes of variables.
/// Scalar (0,0), Spinor (1/2,0), Density (1/2,1/2).
enum class FieldWeight { Scalar, Spinor, Density };

double weight_p(FieldWeight w);
double weight_q(FieldWeight w);
const char* weight_name(FieldWeight w);

/// Complex samples on a GridDomain, tagged with a transformation weight.
/// Fields built from a closed-form expression keep the expression handle so
/// later consumers (pullbacks, off-grid probes) can evaluate exactly instead
/// of interpolating.
struct ComplexField {
  GridDomain domain;
  std::vector<Complex> values; // row-major, y outer / x inner
  FieldWeight weight = FieldWeight::Scalar;
  ExprHandle expr;             // optional

  Complex& at(int j, int k) { return values[domain.index(j, k)]; }
  const Complex& at(int j, int k) const { return values[domain.index(j, k)]; }
};

/// Field filled with a constant.
ComplexField make_constant_field(const GridDomain& g, Complex value,
                                 FieldWeight w = FieldWeight::Scalar);

/// Sample an expression at every node; the handle is retained on the field.
ComplexField sample_expression(const GridDomain& g, const ExprHandle& h,
                               FieldWeight w = FieldWeight::Scalar);

/// Sample an arbitrary callable (used by tests and oracles; no handle kept).
ComplexField sample_function(const GridDomain& g,
                             const std::function<Complex(Complex)>& f,
                             FieldWeight w = FieldWeight::Scalar);

// Pointwise algebra. Binary ops require a shared grid; the result keeps the
// left operand's weight unless stated otherwise and drops any expression.
ComplexField add(const ComplexField& a, const ComplexField& b);
ComplexField sub(const ComplexField& a, const ComplexField& b);
ComplexField mul(const ComplexField& a, const ComplexField& b);
ComplexField div(const ComplexField& a, const ComplexField& b);
ComplexField scale(const ComplexField& a, Complex s);
ComplexField conj_field(const ComplexField& a);
ComplexField shift(const ComplexField& a, Complex s);

struct FieldNorms {
  double l2 = 0.0;            // quadrature-weighted, approximates the L2 norm
  double sup = 0.0;           // max |v|
  double max_real_part = 0.0; // max |Re v|
};

/// Norms over the full grid. l2 uses trapezoidal node weights, so a constant
/// of modulus 1 on the unit square has l2 exactly 1 at any resolution.
FieldNorms field_norms(const ComplexField& f);

/// Norms over the interior box obtained by dropping `margin` node layers on
/// every side (plain hx*hy node weights). Used for residual reporting where
/// one-sided stencils and quadrature boundary effects are excluded.
FieldNorms interior_norms(const ComplexField& f, int margin);

/// Interior-margin relative l2 residual: |num|_2 / max(|den|_2, eps).
double relative_residual(const ComplexField& num, const ComplexField& den,
                         int margin);

/// sup |a - b| over the full grid.
double sup_difference(const ComplexField& a, const ComplexField& b);

/// Default margin excluded from residual norms.
inline constexpr int kInteriorMargin = 3;

/// Floor for relative-residual denominators.
inline constexpr double kNormFloor = 1e-30;

} // namespace gaf
