#pragma once

#include "gaf/field.hpp"

namespace gaf {

/// Discrete differentiation scheme.
///   centered4: 4th-order finite differences, one-sided at the two outermost
///              layers. Default everywhere.
///   spectral:  Fourier differentiation; only meaningful for fields that are
///              smooth under periodic extension (period n*h per axis).
enum class DiffScheme { Centered4, Spectral };

const char* scheme_name(DiffScheme s);

/// d/dzbar = (d/dx + i d/dy)/2. Output weight equals input weight
/// (derivatives feed residual diagnostics only).
ComplexField dbar(const ComplexField& f, DiffScheme scheme = DiffScheme::Centered4);

/// d/dz = (d/dx - i d/dy)/2.
ComplexField dz(const ComplexField& f, DiffScheme scheme = DiffScheme::Centered4);

/// Coarse per-scheme residual scale used for precondition gates
/// (e.g. seed holomorphy is checked against 10x this value).
double scheme_tolerance(DiffScheme s);

} // namespace gaf
