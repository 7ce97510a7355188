#pragma once

#include <utility>

#include "gaf/diff.hpp"
#include "gaf/pompeiu.hpp"

namespace gaf {

struct SolveOptions {
  int max_iter = 200;
  double tol = 1e-12; // sup-norm iterate difference
  DiffScheme scheme = DiffScheme::Centered4; // residual reporting only
};

struct SolveReport {
  int iterations = 0;
  double final_diff = 0.0;
  double residual_l2 = 0.0;  // interior relative residual of the solved equation
  double residual_sup = 0.0;
  double contraction = 0.0;  // q = ||T|| * sup|u|
};

struct SolveResult {
  ComplexField psi;
  SolveReport report;
};

/// Fixed-point iteration psi = seed + T(u * conj(psi)) for the equation
/// dbar(psi) = u * conj(psi). The seed must be holomorphic (it is the
/// dbar-free part of the solution) and the contraction estimate q must stay
/// below 1; anticontractive potentials throw NonContraction instead of
/// falling back to a direct solve.
SolveResult solve_psi(const PompeiuPlan& plan, const ComplexField& u,
                      const ComplexField& seed, const SolveOptions& opts = {});

/// Conjugate equation dbar(psi_plus) = -conj(u) * conj(psi_plus). Delegates
/// to solve_psi with potential -conj(u), so mirrored inputs iterate
/// identically.
SolveResult solve_psi_plus(const PompeiuPlan& plan, const ComplexField& u,
                           const ComplexField& seed, const SolveOptions& opts = {});

/// Interior relative l2 residual ||dbar(psi) - u*conj(psi)||_2 / max(||psi||_2, eps).
double equation_residual(const ComplexField& u, const ComplexField& psi,
                         DiffScheme scheme = DiffScheme::Centered4);

/// Residuals of both equations of the conjugate pair: r1 for (u, psi),
/// r2 for (-conj(u), psi_plus).
std::pair<double, double> residual_pair(const ComplexField& u, const ComplexField& psi,
                                        const ComplexField& psi_plus,
                                        DiffScheme scheme = DiffScheme::Centered4);

} // namespace gaf
