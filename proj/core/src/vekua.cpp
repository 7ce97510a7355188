#include "gaf/vekua.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gaf {

namespace {

struct ResidualNorms {
  double l2 = 0.0;
  double sup = 0.0;
};

ResidualNorms residual_norms(const ComplexField& u, const ComplexField& psi,
                             DiffScheme scheme) {
  ComplexField resid = sub(dbar(psi, scheme), mul(u, conj_field(psi)));
  const FieldNorms rn = interior_norms(resid, kInteriorMargin);
  const FieldNorms pn = interior_norms(psi, kInteriorMargin);
  return {rn.l2 / std::max(pn.l2, kNormFloor), rn.sup / std::max(pn.sup, kNormFloor)};
}

} // namespace

double equation_residual(const ComplexField& u, const ComplexField& psi,
                         DiffScheme scheme) {
  return residual_norms(u, psi, scheme).l2;
}

std::pair<double, double> residual_pair(const ComplexField& u, const ComplexField& psi,
                                        const ComplexField& psi_plus, DiffScheme scheme) {
  require_same_grid(u.domain, psi.domain, "residual_pair");
  require_same_grid(u.domain, psi_plus.domain, "residual_pair");
  const double r1 = equation_residual(u, psi, scheme);
  const double r2 = equation_residual(scale(conj_field(u), Complex(-1, 0)), psi_plus, scheme);
  return {r1, r2};
}

SolveResult solve_psi(const PompeiuPlan& plan, const ComplexField& u,
                      const ComplexField& seed, const SolveOptions& opts) {
  require_same_grid(plan.domain, u.domain, "solve_psi");
  require_same_grid(plan.domain, seed.domain, "solve_psi");
  if (opts.max_iter < 1) throw Error("solve_psi: max_iter must be >= 1");
  if (!(opts.tol > 0.0)) throw Error("solve_psi: tol must be > 0");

  // The seed is the holomorphic part of the solution; a non-flat dbar means
  // the caller passed something the iteration cannot represent.
  const ComplexField zero = make_constant_field(seed.domain, Complex(0, 0));
  const double seed_flatness = equation_residual(zero, seed, opts.scheme);
  if (seed_flatness > 10.0 * scheme_tolerance(opts.scheme))
    throw SeedNotHolomorphic("seed dbar residual " + std::to_string(seed_flatness) +
                             " exceeds 10x scheme tolerance " +
                             std::to_string(10.0 * scheme_tolerance(opts.scheme)));

  SolveReport report;
  report.contraction = operator_norm_estimate(plan) * field_norms(u).sup;
  if (report.contraction >= 1.0)
    throw NonContraction("contraction estimate q = " + std::to_string(report.contraction) +
                         " is not below 1");

  ComplexField psi = seed;
  psi.expr = {};
  double prev_diff = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    ComplexField next = add(seed, pompeiu_apply(plan, mul(u, conj_field(psi))));
    const double diff = sup_difference(next, psi);
    psi = std::move(next);
    report.iterations = it;
    report.final_diff = diff;
    if (diff <= opts.tol) break;
    if (diff >= prev_diff) {
      if (++stalled >= 10)
        throw NonContraction("iterate difference non-decreasing for 10 steps (last " +
                             std::to_string(diff) + ")");
    } else {
      stalled = 0;
    }
    prev_diff = diff;
  }

  psi.weight = FieldWeight::Spinor;
  psi.expr = {};
  const ResidualNorms rn = residual_norms(u, psi, opts.scheme);
  report.residual_l2 = rn.l2;
  report.residual_sup = rn.sup;
  return {std::move(psi), report};
}

SolveResult solve_psi_plus(const PompeiuPlan& plan, const ComplexField& u,
                           const ComplexField& seed, const SolveOptions& opts) {
  return solve_psi(plan, scale(conj_field(u), Complex(-1, 0)), seed, opts);
}

} // namespace gaf
