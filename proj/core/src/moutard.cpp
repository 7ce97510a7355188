#include "gaf/moutard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gaf {

namespace {

void require_solves(const ComplexField& u, const ComplexField& field, DiffScheme scheme,
                    double tol, const char* role) {
  const double r = equation_residual(u, field, scheme);
  if (r > tol)
    throw NotASolution(std::string(role) + " residual " + std::to_string(r) +
                       " exceeds tolerance " + std::to_string(tol));
}

ComplexField negated_conj(const ComplexField& u) {
  return scale(conj_field(u), Complex(-1, 0));
}

} // namespace

MoutardKernel kernel_build(const ComplexField& u, const ComplexField& f,
                           const ComplexField& f_plus, NodeIndex anchor, double kappa_f,
                           const MoutardOptions& opts) {
  require_same_grid(u.domain, f.domain, "kernel_build");
  require_same_grid(u.domain, f_plus.domain, "kernel_build");
  require_solves(u, f, opts.scheme, opts.residual_tol, "generator f");
  require_solves(negated_conj(u), f_plus, opts.scheme, opts.residual_tol, "generator f_plus");

  MoutardKernel k;
  k.u = u;
  k.f = f;
  k.f_plus = f_plus;
  k.omega_ff = omega_build(f, f_plus, anchor, kappa_f, opts.residual_tol, opts.scheme,
                           "f,f_plus");

  double min_abs = std::numeric_limits<double>::infinity();
  double sup_abs = 0.0;
  for (const Complex& v : k.omega_ff.field.values) {
    min_abs = std::min(min_abs, std::abs(v));
    sup_abs = std::max(sup_abs, std::abs(v));
  }
  k.min_abs_omega = min_abs;
  const double floor = opts.omega_floor_scale * sup_abs;
  if (min_abs <= floor)
    throw SingularKernel("min |omega_ff| = " + std::to_string(min_abs) +
                         " at or below floor " + std::to_string(floor) +
                         "; the transform would create a pole");
  return k;
}

ComplexField transform_potential(const MoutardKernel& k) {
  ComplexField out = k.u;
  out.expr = {};
  out.weight = FieldWeight::Density;
  const ComplexField& w = k.omega_ff.field;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = k.u.values[i] +
                    k.f.values[i] * std::conj(k.f_plus.values[i]) / w.values[i];
  return out;
}

ComplexField transform_solution(const MoutardKernel& k, const ComplexField& psi,
                                double kappa_pf, const MoutardOptions& opts) {
  require_same_grid(k.u.domain, psi.domain, "transform_solution");
  require_solves(k.u, psi, opts.scheme, opts.residual_tol, "psi");
  const OmegaPotential w_pf = omega_build(psi, k.f_plus, k.omega_ff.anchor, kappa_pf,
                                          opts.residual_tol, opts.scheme, "psi,f_plus");
  ComplexField out = psi;
  out.expr = {};
  out.weight = FieldWeight::Spinor;
  const ComplexField& w = k.omega_ff.field;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = psi.values[i] -
                    w_pf.field.values[i] / w.values[i] * k.f.values[i];
  return out;
}

ComplexField transform_solution_plus(const MoutardKernel& k, const ComplexField& psi_plus,
                                     double kappa_fp, const MoutardOptions& opts) {
  require_same_grid(k.u.domain, psi_plus.domain, "transform_solution_plus");
  require_solves(negated_conj(k.u), psi_plus, opts.scheme, opts.residual_tol, "psi_plus");
  const OmegaPotential w_fp = omega_build(k.f, psi_plus, k.omega_ff.anchor, kappa_fp,
                                          opts.residual_tol, opts.scheme, "f,psi_plus");
  ComplexField out = psi_plus;
  out.expr = {};
  out.weight = FieldWeight::Spinor;
  const ComplexField& w = k.omega_ff.field;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = psi_plus.values[i] -
                    w_fp.field.values[i] / w.values[i] * k.f_plus.values[i];
  return out;
}

std::pair<double, double> verify_transformed(const MoutardKernel& k,
                                             const ComplexField& u_tilde,
                                             const ComplexField& psi_tilde,
                                             const ComplexField& psi_plus_tilde,
                                             DiffScheme scheme) {
  require_same_grid(k.u.domain, u_tilde.domain, "verify_transformed");
  return residual_pair(u_tilde, psi_tilde, psi_plus_tilde, scheme);
}

ProductIdentityResult verify_product_identity(const MoutardKernel& k, const ComplexField& psi,
                         const ComplexField& psi_plus, const ProductIdentityGauges& gauges,
                         const MoutardOptions& opts) {
  require_same_grid(k.u.domain, psi.domain, "verify_product_identity");
  require_same_grid(k.u.domain, psi_plus.domain, "verify_product_identity");
  const NodeIndex anchor = k.omega_ff.anchor;

  const OmegaPotential w_pp =
      omega_build(psi, psi_plus, anchor, gauges.kappa_psi_pair, opts.residual_tol,
                  opts.scheme, "psi,psi_plus");
  const ComplexField psi_t = transform_solution(k, psi, gauges.kappa_pf, opts);
  const ComplexField psi_plus_t =
      transform_solution_plus(k, psi_plus, gauges.kappa_fp, opts);
  const OmegaPotential w_pf = omega_build(psi, k.f_plus, anchor, gauges.kappa_pf,
                                          opts.residual_tol, opts.scheme, "psi,f_plus");
  const OmegaPotential w_fp = omega_build(k.f, psi_plus, anchor, gauges.kappa_fp,
                                          opts.residual_tol, opts.scheme, "f,psi_plus");
  const OmegaPotential w_tilde =
      omega_build(psi_t, psi_plus_t, anchor, gauges.kappa_tilde, opts.residual_tol,
                  opts.scheme, "psi~,psi_plus~");

  const std::size_t n = k.u.values.size();
  std::vector<Complex> delta(n);
  Complex mean(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex rhs = w_pp.field.values[i] -
                        w_pf.field.values[i] * w_fp.field.values[i] /
                            k.omega_ff.field.values[i];
    delta[i] = w_tilde.field.values[i] - rhs;
    mean += delta[i];
  }
  mean /= static_cast<double>(n);

  ProductIdentityResult out;
  out.c = mean;
  out.abs_re_c = std::abs(mean.real());
  for (const Complex& d : delta)
    out.max_deviation = std::max(out.max_deviation, std::abs(d - mean));
  return out;
}

} // namespace gaf
