#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gaf/omega.hpp"

namespace gaf {

/// Holomorphic substitution z = z(zeta) sampled on a zeta-plane grid,
/// together with a globally continuous square root s of dz/dzeta. The two
/// continuous branches differ by an overall sign; branch_seed pins
/// s = +principal sqrt there.
struct HolomorphicChart {
  ExprHandle z_of_zeta;
  ExprHandle dz_dzeta;             // symbolic derivative of z_of_zeta
  GridDomain grid_star;            // zeta-plane grid
  std::vector<Complex> map;        // z(zeta) per node
  std::vector<Complex> deriv;      // dz/dzeta per node
  std::vector<Complex> sqrt_deriv; // s(zeta): sign * principal sqrt
  NodeIndex branch_seed{0, 0};

  Complex z_at(int j, int k) const { return map[grid_star.index(j, k)]; }
  Complex s_at(int j, int k) const { return sqrt_deriv[grid_star.index(j, k)]; }
};

/// Nodes where |dz/dzeta| falls below this are treated as critical points.
inline constexpr double kDerivativeFloor = 1e-10;

/// Sample the map and its derivative, reject critical points, and assign
/// branch signs by breadth-first propagation from branch_seed: the sign on a
/// new node is chosen so that |s(n1) - s(n2)| < |s(n1) + s(n2)| across the
/// connecting edge; an edge admitting neither sign is a BranchConflict.
HolomorphicChart chart_build(const ExprHandle& z_of_zeta, const GridDomain& grid_star,
                             NodeIndex branch_seed);

/// Value of a z-plane field at an arbitrary point: snap to a grid node when
/// within 1e-9 cells, else exact expression evaluation when the field has
/// one, else bicubic (4x4 Lagrange) interpolation, which requires the point
/// to keep a 2-cell margin from the boundary. Throws OutOfDomain.
Complex field_value_at(const ComplexField& f, Complex z);

struct PullbackResult {
  ComplexField field; // on grid_star; weight preserved from the input
  std::string chart;  // printed map expression, for provenance
};

/// Weight-dispatched pullback: (0,0) plain composition, (1/2,0) composition
/// times s(zeta), (1/2,1/2) composition times |dz/dzeta|.
PullbackResult pullback(const ComplexField& field, const HolomorphicChart& chart);

/// Residuals of the conjugate pair on the zeta-plane: r12 for (u_star,
/// psi_star), r13 for (-conj(u_star), psi_plus_star).
std::pair<double, double> verify_transformed_pair(const ComplexField& u_star,
                                                  const ComplexField& psi_star,
                                                  const ComplexField& psi_plus_star,
                                                  DiffScheme scheme = DiffScheme::Centered4);

/// Check invariance of the potential under the substitution: build omega for
/// the pulled-back pair on the zeta-grid, anchored at anchor_star with gauge
/// Im omega_z(z(anchor_star)) so the integration constants match, and return
/// sup |omega_star(zeta) - omega_z(z(zeta))|. The anchor node replaces a free
/// gauge argument because the matching convention determines it.
double omega_invariance_check(const OmegaPotential& omega_z, const ComplexField& psi_star,
                              const ComplexField& psi_plus_star,
                              const HolomorphicChart& chart, NodeIndex anchor_star,
                              double exact_tol = kDefaultExactnessTol,
                              DiffScheme scheme = DiffScheme::Centered4);

} // namespace gaf
