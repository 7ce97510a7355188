#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gaf/config.hpp"
#include "gaf/conformal.hpp"
#include "gaf/moutard.hpp"
#include "gaf/report.hpp"

namespace gaf {

/// closed_form: expression-backed inputs, tight thresholds. numeric:
/// solver-backed inputs, quadrature-limited thresholds.
enum class ToleranceClass { ClosedForm, Numeric };

struct Thresholds {
  double pair_residual;        // r1, r2 on the z-plane
  double exactness;            // omega closedness gate
  double path_independence;
  double re_omega;             // max |Re omega|
  double transformed_residual; // r6, r7
  double product_identity_deviation;
  double product_identity_re_c;
  double pullback_residual;    // r12, r13
  double omega_invariance;
  double commutativity;
};

Thresholds default_thresholds(ToleranceClass c);

/// One of expr (closed-form solution), seed (holomorphic seed handed to the
/// fixed-point solver), or file (CSV or binary field on the scenario grid).
struct RoleSpec {
  std::string expr;
  std::string seed;
  std::string file;

  bool present() const { return !expr.empty() || !seed.empty() || !file.empty(); }
};

struct Scenario {
  std::string name;
  ToleranceClass tol_class = ToleranceClass::ClosedForm;
  DiffScheme scheme = DiffScheme::Centered4;
  GridDomain grid;
  ParamMap params;
  RoleSpec u, f, f_plus, psi, psi_plus;
  NodeIndex anchor{0, 0};
  double kappa_f = 0.0;
  double kappa_pf = 0.0;
  double kappa_fp = 0.0;
  double kappa_psi_pair = 0.0;
  double kappa_tilde = 0.0;
  Thresholds thresholds{}; // class defaults, overridable via [thresholds]

  bool has_map = false;
  std::string map_expr;
  NodeIndex branch_seed{0, 0};
  std::optional<NodeIndex> branch_seed_b; // second path's seed, must agree
  GridDomain grid_star;

  std::filesystem::path base_dir; // role files resolve relative to this
};

/// Validate and load a scenario; throws ConfigError naming the offending key.
Scenario load_scenario(const Config& cfg);

enum class Pipeline { Solve, Omega, Moutard, Pullback, Verify, ComposeCheck, Export };

/// Run one pipeline and collect its checks. Export writes the scenario's
/// fields (CSV and binary with sidecars) into fields_dir.
Report run_pipeline(const Scenario& sc, Pipeline p,
                    const std::filesystem::path& fields_dir = {});

} // namespace gaf
