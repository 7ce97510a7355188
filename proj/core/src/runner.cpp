#include "gaf/runner.hpp"

#include <cmath>
#include <sstream>

#include "gaf/field_io.hpp"

namespace gaf {

Thresholds default_thresholds(ToleranceClass c) {
  if (c == ToleranceClass::ClosedForm)
    return {
        .pair_residual = 1e-6,
        .exactness = 1e-2,
        .path_independence = 1e-8,
        .re_omega = 1e-8,
        .transformed_residual = 1e-6,
        .product_identity_deviation = 1e-8,
        .product_identity_re_c = 1e-8,
        .pullback_residual = 1e-6,
        .omega_invariance = 1e-7,
        .commutativity = 1e-8,
    };
  return {
      .pair_residual = 5e-3,
      .exactness = 1e-2,
      .path_independence = 1e-3,
      .re_omega = 1e-4,
      .transformed_residual = 1e-2,
      .product_identity_deviation = 1e-3,
      .product_identity_re_c = 1e-3,
      .pullback_residual = 1e-3,
      .omega_invariance = 1e-3,
      .commutativity = 1e-3,
  };
}

namespace {

GridDomain load_grid(const Config& cfg, const std::string& prefix) {
  try {
    return make_grid(cfg.get_double(prefix + ".x_min"), cfg.get_double(prefix + ".x_max"),
                     cfg.get_double(prefix + ".y_min"), cfg.get_double(prefix + ".y_max"),
                     cfg.get_int(prefix + ".nx"), cfg.get_int(prefix + ".ny"));
  } catch (const DegenerateGrid& e) {
    throw ConfigError(prefix, std::string("bad grid block: ") + e.what());
  }
}

RoleSpec load_role(const Config& cfg, const std::string& role) {
  RoleSpec r;
  r.expr = cfg.maybe_string(role + ".expr").value_or("");
  r.seed = cfg.maybe_string(role + ".seed").value_or("");
  r.file = cfg.maybe_string(role + ".file").value_or("");
  const int given = !r.expr.empty() + !r.seed.empty() + !r.file.empty();
  if (given > 1)
    throw ConfigError(role, "role '" + role + "' must give only one of expr/seed/file");
  return r;
}

void override_threshold(const Config& cfg, const std::string& key, double& slot) {
  if (auto v = cfg.maybe_double("thresholds." + key)) slot = *v;
}

} // namespace

Scenario load_scenario(const Config& cfg) {
  Scenario sc;
  sc.name = cfg.maybe_string("name").value_or("unnamed");
  const std::string cls = cfg.maybe_string("class").value_or("closed_form");
  if (cls == "closed_form")
    sc.tol_class = ToleranceClass::ClosedForm;
  else if (cls == "numeric")
    sc.tol_class = ToleranceClass::Numeric;
  else
    throw ConfigError("class", "unknown tolerance class '" + cls + "'");

  const std::string scheme = cfg.maybe_string("scheme").value_or("centered4");
  if (scheme == "centered4")
    sc.scheme = DiffScheme::Centered4;
  else if (scheme == "spectral")
    sc.scheme = DiffScheme::Spectral;
  else
    throw ConfigError("scheme", "unknown scheme '" + scheme + "'");

  sc.grid = load_grid(cfg, "grid");

  for (const std::string& key : cfg.keys_with_prefix("params.")) {
    const std::string name = key.substr(7);
    sc.params[name] = cfg.get_complex(key);
  }

  sc.u = load_role(cfg, "u");
  if (!sc.u.present()) throw ConfigError("u", "potential u needs one of u.expr/u.file");
  if (!sc.u.seed.empty()) throw ConfigError("u", "the potential cannot be solved for");
  sc.f = load_role(cfg, "f");
  sc.f_plus = load_role(cfg, "f_plus");
  sc.psi = load_role(cfg, "psi");
  sc.psi_plus = load_role(cfg, "psi_plus");
  if (!sc.f.present()) throw ConfigError("f", "generator f needs one of expr/seed/file");
  if (!sc.f_plus.present())
    throw ConfigError("f_plus", "generator f_plus needs one of expr/seed/file");

  if (cfg.has("anchor")) {
    sc.anchor = cfg.get_node("anchor");
    if (!sc.grid.contains_index(sc.anchor))
      throw ConfigError("anchor", "anchor node outside the grid");
  }
  sc.kappa_f = cfg.maybe_double("gauges.kappa_f").value_or(0.0);
  sc.kappa_pf = cfg.maybe_double("gauges.kappa_pf").value_or(0.0);
  sc.kappa_fp = cfg.maybe_double("gauges.kappa_fp").value_or(0.0);
  sc.kappa_psi_pair = cfg.maybe_double("gauges.kappa_psi_pair").value_or(0.0);
  sc.kappa_tilde = cfg.maybe_double("gauges.kappa_tilde").value_or(0.0);

  sc.thresholds = default_thresholds(sc.tol_class);
  override_threshold(cfg, "pair_residual", sc.thresholds.pair_residual);
  override_threshold(cfg, "exactness", sc.thresholds.exactness);
  override_threshold(cfg, "path_independence", sc.thresholds.path_independence);
  override_threshold(cfg, "re_omega", sc.thresholds.re_omega);
  override_threshold(cfg, "transformed_residual", sc.thresholds.transformed_residual);
  override_threshold(cfg, "product_identity_deviation", sc.thresholds.product_identity_deviation);
  override_threshold(cfg, "product_identity_re_c", sc.thresholds.product_identity_re_c);
  override_threshold(cfg, "pullback_residual", sc.thresholds.pullback_residual);
  override_threshold(cfg, "omega_invariance", sc.thresholds.omega_invariance);
  override_threshold(cfg, "commutativity", sc.thresholds.commutativity);

  if (cfg.has("map.z_of_zeta")) {
    sc.has_map = true;
    sc.map_expr = cfg.get_string("map.z_of_zeta");
    sc.grid_star = load_grid(cfg, "map.grid");
    sc.branch_seed = cfg.has("map.branch_seed") ? cfg.get_node("map.branch_seed")
                                                : NodeIndex{0, 0};
    if (!sc.grid_star.contains_index(sc.branch_seed))
      throw ConfigError("map.branch_seed", "branch seed outside the zeta grid");
    if (cfg.has("map.branch_seed_b")) sc.branch_seed_b = cfg.get_node("map.branch_seed_b");
  }

  if (!cfg.origin().empty() && cfg.origin() != "<string>")
    sc.base_dir = std::filesystem::path(cfg.origin()).parent_path();

  // Surface expression errors now, with the offending key.
  const std::pair<const char*, const RoleSpec*> roles[] = {{"u", &sc.u},
                                                           {"f", &sc.f},
                                                           {"f_plus", &sc.f_plus},
                                                           {"psi", &sc.psi},
                                                           {"psi_plus", &sc.psi_plus}};
  for (const auto& [key, role] : roles) {
    const std::string& text = role->expr.empty() ? role->seed : role->expr;
    if (text.empty()) continue;
    try {
      parse(text);
    } catch (const ParseError& e) {
      throw ConfigError(std::string(key), "bad expression '" + text + "': " + e.what());
    }
  }
  if (sc.has_map) {
    try {
      parse(sc.map_expr);
    } catch (const ParseError& e) {
      throw ConfigError("map.z_of_zeta", "bad expression '" + sc.map_expr + "': " + e.what());
    }
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

namespace {

struct Realized {
  ComplexField field;
  bool solved = false;
  SolveReport solve_report{};
};

// Materialize a role on the grid: sample the expression, read the file, or
// run the fixed-point solver from the seed (conjugate equation when
// conjugate_equation is set).
Realized realize(const Scenario& sc, const RoleSpec& spec, const std::string& role,
                 FieldWeight w, const PompeiuPlan& plan, const ComplexField* u,
                 bool conjugate_equation) {
  if (!spec.expr.empty()) {
    ExprHandle h{parse(spec.expr), sc.params};
    ComplexField f = sample_expression(sc.grid, h, w);
    return {std::move(f), false, {}};
  }
  if (!spec.file.empty()) {
    const std::filesystem::path p = sc.base_dir / spec.file;
    ComplexField f = p.extension() == ".csv" ? read_field_csv(p) : read_field_binary(p).first;
    require_same_grid(sc.grid, f.domain, "scenario field file");
    f.weight = w;
    return {std::move(f), false, {}};
  }
  if (!u) throw ConfigError(role, "role '" + role + "' cannot be solved for");
  ExprHandle h{parse(spec.seed), sc.params};
  ComplexField seed = sample_expression(sc.grid, h, w);
  SolveOptions opts;
  opts.scheme = sc.scheme;
  SolveResult r = conjugate_equation ? solve_psi_plus(plan, *u, seed, opts)
                                     : solve_psi(plan, *u, seed, opts);
  return {std::move(r.psi), true, r.report};
}

void describe(Report& rep, const Scenario& sc) {
  std::ostringstream grid;
  grid << sc.grid.nx << "x" << sc.grid.ny << " [" << sc.grid.x_min << "," << sc.grid.x_max
       << "]x[" << sc.grid.y_min << "," << sc.grid.y_max << "]";
  rep.environment["grid"] = grid.str();
  rep.environment["scheme"] = scheme_name(sc.scheme);
  rep.environment["class"] =
      sc.tol_class == ToleranceClass::ClosedForm ? "closed_form" : "numeric";
  std::ostringstream anchor;
  anchor << "[" << sc.anchor.j << "," << sc.anchor.k << "]";
  rep.environment["anchor"] = anchor.str();
  std::ostringstream gauges;
  gauges << "kappa_f=" << sc.kappa_f << " kappa_pf=" << sc.kappa_pf
         << " kappa_fp=" << sc.kappa_fp << " kappa_psi_pair=" << sc.kappa_psi_pair
         << " kappa_tilde=" << sc.kappa_tilde;
  rep.environment["gauges"] = gauges.str();
  if (sc.has_map) {
    rep.environment["map"] = sc.map_expr;
    std::ostringstream star;
    star << sc.grid_star.nx << "x" << sc.grid_star.ny << " [" << sc.grid_star.x_min << ","
         << sc.grid_star.x_max << "]x[" << sc.grid_star.y_min << "," << sc.grid_star.y_max
         << "]";
    rep.environment["zeta_grid"] = star.str();
    std::ostringstream seed;
    seed << "[" << sc.branch_seed.j << "," << sc.branch_seed.k << "]";
    rep.environment["branch_seed"] = seed.str();
  }
}

struct Stage {
  const Scenario& sc;
  PompeiuPlan plan;
  ComplexField u;
  Realized f, f_plus;
  std::optional<Realized> psi, psi_plus;

  explicit Stage(const Scenario& sc_in)
      : sc(sc_in),
        plan(plan_build(sc_in.grid)),
        u(realize(sc_in, sc_in.u, "u", FieldWeight::Density, plan, nullptr, false).field),
        f(realize(sc_in, sc_in.f, "f", FieldWeight::Spinor, plan, &u, false)),
        f_plus(realize(sc_in, sc_in.f_plus, "f_plus", FieldWeight::Spinor, plan, &u, true)) {
    if (sc.psi.present())
      psi = realize(sc, sc.psi, "psi", FieldWeight::Spinor, plan, &u, false);
    if (sc.psi_plus.present())
      psi_plus = realize(sc, sc.psi_plus, "psi_plus", FieldWeight::Spinor, plan, &u, true);
  }

  const ComplexField& psi_or_f() const { return psi ? psi->field : f.field; }
  const ComplexField& psi_plus_or_f_plus() const {
    return psi_plus ? psi_plus->field : f_plus.field;
  }
};

void add_solve_checks(Report& rep, const Stage& st) {
  const Scenario& sc = st.sc;
  const double tol = sc.thresholds.pair_residual;
  const auto [r1f, r2f] = residual_pair(st.u, st.f.field, st.f_plus.field, sc.scheme);
  rep.add_le("pair_residual_f", r1f, tol);
  rep.add_le("pair_residual_f_plus", r2f, tol);
  if (st.f.solved) {
    rep.add_le("contraction_f", st.f.solve_report.contraction, 1.0);
    rep.add_le("iterate_gap_f", st.f.solve_report.final_diff, 1e-11);
  }
  if (st.f_plus.solved) {
    rep.add_le("contraction_f_plus", st.f_plus.solve_report.contraction, 1.0);
    rep.add_le("iterate_gap_f_plus", st.f_plus.solve_report.final_diff, 1e-11);
  }
  if (st.psi && st.psi_plus) {
    const auto [r1p, r2p] =
        residual_pair(st.u, st.psi->field, st.psi_plus->field, sc.scheme);
    rep.add_le("pair_residual_psi", r1p, tol);
    rep.add_le("pair_residual_psi_plus", r2p, tol);
  }
}

void add_omega_checks(Report& rep, const Stage& st) {
  const Scenario& sc = st.sc;
  const Thresholds& t = sc.thresholds;
  rep.add_le("exactness_f_pair", exactness_residual(st.f.field, st.f_plus.field, sc.scheme),
             t.exactness);
  const OmegaPotential w = omega_build(st.f.field, st.f_plus.field, sc.anchor, sc.kappa_f,
                                       t.exactness, sc.scheme, "f,f_plus");
  rep.add_le("re_omega_f_pair", field_norms(w.field).max_real_part, t.re_omega);
  rep.add_le("path_independence_f_pair",
             path_independence(st.f.field, st.f_plus.field, sc.anchor, sc.kappa_f,
                               t.exactness, sc.scheme),
             t.path_independence);
  if (st.psi && st.psi_plus) {
    rep.add_le("exactness_psi_pair",
               exactness_residual(st.psi->field, st.psi_plus->field, sc.scheme),
               t.exactness);
    const OmegaPotential wp =
        omega_build(st.psi->field, st.psi_plus->field, sc.anchor, sc.kappa_psi_pair,
                    t.exactness, sc.scheme, "psi,psi_plus");
    rep.add_le("re_omega_psi_pair", field_norms(wp.field).max_real_part, t.re_omega);
    rep.add_le("path_independence_psi_pair",
               path_independence(st.psi->field, st.psi_plus->field, sc.anchor,
                                 sc.kappa_psi_pair, t.exactness, sc.scheme),
               t.path_independence);
  }
}

MoutardKernel build_kernel(const Stage& st) {
  MoutardOptions mopts;
  mopts.scheme = st.sc.scheme;
  mopts.residual_tol = st.sc.thresholds.exactness;
  return kernel_build(st.u, st.f.field, st.f_plus.field, st.sc.anchor, st.sc.kappa_f, mopts);
}

void add_moutard_checks(Report& rep, const Stage& st) {
  const Scenario& sc = st.sc;
  const Thresholds& t = sc.thresholds;
  MoutardOptions mopts;
  mopts.scheme = sc.scheme;
  mopts.residual_tol = t.exactness;

  const MoutardKernel kernel = build_kernel(st);
  rep.add_ge("min_abs_omega_ff", kernel.min_abs_omega,
             mopts.omega_floor_scale * field_norms(kernel.omega_ff.field).sup);

  const ComplexField u_tilde = transform_potential(kernel);
  const ComplexField psi_tilde =
      transform_solution(kernel, st.psi_or_f(), sc.psi.present() ? sc.kappa_pf : sc.kappa_f,
                         mopts);
  const ComplexField psi_plus_tilde = transform_solution_plus(
      kernel, st.psi_plus_or_f_plus(), sc.psi_plus.present() ? sc.kappa_fp : sc.kappa_f,
      mopts);
  const auto [r6, r7] = verify_transformed(kernel, u_tilde, psi_tilde, psi_plus_tilde,
                                           sc.scheme);
  rep.add_le("transformed_residual_psi", r6, t.transformed_residual);
  rep.add_le("transformed_residual_psi_plus", r7, t.transformed_residual);

  if (st.psi && st.psi_plus) {
    ProductIdentityGauges gauges;
    gauges.kappa_psi_pair = sc.kappa_psi_pair;
    gauges.kappa_pf = sc.kappa_pf;
    gauges.kappa_fp = sc.kappa_fp;
    gauges.kappa_tilde = sc.kappa_tilde;
    const ProductIdentityResult p =
        verify_product_identity(kernel, st.psi->field, st.psi_plus->field, gauges, mopts);
    rep.add_le("product_identity_deviation", p.max_deviation, t.product_identity_deviation);
    rep.add_le("product_identity_re_c", p.abs_re_c, t.product_identity_re_c);
  }
}

HolomorphicChart build_chart(const Scenario& sc) {
  if (!sc.has_map) throw ConfigError("map.z_of_zeta", "this pipeline needs a [map] block");
  ExprHandle h{parse(sc.map_expr), sc.params};
  return chart_build(h, sc.grid_star, sc.branch_seed);
}

void add_pullback_checks(Report& rep, const Stage& st) {
  const Scenario& sc = st.sc;
  const Thresholds& t = sc.thresholds;
  const HolomorphicChart chart = build_chart(sc);
  const ComplexField u_star = pullback(st.u, chart).field;
  const ComplexField psi_star = pullback(st.psi_or_f(), chart).field;
  const ComplexField psi_plus_star = pullback(st.psi_plus_or_f_plus(), chart).field;
  const auto [r12, r13] =
      verify_transformed_pair(u_star, psi_star, psi_plus_star, sc.scheme);
  rep.add_le("pullback_residual_psi", r12, t.pullback_residual);
  rep.add_le("pullback_residual_psi_plus", r13, t.pullback_residual);

  const double kappa_pair = st.psi ? sc.kappa_psi_pair : sc.kappa_f;
  const OmegaPotential omega_z =
      omega_build(st.psi_or_f(), st.psi_plus_or_f_plus(), sc.anchor, kappa_pair,
                  t.exactness, sc.scheme, "psi,psi_plus");
  rep.add_le("omega_invariance",
             omega_invariance_check(omega_z, psi_star, psi_plus_star, chart,
                                    sc.branch_seed, t.exactness, sc.scheme),
             t.omega_invariance);
}

void add_compose_checks(Report& rep, const Stage& st) {
  const Scenario& sc = st.sc;
  const Thresholds& t = sc.thresholds;
  if (sc.branch_seed_b && !(*sc.branch_seed_b == sc.branch_seed))
    throw BranchMismatch("compose-check: the two paths were configured with different "
                         "branch seeds");
  const HolomorphicChart chart = build_chart(sc);
  MoutardOptions mopts;
  mopts.scheme = sc.scheme;
  mopts.residual_tol = t.exactness;
  const double kappa_pf = sc.psi.present() ? sc.kappa_pf : sc.kappa_f;
  const double kappa_fp = sc.psi_plus.present() ? sc.kappa_fp : sc.kappa_f;

  // Path A: transform on the z-plane, then pull everything back.
  const MoutardKernel kernel_z = build_kernel(st);
  const ComplexField a_u = pullback(transform_potential(kernel_z), chart).field;
  const ComplexField a_psi =
      pullback(transform_solution(kernel_z, st.psi_or_f(), kappa_pf, mopts), chart).field;
  const ComplexField a_psi_plus =
      pullback(transform_solution_plus(kernel_z, st.psi_plus_or_f_plus(), kappa_fp, mopts),
               chart)
          .field;

  // Path B: pull the inputs back, then transform on the zeta-plane. Gauges
  // are matched by evaluating the z-plane potentials at z(branch_seed).
  const Complex z0 = chart.z_at(sc.branch_seed.j, sc.branch_seed.k);
  const OmegaPotential w_pf_z = omega_build(st.psi_or_f(), st.f_plus.field, sc.anchor,
                                            kappa_pf, t.exactness, sc.scheme, "psi,f_plus");
  const OmegaPotential w_fp_z = omega_build(st.f.field, st.psi_plus_or_f_plus(), sc.anchor,
                                            kappa_fp, t.exactness, sc.scheme, "f,psi_plus");
  const double kappa_f_star = field_value_at(kernel_z.omega_ff.field, z0).imag();
  const double kappa_pf_star = field_value_at(w_pf_z.field, z0).imag();
  const double kappa_fp_star = field_value_at(w_fp_z.field, z0).imag();

  const ComplexField u_star = pullback(st.u, chart).field;
  const ComplexField f_star = pullback(st.f.field, chart).field;
  const ComplexField f_plus_star = pullback(st.f_plus.field, chart).field;
  const ComplexField psi_star = pullback(st.psi_or_f(), chart).field;
  const ComplexField psi_plus_star = pullback(st.psi_plus_or_f_plus(), chart).field;

  const MoutardKernel kernel_star = kernel_build(u_star, f_star, f_plus_star,
                                                 sc.branch_seed, kappa_f_star, mopts);
  const ComplexField b_u = transform_potential(kernel_star);
  const ComplexField b_psi = transform_solution(kernel_star, psi_star, kappa_pf_star, mopts);
  const ComplexField b_psi_plus =
      transform_solution_plus(kernel_star, psi_plus_star, kappa_fp_star, mopts);

  rep.add_le("commutativity_u", sup_difference(a_u, b_u), t.commutativity);
  rep.add_le("commutativity_psi", sup_difference(a_psi, b_psi), t.commutativity);
  rep.add_le("commutativity_psi_plus", sup_difference(a_psi_plus, b_psi_plus),
             t.commutativity);
  const double l2_u = field_norms(sub(a_u, b_u)).l2;
  const double l2_psi = field_norms(sub(a_psi, b_psi)).l2;
  rep.add_le("commutativity_u_l2", l2_u, t.commutativity);
  rep.add_le("commutativity_psi_l2", l2_psi, t.commutativity);
}

void export_fields(Report& rep, const Stage& st, const std::filesystem::path& dir) {
  if (dir.empty()) throw IoError("export needs --fields-dir");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create fields dir '" + dir.string() + "'");

  const Scenario& sc = st.sc;
  auto dump = [&](const ComplexField& f, const std::string& name, FieldSidecar meta) {
    meta.weight = f.weight;
    write_field_csv(dir / (name + ".csv"), f);
    write_field_binary(dir / (name + ".gaf"), f, meta);
    rep.environment["field:" + name] = (dir / (name + ".gaf")).string();
  };
  dump(st.u, "u", {});
  dump(st.f.field, "f", {});
  dump(st.f_plus.field, "f_plus", {});
  if (st.psi) dump(st.psi->field, "psi", {});
  if (st.psi_plus) dump(st.psi_plus->field, "psi_plus", {});

  const MoutardKernel kernel = build_kernel(st);
  FieldSidecar omega_meta;
  omega_meta.anchor = kernel.omega_ff.anchor;
  omega_meta.kappa = kernel.omega_ff.kappa;
  dump(kernel.omega_ff.field, "omega_ff", omega_meta);
  MoutardOptions mopts;
  mopts.scheme = sc.scheme;
  mopts.residual_tol = sc.thresholds.exactness;
  dump(transform_potential(kernel), "u_tilde", {});
  dump(transform_solution(kernel, st.psi_or_f(),
                          sc.psi.present() ? sc.kappa_pf : sc.kappa_f, mopts),
       "psi_tilde", {});
  dump(transform_solution_plus(kernel, st.psi_plus_or_f_plus(),
                               sc.psi_plus.present() ? sc.kappa_fp : sc.kappa_f, mopts),
       "psi_plus_tilde", {});
}

} // namespace

Report run_pipeline(const Scenario& sc, Pipeline p, const std::filesystem::path& fields_dir) {
  Report rep;
  rep.scenario = sc.name;
  describe(rep, sc);
  Stage st(sc);
  switch (p) {
    case Pipeline::Solve:
      add_solve_checks(rep, st);
      break;
    case Pipeline::Omega:
      add_solve_checks(rep, st);
      add_omega_checks(rep, st);
      break;
    case Pipeline::Moutard:
      add_moutard_checks(rep, st);
      break;
    case Pipeline::Pullback:
      add_pullback_checks(rep, st);
      break;
    case Pipeline::Verify:
      add_solve_checks(rep, st);
      add_omega_checks(rep, st);
      add_moutard_checks(rep, st);
      if (sc.has_map) {
        add_pullback_checks(rep, st);
        add_compose_checks(rep, st);
      }
      break;
    case Pipeline::ComposeCheck:
      add_compose_checks(rep, st);
      break;
    case Pipeline::Export:
      export_fields(rep, st, fields_dir);
      break;
  }
  return rep;
}

} // namespace gaf
