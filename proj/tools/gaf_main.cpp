// gaf: run verification pipelines over scenario config files and emit JSON
// reports. Exit code 0 when every check passes, 1 when a check fails, 2 when
// a scenario cannot be evaluated at all (I/O, config, or numerical gates).

#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gaf/errors.hpp"
#include "gaf/runner.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kConfigReference = R"(Config keys (TOML-style; dotted keys and [section] headers are equivalent):
  name                          scenario label echoed into the report
  class                         closed_form | numeric (selects the threshold table)
  scheme                        centered4 | spectral
  [grid]  x_min x_max y_min y_max nx ny
  [params] <ident> = <value>    constants usable in every expression
  u.expr | u.file               potential (exactly one required)
  f.expr | f.seed | f.file      base-equation generator (one required)
  f_plus.expr | f_plus.seed | f_plus.file    conjugate generator (one required)
  psi.expr | psi.seed | psi.file             optional second solution
  psi_plus.expr | psi_plus.seed | psi_plus.file
  anchor = [j, k]               gauge anchor node (default [0, 0])
  gauges.kappa_f | kappa_pf | kappa_fp | kappa_psi_pair | kappa_tilde
  [thresholds] <check> = <t>    override one threshold (pair_residual, exactness,
                                path_independence, re_omega, transformed_residual,
                                product_identity_deviation, product_identity_re_c, pullback_residual,
                                omega_invariance, commutativity)
  map.z_of_zeta                 holomorphic chart expression in zeta
  map.branch_seed = [j, k]      sqrt-branch reference node on the zeta grid
  map.branch_seed_b = [j, k]    compose-check second-path seed; must equal branch_seed
  [map.grid]  x_min ... ny      zeta-plane grid

Environment:
  GAF_MAX_ALLOC_BYTES           caps the padded convolution workspace)";

struct JobResult {
  std::string label;
  bool ran = false;
  bool setup_error = false; // config or I/O trouble: exit 2, not a failed scenario
  gaf::Report report;
  std::string error;
};

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out.empty() ? std::string("scenario") : out;
}

JobResult run_one(const fs::path& config_path, gaf::Pipeline pipeline,
                  const fs::path& fields_dir) {
  JobResult r;
  r.label = config_path.string();
  try {
    const gaf::Config cfg = gaf::Config::parse_file(config_path);
    const gaf::Scenario sc = gaf::load_scenario(cfg);
    r.label = sc.name;
    r.report = gaf::run_pipeline(sc, pipeline, fields_dir);
    r.ran = true;
  } catch (const gaf::IoError& e) {
    r.setup_error = true;
    r.error = e.what();
  } catch (const gaf::ConfigError& e) {
    r.setup_error = true;
    r.error = e.what();
  } catch (const gaf::Error& e) {
    // The pipeline aborted on a numerical gate (non-exact pair, singular
    // kernel, divergent potential, ...): the scenario failed, same exit as a
    // failing check.
    r.error = e.what();
  }
  return r;
}

int emit(std::vector<JobResult>& results, const fs::path& out) {
  const bool multi = results.size() > 1;
  const bool out_is_dir =
      !out.empty() && (multi || fs::is_directory(out) || out.extension().empty());
  if (out_is_dir) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create output directory '%s'\n",
                   out.string().c_str());
      return 2;
    }
  }

  bool any_fail = false, any_io = false;
  for (auto& r : results) {
    if (!r.ran) {
      std::fprintf(stderr, "%s: %s: %s\n", r.label.c_str(),
                   r.setup_error ? "error" : "FAIL", r.error.c_str());
      any_io |= r.setup_error;
      any_fail |= !r.setup_error;
      continue;
    }
    const bool pass = r.report.pass();
    any_fail |= !pass;
    std::fprintf(stderr, "%s: %s (%zu checks)\n", r.label.c_str(),
                 pass ? "pass" : "FAIL", r.report.checks.size());
    for (const auto& c : r.report.checks)
      if (!c.pass)
        std::fprintf(stderr, "  FAIL %s: %.6g > %.6g\n", c.name.c_str(), c.value,
                     c.threshold);
    try {
      if (out.empty())
        std::printf("%s\n", gaf::to_json(r.report).c_str());
      else
        gaf::write_report(r.report, out_is_dir ? out / (sanitize(r.label) + ".json") : out);
    } catch (const gaf::IoError& e) {
      std::fprintf(stderr, "%s: error: %s\n", r.label.c_str(), e.what());
      any_io = true;
    }
  }
  if (any_io) return 2;
  return any_fail ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjugate dbar-pair laboratory: solve, potentials, Moutard transforms, "
               "conformal pullbacks, and verification reports"};
  app.require_subcommand(1);
  app.footer(kConfigReference);

  std::vector<fs::path> configs;
  fs::path out, fields_dir;
  unsigned jobs = 1;

  const std::pair<const char*, gaf::Pipeline> table[] = {
      {"solve", gaf::Pipeline::Solve},         {"omega", gaf::Pipeline::Omega},
      {"moutard", gaf::Pipeline::Moutard},     {"pullback", gaf::Pipeline::Pullback},
      {"verify", gaf::Pipeline::Verify},       {"compose-check", gaf::Pipeline::ComposeCheck},
      {"export", gaf::Pipeline::Export},
  };
  const char* help[] = {
      "residuals of the conjugate equation pair",
      "potential construction: exactness, path independence, Re omega",
      "transform the triple and verify the transformed pair and product identity",
      "pull the pair back through the chart and verify on the zeta plane",
      "full pipeline: solve, omega, moutard, and pullback when a map is given",
      "compare transform-then-pullback against pullback-then-transform",
      "write the scenario's fields (CSV + binary with sidecars) to --fields-dir",
  };
  std::vector<std::pair<CLI::App*, gaf::Pipeline>> subs;
  for (size_t i = 0; i < std::size(table); ++i) {
    CLI::App* sub = app.add_subcommand(table[i].first, help[i]);
    sub->add_option("--config", configs, "scenario config file (repeatable)")->required();
    sub->add_option("--out", out,
                    "report destination: a .json file for one config, a directory "
                    "for several (default: stdout)");
    sub->add_option("--fields-dir", fields_dir, "output directory for exported fields");
    sub->add_option("--jobs", jobs, "run scenarios concurrently")->check(CLI::PositiveNumber);
    subs.emplace_back(sub, table[i].second);
  }

  CLI11_PARSE(app, argc, argv);

  gaf::Pipeline pipeline = gaf::Pipeline::Verify;
  for (const auto& [sub, p] : subs)
    if (sub->parsed()) pipeline = p;

  std::vector<JobResult> results(configs.size());
  const unsigned workers =
      std::min<unsigned>(std::max(1u, jobs), static_cast<unsigned>(configs.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < configs.size(); ++i)
      results[i] = run_one(configs[i], pipeline, fields_dir);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < configs.size(); i = next++)
          results[i] = run_one(configs[i], pipeline, fields_dir);
      });
    for (auto& t : pool) t.join();
  }

  return emit(results, out);
}
