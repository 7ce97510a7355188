// Microbenchmarks for the hot paths: the padded-FFT convolution, the
// differencing stencils, the path-integrated potential, the fixed-point
// solver, and the expression language. Grid size is the benchmark argument.

#include <benchmark/benchmark.h>

#include <cmath>

#include "gaf/moutard.hpp"
#include "gaf/vekua.hpp"

using namespace gaf;

namespace {

GridDomain square(int n) { return make_grid(-1, 1, -1, 1, n, n); }

ComplexField bump(const GridDomain& g) {
  return sample_function(g, [](Complex z) {
    return std::exp(-3.0 * std::norm(z)) * (z + Complex(0.2, 0.1));
  });
}

void bm_pompeiu_plan(benchmark::State& state) {
  const GridDomain g = square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(plan_build(g));
}
BENCHMARK(bm_pompeiu_plan)->Arg(128)->Arg(256)->Arg(512);

void bm_pompeiu_apply(benchmark::State& state) {
  const GridDomain g = square(static_cast<int>(state.range(0)));
  const PompeiuPlan plan = plan_build(g);
  const ComplexField f = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(pompeiu_apply(plan, f));
}
BENCHMARK(bm_pompeiu_apply)->Arg(128)->Arg(256)->Arg(512);

void bm_dbar(benchmark::State& state) {
  const GridDomain g = square(static_cast<int>(state.range(0)));
  const ComplexField f = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(dbar(f));
}
BENCHMARK(bm_dbar)->Arg(256)->Arg(512);

void bm_solve(benchmark::State& state) {
  const GridDomain g = square(static_cast<int>(state.range(0)));
  const PompeiuPlan plan = plan_build(g);
  const ComplexField u = make_constant_field(g, {0.1, 0});
  const ComplexField seed = make_constant_field(g, {1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(solve_psi(plan, u, seed));
}
BENCHMARK(bm_solve)->Arg(128)->Arg(256);

void bm_omega_build(benchmark::State& state) {
  const GridDomain g = make_grid(-1, 1, 0.3, 1.9, static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)));
  const ComplexField psi = sample_function(g, [](Complex z) { return z; });
  const ComplexField one = make_constant_field(g, {1, 0});
  for (auto _ : state)
    benchmark::DoNotOptimize(omega_build(psi, one, {0, 0}, -0.6, 1e-2));
}
BENCHMARK(bm_omega_build)->Arg(256)->Arg(512);

void bm_expr_parse(benchmark::State& state) {
  const std::string src = "exp(2*a*re(z)) + (z - 1)*(z + 1)/(z^2 + 4) - conj(z)^3";
  for (auto _ : state) benchmark::DoNotOptimize(parse(src));
}
BENCHMARK(bm_expr_parse);

void bm_expr_sample(benchmark::State& state) {
  const GridDomain g = square(static_cast<int>(state.range(0)));
  const ExprHandle h{parse("exp(2*a*re(z))*z + 1/(z - 3)"), {{"a", Complex(0.3, 0)}}};
  for (auto _ : state) benchmark::DoNotOptimize(sample_expression(g, h));
}
BENCHMARK(bm_expr_sample)->Arg(256);

} // namespace

BENCHMARK_MAIN();
