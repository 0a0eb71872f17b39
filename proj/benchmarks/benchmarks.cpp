#include <benchmark/benchmark.h>

#include "tractorlab/corpus.hpp"
#include "tractorlab/tractor.hpp"

using namespace tractorlab;

namespace {

ChartPtr chart_n(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return std::make_shared<Chart>(names);
}

MetricPtr curved_metric(int n) {
  ChartPtr ch = chart_n(n);
  std::vector<std::vector<Expr>> comp{size_t(n), std::vector<Expr>{size_t(n), Expr()}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) comp[size_t(i)][size_t(j)] = zero_expr(ch);
  for (int i = 0; i < n; ++i) {
    Expr e = one_expr(ch) +
             Expr::symbol(ch, (i + 1) % n) * Expr::symbol(ch, (i + 1) % n) * Rational(1, 4);
    comp[size_t(i)][size_t(i)] = simplify(e);
  }
  return std::make_shared<ChartMetric>(ch, comp, 0, n);
}

void bm_curvature(benchmark::State& state) {
  int n = int(state.range(0));
  for (auto _ : state) {
    MetricPtr g = curved_metric(n);  // fresh metric: curvature cache is cold
    benchmark::DoNotOptimize(compute_curvature(*g));
  }
}
BENCHMARK(bm_curvature)->Arg(3)->Arg(4)->Arg(5);

void bm_tractor_transport(benchmark::State& state) {
  MetricPtr g = curved_metric(int(state.range(0)));
  int n = g->dim();
  Point base = chart_center(g->chart());
  Curve loop = rectangle_loop(base, 0, 1, 0.1);
  Vec t0 = Vec::Unit(n + 2, 0);
  TransportOptions opt;
  for (auto _ : state) benchmark::DoNotOptimize(tractor_parallel_transport(*g, loop, t0, opt));
}
BENCHMARK(bm_tractor_transport)->Arg(3)->Arg(4)->Arg(6);

void bm_clifford_mul(benchmark::State& state) {
  int q = int(state.range(0));
  CliffordRep rep = build_clifford(q, q);
  Vec x = Vec::LinSpaced(rep.dim(), -1.0, 1.0);
  Spinor v = make_spinor(Vec::LinSpaced(rep.N, 0.5, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(clifford_mul(rep, x, v));
}
BENCHMARK(bm_clifford_mul)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
