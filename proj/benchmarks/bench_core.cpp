#include <benchmark/benchmark.h>

#include "ricsol/ansatz.hpp"
#include "ricsol/catalog.hpp"
#include "ricsol/fitter.hpp"
#include "ricsol/semiconformal.hpp"
#include "ricsol/soliton.hpp"
#include "ricsol/tensor_lab.hpp"
#include "ricsol/warped.hpp"

using namespace ricsol;

namespace {

void BM_JetArithmetic(benchmark::State& state) {
  const Jet x = Jet::variable(0.3, 0, 4), y = Jet::variable(-0.2, 1, 4), z = Jet::variable(0.7, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(exp(x * y) / (1.0 + z * z) + sin(x - z));
}
BENCHMARK(BM_JetArithmetic);

void BM_Curvature(benchmark::State& state) {
  const auto& c = catalog::get("sl2");
  const Differ d = state.range(0) ? Differ{DiffMode::finite_difference, 1e-4} : Differ{};
  const Point p{0.1, 1.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(tensor_lab::curvature(c.g, p, d));
}
BENCHMARK(BM_Curvature)->Arg(0)->Arg(1);

void BM_RicciDecomposed(benchmark::State& state) {
  const auto& s = *catalog::get("nil").fibration;
  const Point p{0.3, -0.4, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(semiconformal::ricci_decomposed(s, p));
}
BENCHMARK(BM_RicciDecomposed);

void BM_SolitonReport(benchmark::State& state) {
  const auto& c = catalog::get("sol");
  const soliton::SolitonCandidate cand{c.g, *c.E, *c.A, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(soliton::residual_report("sol", cand, c.chart, 1e-5));
}
BENCHMARK(BM_SolitonReport)->Unit(benchmark::kMillisecond);

void BM_WarpedIntegrate(benchmark::State& state) {
  const double k = 1 / std::sqrt(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(warped::integrate({1.0, k, k * (k - 1)}, 0.0, 0.0, 1.0, 2.0));
}
BENCHMARK(BM_WarpedIntegrate)->Unit(benchmark::kMillisecond);

void BM_FitterAssemble(benchmark::State& state) {
  const auto& c = catalog::get("nil");
  const auto basis = fitter::default_basis(c);
  const auto pts = c.chart.grid();
  for (auto _ : state) benchmark::DoNotOptimize(fitter::assemble(c.g, basis, pts));
}
BENCHMARK(BM_FitterAssemble)->Unit(benchmark::kMillisecond);

void BM_FitterSolve(benchmark::State& state) {
  const auto& c = catalog::get("nil");
  const auto sys = fitter::assemble(c.g, fitter::default_basis(c), c.chart.grid());
  for (auto _ : state) benchmark::DoNotOptimize(fitter::solve(sys));
}
BENCHMARK(BM_FitterSolve)->Unit(benchmark::kMillisecond);

void BM_BuildAndVerifySol(benchmark::State& state) {
  const auto data = ansatz::sol_data();
  for (auto _ : state) benchmark::DoNotOptimize(ansatz::build_and_verify(data));
}
BENCHMARK(BM_BuildAndVerifySol)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
