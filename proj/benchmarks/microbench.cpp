// Microbenchmarks for the hot paths: basis construction, projection, the
// thresholded fit against the full baseline, and reconstruction. Sizes follow
// the reference scenario (n=100, m=101) with p swept where it matters.

#include <benchmark/benchmark.h>

#include <optional>

#include "sfpca/model.hpp"
#include "sfpca/projection.hpp"
#include "sfpca/simgen.hpp"

namespace {

using namespace sfpca;

LqSample sample_for(std::size_t p) {
  LqScenario sc;
  sc.n = 100;
  sc.p = p;
  sc.m = 101;
  sc.s = 50;
  sc.seed = 42;
  return generate_lq(sc);
}

FitOptions default_fit() {
  FitOptions opt;
  opt.rho = 0.5;
  opt.alpha0 = 4.0;
  opt.num_components = 4;
  return opt;
}

void BM_FourierBasis(benchmark::State& state) {
  const Grid grid = Grid::linspace(101);
  const auto s_n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_fourier(s_n, grid));
}
BENCHMARK(BM_FourierBasis)->Arg(14)->Arg(44);

void BM_BsplineBasis(benchmark::State& state) {
  const Grid grid = Grid::linspace(101);
  const auto s_n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_orthonormal_bspline(s_n, 3, grid));
}
BENCHMARK(BM_BsplineBasis)->Arg(14)->Arg(44);

void BM_Projection(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const LqSample sample = sample_for(p);
  const BasisSystem basis = make_orthonormal_bspline(14, 3, sample.data.grid);
  for (auto _ : state) benchmark::DoNotOptimize(project(sample.data, basis));
}
BENCHMARK(BM_Projection)->Arg(50)->Arg(100)->Arg(200);

void BM_SparseFit(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const LqSample sample = sample_for(p);
  const BasisSystem basis = make_orthonormal_bspline(14, 3, sample.data.grid);
  const CoefficientTensor coeffs = project(sample.data, basis);
  const FitOptions opt = default_fit();
  for (auto _ : state) benchmark::DoNotOptimize(fit_sfpca_coeffs(coeffs, basis, opt));
}
BENCHMARK(BM_SparseFit)->Arg(50)->Arg(100)->Arg(200);

void BM_FullBaselineFit(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const LqSample sample = sample_for(p);
  const BasisSystem basis = make_orthonormal_bspline(14, 3, sample.data.grid);
  const CoefficientTensor coeffs = project(sample.data, basis);
  const FitOptions opt = default_fit();
  for (auto _ : state) benchmark::DoNotOptimize(mfpca_baseline(coeffs, basis, opt));
}
BENCHMARK(BM_FullBaselineFit)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Recover(benchmark::State& state) {
  const LqSample sample = sample_for(100);
  const BasisSystem basis = make_orthonormal_bspline(14, 3, sample.data.grid);
  const CoefficientTensor coeffs = project(sample.data, basis);
  const SfpcaModel model = fit_sfpca_coeffs(coeffs, basis, default_fit());
  const ScoreMatrix sm = scores(model, coeffs);
  for (auto _ : state) benchmark::DoNotOptimize(recover(model, sm));
}
BENCHMARK(BM_Recover);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
