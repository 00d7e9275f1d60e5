#include <benchmark/benchmark.h>

#include "ridgecrest/kernels.hpp"
#include "ridgecrest/lsddr.hpp"
#include "ridgecrest/rng.hpp"

using namespace ridgecrest;

namespace {

Matrix random_points(std::uint64_t seed, int n, int dim) {
  CountedRng rng(seed);
  Matrix m(n, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.next_normal();
  return m;
}

}  // namespace

static void BM_KernelPartial11(benchmark::State& state) {
  const Matrix pts = random_points(1, 2, 5);
  const Vector x = pts.row(0).transpose();
  const Vector c = pts.row(1).transpose();
  const MultiIndex e2 = MultiIndex::unit(5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_partial(x, c, 0.8, e2, e2));
}
BENCHMARK(BM_KernelPartial11);

static void BM_KernelPartial22(benchmark::State& state) {
  const Matrix pts = random_points(2, 2, 5);
  const Vector x = pts.row(0).transpose();
  const Vector c = pts.row(1).transpose();
  const MultiIndex mi = MultiIndex::pair(5, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_partial(x, c, 0.8, mi, mi));
}
BENCHMARK(BM_KernelPartial22);

static void BM_BuildDesign(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix samples = random_points(3, n, 2);
  BasisSpec basis;
  basis.centers = subsample_centers(samples, std::min(n, 100), 7);
  basis.sigma = 0.7;
  basis.multi_index = MultiIndex::unit(2, 0);
  basis.simplified = state.range(1) != 0;
  for (auto _ : state) {
    auto [gram, h] = build_design(samples, basis);
    benchmark::DoNotOptimize(gram);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_BuildDesign)->Args({500, 0})->Args({500, 1})->Args({2000, 1});
