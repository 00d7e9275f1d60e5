#include <benchmark/benchmark.h>

#include "ridgecrest/baselines.hpp"
#include "ridgecrest/data_metrics.hpp"
#include "ridgecrest/experiments.hpp"
#include "ridgecrest/mode_seeking.hpp"

using namespace ridgecrest;

namespace {

const LabeledDataset& blob_data() {
  static const LabeledDataset data = gen_blobs(500, 2, 42);
  return data;
}

const GradientModel& blob_model() {
  static const GradientModel model = [] {
    const LabeledDataset& data = blob_data();
    const Matrix centers = subsample_centers(data.points, 100, 7);
    FitOptions options;
    options.seed = 7;
    options.simplified = true;
    return fit_gradient(data.points, centers,
                        {clustering_grid(data.points, 0), clustering_grid(data.points, 1)},
                        options);
  }();
  return model;
}

}  // namespace

static void BM_FixedPointStep(benchmark::State& state) {
  const GradientModel& model = blob_model();
  const Vector z = blob_data().points.row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_step(model, z));
}
BENCHMARK(BM_FixedPointStep);

static void BM_PathIntegralClosedForm(benchmark::State& state) {
  const GradientModel& model = blob_model();
  const Vector x = blob_data().points.row(0).transpose();
  const Vector y = blob_data().points.row(1).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(path_integral(model, x, y));
}
BENCHMARK(BM_PathIntegralClosedForm);

static void BM_SeekMode(benchmark::State& state) {
  const GradientModel& model = blob_model();
  const SeekConfig config = default_seek_config(model);
  const Vector start = blob_data().points.row(3).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(seek_mode(model, start, config));
}
BENCHMARK(BM_SeekMode);

static void BM_KdeHessian(benchmark::State& state) {
  const LabeledDataset& data = blob_data();
  const KdeModel model{data.points, nr_bandwidth(data.points)};
  const Vector x = data.points.row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(kde_hessian(model, x));
}
BENCHMARK(BM_KdeHessian);

static void BM_GradientFitD2(benchmark::State& state) {
  const LabeledDataset& data = blob_data();
  for (auto _ : state) {
    const Matrix centers = subsample_centers(data.points, 100, 7);
    FitOptions options;
    options.seed = 7;
    options.simplified = true;
    benchmark::DoNotOptimize(fit_gradient(
        data.points, centers,
        {clustering_grid(data.points, 0), clustering_grid(data.points, 1)}, options));
  }
}
BENCHMARK(BM_GradientFitD2)->Unit(benchmark::kMillisecond);
