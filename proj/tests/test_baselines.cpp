#include <doctest.h>

#include <cmath>

#include "ridgecrest/baselines.hpp"
#include "ridgecrest/data_metrics.hpp"
#include "test_support.hpp"

using namespace ridgecrest;
using rctest::CountedRng;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("kde point values") {
  Matrix one(1, 2);
  one << 0.3, -0.2;
  const KdeModel model{one, 0.7};
  const Vector x = one.row(0).transpose();
  CHECK(kde_density(model, x) ==
        doctest::Approx(std::pow(2.0 * kPi * 0.49, -1.0)).epsilon(1e-12));
  CHECK(kde_gradient(model, x).norm() == doctest::Approx(0.0));
  CHECK_THROWS_AS(kde_density(KdeModel{one, 0.0}, x), std::invalid_argument);
}

TEST_CASE("kde derivatives match finite differences") {
  CountedRng rng(3);
  const Matrix samples = rctest::random_matrix(rng, 60, 2);
  const KdeModel model{samples, 0.6};
  auto density = [&](const Vector& p) { return kde_density(model, p); };
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = rctest::random_vector(rng, 2);
    const Vector grad = kde_gradient(model, x);
    const Matrix hess = kde_hessian(model, x);
    const double scale = kde_density(model, x) / (model.h * model.h);
    for (int a = 0; a < 2; ++a) {
      const double fd_g = rctest::fd_partial(density, x, {a}, 1e-2 * model.h);
      worst = std::max(worst, rctest::scaled_relative_error(grad[a], fd_g, scale * model.h));
      for (int b = a; b < 2; ++b) {
        const double fd_h = rctest::fd_partial(density, x, {a, b}, 1e-2 * model.h);
        worst = std::max(worst, rctest::scaled_relative_error(hess(a, b), fd_h, scale));
      }
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("normal reference bandwidth") {
  // standardized data: pooled variance is exactly one
  const Matrix raw = rctest::standard_normal_samples(7, 600, 2);
  LabeledDataset ds;
  ds.points = raw;
  const Matrix standardized = standardize(ds).points;
  const double h = nr_bandwidth(standardized);
  const double expected = std::pow(4.0 / 6.0, 1.0 / 8.0) * std::pow(600.0, -1.0 / 8.0);
  CHECK(h == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.4271).epsilon(1e-3));

  // homogeneity: scaling the data by c scales the printed formula by c^2
  const double h_scaled = nr_bandwidth(2.0 * standardized);
  CHECK(h_scaled == doctest::Approx(4.0 * h).epsilon(1e-12));

  // sqrt variant uses the standard deviation instead
  const double h_sqrt = nr_bandwidth(4.0 * standardized, /*use_sqrt=*/true);
  CHECK(h_sqrt == doctest::Approx(4.0 * expected).epsilon(1e-12));

  // two-pass variance oracle
  const Matrix samples = rctest::standard_normal_samples(9, 100, 3);
  double pooled = 0.0;
  for (int j = 0; j < 3; ++j) {
    double mean = samples.col(j).mean();
    for (int i = 0; i < 100; ++i) pooled += (samples(i, j) - mean) * (samples(i, j) - mean);
  }
  pooled /= 300.0;
  const double expo = 1.0 / 9.0;
  CHECK(nr_bandwidth(samples) ==
        doctest::Approx(pooled * std::pow(4.0 / 7.0, expo) * std::pow(100.0, -expo))
            .epsilon(1e-12));

  CHECK_THROWS_AS(nr_bandwidth(Matrix::Ones(10, 2)), std::invalid_argument);
  CHECK_THROWS_AS(nr_bandwidth(Matrix::Ones(1, 2)), std::invalid_argument);
}

TEST_CASE("lscv criterion and selection") {
  // single candidate grid returns the candidate
  const Matrix samples = rctest::standard_normal_samples(11, 80, 1);
  const std::vector<double> single = {0.4};
  CHECK(lscv_bandwidth(samples, single) == 0.4);

  // closed-form quadratic term against numeric integration in 1-D
  for (double h : {0.3, 0.8}) {
    const KdeModel model{samples, h};
    double integral = 0.0;
    const double lo = samples.minCoeff() - 8.0 * h;
    const double hi = samples.maxCoeff() + 8.0 * h;
    const int grid_size = 20000;
    const double step = (hi - lo) / grid_size;
    for (int k = 0; k < grid_size; ++k) {
      Vector x(1);
      x << lo + (k + 0.5) * step;
      const double p = kde_density(model, x);
      integral += p * p * step;
    }
    double loo = 0.0;
    for (int i = 0; i < samples.rows(); ++i) {
      double acc = 0.0;
      for (int k = 0; k < samples.rows(); ++k) {
        if (k == i) continue;
        const double diff = samples(i, 0) - samples(k, 0);
        acc += std::exp(-diff * diff / (2.0 * h * h));
      }
      loo += acc / ((samples.rows() - 1.0) * std::sqrt(2.0 * kPi * h * h));
    }
    loo /= static_cast<double>(samples.rows());
    CHECK(lscv_criterion(samples, h) == doctest::Approx(integral - 2.0 * loo).epsilon(1e-4));
  }

  // well-separated mixture: the selected bandwidth resolves the components
  CountedRng rng(13);
  Matrix mixture(500, 1);
  for (int i = 0; i < 500; ++i)
    mixture(i, 0) = (i % 2 == 0 ? -5.0 : 5.0) + rng.next_normal();
  const double h = lscv_bandwidth(mixture, lscv_grid(mixture));
  CHECK(h < 10.0);  // below the mixture spread
  CHECK(h > 0.0);
}

TEST_CASE("mean shift update identities") {
  Matrix one(1, 2);
  one << 1.5, -0.5;
  const KdeModel single{one, 1.0};
  CountedRng rng(17);
  const Vector z = rctest::random_vector(rng, 2);
  CHECK((ms_update(single, z) - one.row(0).transpose()).norm() < 1e-15);

  Matrix two(2, 1);
  two << -1.0, 1.0;
  const KdeModel pair{two, 0.8};
  Vector mid = Vector::Zero(1);
  CHECK(std::abs(ms_update(pair, mid)[0]) < 1e-15);

  // Eq.(11)/(12): the displacement is a positive multiple of the gradient
  const Matrix samples = rctest::standard_normal_samples(19, 50, 2);
  const KdeModel model{samples, 0.7};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector point = rctest::random_vector(rng, 2);
    const Vector move = ms_update(model, point) - point;
    const Vector grad = kde_gradient(model, point);
    const double weight_sum =
        ((model.samples.rowwise() - point.transpose()).rowwise().squaredNorm() *
         (-1.0 / (2.0 * model.h * model.h)))
            .array()
            .exp()
            .sum();
    const double coeff = model.h * model.h * model.normalizer() / weight_sum;
    CHECK(coeff > 0.0);
    CHECK((move - coeff * grad).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("mean shift trajectories never decrease the density") {
  const LabeledDataset data = gen_blobs(200, 2, 23);
  const KdeModel model{data.points, nr_bandwidth(data.points)};
  for (int i = 0; i < 20; ++i) {
    Vector z = data.points.row(i * 7).transpose();
    double density = kde_density(model, z);
    for (int it = 0; it < 200; ++it) {
      const Vector next = ms_update(model, z);
      const double next_density = kde_density(model, next);
      CHECK(next_density >= density - 1e-12);
      if ((next - z).norm() < 1e-9) break;
      z = next;
      density = next_density;
    }
  }
}

TEST_CASE("ms clustering on blobs") {
  const LabeledDataset data = gen_blobs(600, 2, 31);
  const KdeModel model{data.points, nr_bandwidth(data.points)};
  const MsConfig config = default_ms_config(model);
  const ClusterResult result =
      ms_cluster(data.points, model, config, default_ms_merge_radius(model));
  CHECK(adjusted_rand_index(result.labels, data.labels) >= 0.8);

  // determinism: identical labels on a rerun
  const ClusterResult again =
      ms_cluster(data.points, model, config, default_ms_merge_radius(model));
  CHECK(result.labels == again.labels);
}

TEST_CASE("kde inverse local covariance") {
  // single sample: Sigma^-1 = I / h^2 at the sample
  Matrix one(1, 2);
  one << 0.0, 0.0;
  const KdeModel single{one, 0.5};
  const Matrix sigma_inv = kde_inverse_local_cov(single, Vector::Zero(2));
  CHECK((sigma_inv - Matrix::Identity(2, 2) / 0.25).cwiseAbs().maxCoeff() < 1e-12);

  // matches -grad grad log p-hat by finite differences of the log density
  const Matrix samples = rctest::standard_normal_samples(37, 80, 2);
  const KdeModel model{samples, 0.8};
  auto log_density = [&](const Vector& p) { return std::log(kde_density(model, p)); };
  CountedRng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = rctest::random_vector(rng, 2, 0.8);
    const Matrix mine = kde_inverse_local_cov(model, x);
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b)
        CHECK(std::abs(mine(a, b) + rctest::fd_partial(log_density, x, {a, b}, 1e-3)) < 1e-5);
  }

  // underflow guard
  CHECK_THROWS_AS(kde_inverse_local_cov(model, Vector::Constant(2, 1e4)), std::runtime_error);
}

TEST_CASE("scms update identities") {
  const Matrix samples = rctest::standard_normal_samples(41, 100, 2);
  const KdeModel model{samples, 0.7};
  CountedRng rng(41);
  // d = 0 equals the mean-shift displacement
  for (int trial = 0; trial < 10; ++trial) {
    const Vector z = rctest::random_vector(rng, 2);
    const Vector scms = scms_update(model, z, 0);
    const Vector ms = ms_update(model, z);
    CHECK((scms - ms).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("scms ridge on the circle") {
  const LabeledDataset data = gen_ridge_curve(RidgeCurve::circle, 500, 2, 0.15, 43);
  const double h = lscv_bandwidth(data.points, lscv_grid(data.points));
  const KdeModel model{data.points, h};
  const RidgeResult result =
      scms_find_ridge(data.points, model, 1, default_ms_config(model));

  const double raw_error = ridge_error(data.points, data.truth_curve);
  const double fit_error = ridge_error(result.points, data.truth_curve);
  CHECK(std::isfinite(fit_error));
  CHECK(fit_error < raw_error);

  // projector invariants along the SCMS iterates as well
  CHECK(result.diagnostics.max_idempotency_error < 1e-8);
  CHECK(result.diagnostics.max_symmetry_error < 1e-8);
  CHECK(result.diagnostics.max_trace_error < 1e-8);

  // a start far outside the data underflows and is abandoned, run continues
  Matrix far(1, 2);
  far << 1e4, 1e4;
  const RidgeResult abandoned = scms_find_ridge(far, model, 1, default_ms_config(model));
  CHECK(abandoned.statuses[0] == RidgeStatus::numeric_failure);
}
