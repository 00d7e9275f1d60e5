// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ridgecrest/baselines.hpp"
#include "ridgecrest/data_metrics.hpp"
#include "ridgecrest/experiments.hpp"
#include "ridgecrest/kernels.hpp"
#include "ridgecrest/lsddr.hpp"
#include "ridgecrest/mode_seeking.hpp"
#include "ridgecrest/ridge_finding.hpp"
#include "test_support.hpp"

using namespace ridgecrest;
using rctest::CountedRng;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 1;

std::uint64_t crit_seed(int criterion, int rep) {
  return repetition_seed(derive_seed(kMasterSeed, static_cast<std::uint64_t>(criterion)), rep);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

class Budget {
 public:
  explicit Budget(double seconds) : limit_(seconds), start_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  bool within() const { return elapsed() < limit_; }
  std::string note() const { return fmt(elapsed()) + "s of " + fmt(limit_) + "s budget"; }

 private:
  double limit_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- criterion 1

bool criterion_derivatives(std::string& detail) {
  const Budget budget(10.0);
  std::vector<int> axes;
  auto kernel_fd = [&](const Vector& x, const Vector& c, double sigma, const MultiIndex& jx,
                       const MultiIndex& jc) {
    const int dim = static_cast<int>(x.size());
    Vector joint(2 * dim);
    joint << x, c;
    axes.clear();
    for (int d = 0; d < dim; ++d)
      for (int r = 0; r < jx[d]; ++r) axes.push_back(d);
    for (int d = 0; d < dim; ++d)
      for (int r = 0; r < jc[d]; ++r) axes.push_back(dim + d);
    auto f = [dim, sigma](const Vector& p) { return kernel_value(p.head(dim), p.tail(dim), sigma); };
    return rctest::fd_partial(f, joint, axes, 0.01 * sigma);
  };

  CountedRng rng(crit_seed(1, 0));
  double worst = 0.0;
  const int dim = 2;
  const std::vector<MultiIndex> orders = {MultiIndex::zero(dim),       MultiIndex::unit(dim, 0),
                                          MultiIndex::unit(dim, 1),    MultiIndex::pair(dim, 0, 0),
                                          MultiIndex::pair(dim, 0, 1), MultiIndex::pair(dim, 1, 1)};
  for (int config = 0; config < 100; ++config) {
    const double sigma = 0.5 + 1.5 * rng.next_double();
    const Vector c = rctest::random_vector(rng, dim);
    const Vector x = c + rctest::random_vector(rng, dim, 0.8 * sigma);
    for (const MultiIndex& jx : orders) {
      for (const MultiIndex& jc : orders) {
        if (jx.order() == 0 && jc.order() == 0) continue;
        const double analytic = kernel_partial(x, c, sigma, jx, jc);
        const double fd = kernel_fd(x, c, sigma, jx, jc);
        const double scale = std::pow(sigma, -(jx.order() + jc.order()));
        worst = std::max(worst, rctest::scaled_relative_error(analytic, fd, scale));
      }
    }
  }

  // KDE gradient and Hessian against finite differences of the density
  const Matrix samples = rctest::standard_normal_samples(crit_seed(1, 1), 80, 2);
  const KdeModel model{samples, 0.6};
  auto density = [&](const Vector& p) { return kde_density(model, p); };
  for (int config = 0; config < 100; ++config) {
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
  detail = "worst rel. error " + fmt(worst) + ", " + budget.note();
  return worst < 1e-6 && budget.within();
}

// ---------------------------------------------------------------- criterion 2

bool criterion_solver(std::string& detail) {
  CountedRng rng(crit_seed(2, 0));
  double worst_ratio = 0.0;
  int fits = 0;
  for (int n : {20, 100, 400}) {
    for (int dim : {1, 2, 3}) {
      for (int order : {1, 2}) {
        for (bool simplified : {false, true}) {
          if (simplified && order == 2) continue;
          const Matrix samples = rctest::random_matrix(rng, n, dim);
          BasisSpec basis;
          basis.centers = subsample_centers(samples, std::min(n, 40), rng.next_u64());
          basis.sigma = 0.4 + 2.0 * rng.next_double();
          basis.multi_index =
              order == 1 ? MultiIndex::unit(dim, static_cast<int>(rng.next_below(dim)))
                         : MultiIndex::pair(dim, static_cast<int>(rng.next_below(dim)),
                                            static_cast<int>(rng.next_below(dim)));
          basis.simplified = simplified;
          const double lambda = std::pow(10.0, -4.0 * rng.next_double());
          const RatioModel model = fit_ratio(samples, basis, lambda);
          auto [gram, h] = build_design(samples, basis);
          const double sign = basis.multi_index.order() % 2 == 0 ? 1.0 : -1.0;
          const int m = basis.feature_count();
          const double residual =
              ((gram + lambda * Matrix::Identity(m, m)) * model.theta - sign * h).norm();
          worst_ratio = std::max(worst_ratio, residual / (1e-8 * (1.0 + h.norm())));
          ++fits;
        }
      }
    }
  }
  detail = std::to_string(fits) + " fits, worst residual at " + fmt(worst_ratio * 100.0) +
           "% of the bound";
  return worst_ratio <= 1.0;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_estimator_accuracy(std::string& detail) {
  const Budget budget(120.0);
  const std::vector<int> sizes = {100, 400, 500, 1600};
  std::vector<std::vector<double>> rmse(sizes.size());
  std::vector<double> max_errors;  // n = 500 only
  for (int rep = 0; rep < 10; ++rep) {
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      const int n = sizes[si];
      const Matrix samples =
          rctest::standard_normal_samples(crit_seed(3, rep * 100 + static_cast<int>(si)), n, 1);
      const ModelSelection sel = select_model(
          samples, MultiIndex::unit(1, 0), std::min(n, 100), clustering_grid(samples, 0).sigmas,
          clustering_grid(samples, 0).lambdas, 5, CvAggregate::mean, crit_seed(3, rep), false);
      BasisSpec basis{subsample_centers(samples, std::min(n, 100), crit_seed(3, rep)), sel.sigma,
                      MultiIndex::unit(1, 0), false};
      const RatioModel model = fit_ratio(samples, basis, sel.lambda);
      double sum_sq = 0.0;
      double max_err = 0.0;
      int count = 0;
      for (double x = -2.0; x <= 2.0 + 1e-9; x += 0.1) {
        const double g = model.evaluate(Vector::Constant(1, x));
        const double err = std::abs(g - (-x));
        sum_sq += err * err;
        max_err = std::max(max_err, err);
        ++count;
      }
      rmse[si].push_back(std::sqrt(sum_sq / count));
      if (n == 500) max_errors.push_back(max_err);
    }
  }
  const double rmse100 = rctest::median_of(rmse[0]);
  const double rmse400 = rctest::median_of(rmse[1]);
  const double rmse500 = rctest::median_of(rmse[2]);
  const double rmse1600 = rctest::median_of(rmse[3]);
  const double max500 = rctest::median_of(max_errors);
  detail = "median RMSE n=500: " + fmt(rmse500) + " (max-grid " + fmt(max500) +
           "); trend 100/400/1600: " + fmt(rmse100) + "/" + fmt(rmse400) + "/" + fmt(rmse1600) +
           "; " + budget.note();
  return rmse500 < 0.15 && max500 < 0.5 && rmse100 >= rmse400 && rmse400 >= rmse1600 &&
         budget.within();
}

// ---------------------------------------------------------------- criterion 4

bool criterion_inverse_cov(std::string& detail) {
  std::vector<double> errors;
  std::ostringstream list;
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint64_t seed = crit_seed(4, rep);
    const Matrix samples = rctest::standard_normal_samples(seed, 1000, 2);
    const Matrix centers = subsample_centers(samples, 100, seed);
    FitOptions gopts;
    gopts.seed = seed;
    gopts.simplified = true;
    std::vector<ParamGrid> ggrids = {ridge_gradient_grid(samples, 0),
                                     ridge_gradient_grid(samples, 1)};
    const GradientModel gm = fit_gradient(samples, centers, ggrids, gopts);
    FitOptions hopts;
    hopts.seed = seed;
    std::vector<ParamGrid> hgrids;
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) hgrids.push_back(ridge_hessian_grid(samples, i, j));
    const HessianModel hm = fit_hessian(samples, centers, hgrids, hopts);
    const Matrix sigma_inv = inverse_local_cov(gm, hm, Vector::Zero(2));
    errors.push_back((sigma_inv - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff());
    list << (rep > 0 ? " " : "") << fmt(errors.back());
  }
  const double median = rctest::median_of(errors);
  detail = "median max-entry error " + fmt(median) + " (per seed: " + list.str() + ")";
  return median < 0.3;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_ms_reduction(std::string& detail) {
  CountedRng rng(crit_seed(5, 0));
  const int n = 60;
  const Matrix samples = rctest::random_matrix(rng, n, 2);
  const double h = 0.8;
  std::vector<RatioModel> components;
  for (int j = 0; j < 2; ++j) {
    RatioModel c;
    c.basis.centers = samples;
    c.basis.sigma = h;
    c.basis.multi_index = MultiIndex::unit(2, j);
    c.basis.simplified = true;
    c.theta = Vector::Constant(n, -1.0 / n);  // tilde-beta = 1/n
    c.lambda = 1.0;
    components.push_back(std::move(c));
  }
  const GradientModel model(std::move(components));
  const KdeModel kde{samples, h};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector z = rctest::random_vector(rng, 2, 1.5);
    const StepResult step = fixed_point_step(model, z);
    worst = std::max(worst, (step.z - ms_update(kde, z)).cwiseAbs().maxCoeff());
  }
  detail = "max |LSLDGC step - MS step| = " + fmt(worst) + " over 100 points";
  return worst < 1e-10;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_monotone_climb(std::string& detail) {
  double min_dhat = 0.0;
  long steps = 0;
  for (int rep = 0; rep < 3; ++rep) {
    ExperimentConfig config;
    config.method = Method::lsldgc_cw;
    config.nonneg_beta = true;  // the --nonneg-beta pipeline flag
    config.dataset.generator = "blobs";
    config.dataset.n = 600;
    config.dataset.dim = 2;
    const LabeledDataset data = materialize(config.dataset, crit_seed(6, rep));
    const ClusterRun run = cluster_once(config, data, crit_seed(6, rep),
                                        /*record_trajectories=*/true);
    for (const Trajectory& traj : run.clusters.trajectories) {
      for (double d : traj.dhat) {
        min_dhat = std::min(min_dhat, d);
        ++steps;
      }
    }
  }
  detail = "min recorded D-hat " + fmt(min_dhat) + " over " + std::to_string(steps) + " steps";
  return min_dhat >= -1e-12;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_clustering(std::string& detail) {
  const Budget budget(300.0);
  std::vector<double> ari_d2, ari_d10, ari_ms;
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint64_t seed = crit_seed(7, rep);
    {
      ExperimentConfig config;
      config.method = Method::lsldgc;
      config.dataset.generator = "blobs";
      config.dataset.n = 600;
      config.dataset.dim = 2;
      const LabeledDataset data = materialize(config.dataset, seed);
      const ClusterRun run = cluster_once(config, data, seed);
      ari_d2.push_back(adjusted_rand_index(run.clusters.labels, data.labels));
    }
    {
      ExperimentConfig config;
      config.method = Method::lsldgc;
      config.dataset.generator = "blobs";
      config.dataset.n = 600;
      config.dataset.dim = 10;
      const LabeledDataset data = materialize(config.dataset, seed);
      const ClusterRun lsldgc_run = cluster_once(config, data, seed);
      ari_d10.push_back(adjusted_rand_index(lsldgc_run.clusters.labels, data.labels));
      config.method = Method::ms_nr;
      const ClusterRun ms_run = cluster_once(config, data, seed);
      ari_ms.push_back(adjusted_rand_index(ms_run.clusters.labels, data.labels));
    }
  }
  const double d2 = rctest::median_of(ari_d2);
  const double d10 = rctest::median_of(ari_d10);
  const double ms = rctest::median_of(ari_ms);
  detail = "median ARI: D=2 " + fmt(d2) + ", D=10 " + fmt(d10) + ", MS_NR D=10 " + fmt(ms) +
           "; " + budget.note();
  return d2 >= 0.85 && d10 >= 0.7 && d10 > ms && budget.within();
}

// ---------------------------------------------------------------- criterion 8/9

struct RidgeOutcome {
  double lsdrf_median = 0.0;
  double scms_median = 0.0;
  double raw_median = 0.0;
  ProjectorDiagnostics lsdrf_diag;
  ProjectorDiagnostics scms_diag;
  bool ran = false;
};
RidgeOutcome g_ridge;

void absorb(ProjectorDiagnostics& into, const ProjectorDiagnostics& from) {
  into.max_idempotency_error = std::max(into.max_idempotency_error, from.max_idempotency_error);
  into.max_symmetry_error = std::max(into.max_symmetry_error, from.max_symmetry_error);
  into.max_trace_error = std::max(into.max_trace_error, from.max_trace_error);
  into.degenerate_count += from.degenerate_count;
}

bool criterion_ridge_quality(std::string& detail) {
  const Budget budget(600.0);
  std::vector<double> lsdrf_err, scms_err, raw_err;
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint64_t seed = crit_seed(8, rep);
    ExperimentConfig config;
    config.dataset.generator = "circle";
    config.dataset.n = 1000;
    config.dataset.dim = 2;
    config.dataset.noise_std = 0.15;
    config.d = 1;
    const LabeledDataset data = materialize(config.dataset, seed);
    raw_err.push_back(ridge_error(data.points, data.truth_curve));

    config.method = Method::lsdrf;
    const RidgeRun lsdrf_run = ridge_once(config, data, seed);
    lsdrf_err.push_back(ridge_error(lsdrf_run.ridge.points, data.truth_curve));
    absorb(g_ridge.lsdrf_diag, lsdrf_run.ridge.diagnostics);

    config.method = Method::scms_ls;
    const RidgeRun scms_run = ridge_once(config, data, seed);
    scms_err.push_back(ridge_error(scms_run.ridge.points, data.truth_curve));
    absorb(g_ridge.scms_diag, scms_run.ridge.diagnostics);
  }
  g_ridge.lsdrf_median = rctest::median_of(lsdrf_err);
  g_ridge.scms_median = rctest::median_of(scms_err);
  g_ridge.raw_median = rctest::median_of(raw_err);
  g_ridge.ran = true;
  detail = "median error: LSDRF " + fmt(g_ridge.lsdrf_median) + ", SCMS_LS " +
           fmt(g_ridge.scms_median) + ", raw baseline " + fmt(g_ridge.raw_median) + "; " +
           budget.note();
  return g_ridge.lsdrf_median < g_ridge.raw_median &&
         g_ridge.lsdrf_median <= g_ridge.scms_median && budget.within();
}

bool criterion_projector_invariants(std::string& detail) {
  if (!g_ridge.ran) {
    detail = "ridge criterion did not run";
    return false;
  }
  const double worst = std::max(
      {g_ridge.lsdrf_diag.max_idempotency_error, g_ridge.lsdrf_diag.max_symmetry_error,
       g_ridge.lsdrf_diag.max_trace_error, g_ridge.scms_diag.max_idempotency_error,
       g_ridge.scms_diag.max_symmetry_error, g_ridge.scms_diag.max_trace_error});
  detail = "worst projector deviation " + fmt(worst) + " across all LSDRF and SCMS iterates";
  return worst < 1e-8;
}

// ---------------------------------------------------------------- criterion 10

bool criterion_path_integral(std::string& detail) {
  CountedRng rng(crit_seed(10, 0));
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int b = 6 + static_cast<int>(rng.next_below(6));
    const Matrix centers = rctest::random_matrix(rng, b, 2);
    std::vector<RatioModel> components;
    for (int j = 0; j < 2; ++j) {
      RatioModel c;
      c.basis.centers = centers;
      c.basis.sigma = 0.7 + rng.next_double();
      c.basis.multi_index = MultiIndex::unit(2, j);
      c.basis.simplified = true;
      c.theta = rctest::random_vector(rng, b);
      c.lambda = 1.0;
      components.push_back(std::move(c));
    }
    const GradientModel model(std::move(components));
    const Vector x = rctest::random_vector(rng, 2);
    const Vector y = rctest::random_vector(rng, 2);
    worst = std::max(worst,
                     std::abs(path_integral(model, x, y) - path_integral_quadrature(model, x, y, 64)));
  }

  // fitted standard normal: D-hat[(0,0)|(1,1)] approximates 1
  const Matrix samples = rctest::standard_normal_samples(crit_seed(10, 1), 1000, 2);
  const Matrix centers = subsample_centers(samples, 100, crit_seed(10, 2));
  FitOptions options;
  options.seed = crit_seed(10, 3);
  options.simplified = true;
  const GradientModel fitted = fit_gradient(
      samples, centers, {clustering_grid(samples, 0), clustering_grid(samples, 1)}, options);
  const double dhat = path_integral(fitted, Vector::Zero(2), Vector::Ones(2));
  detail = "closed-form vs quadrature worst gap " + fmt(worst) + "; fitted D-hat[(0,0)|(1,1)] = " +
           fmt(dhat);
  return worst < 1e-8 && std::abs(dhat - 1.0) < 0.3;
}

// ---------------------------------------------------------------- criterion 11

double ari_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const bool sa = a[i] == a[k];
      const bool sb = b[i] == b[k];
      if (sa && sb) n11 += 1;
      else if (sa) n10 += 1;
      else if (sb) n01 += 1;
      else n00 += 1;
    }
  }
  const double total = n11 + n10 + n01 + n00;
  const double expected = (n11 + n10) * (n11 + n01) / total;
  const double max_index = 0.5 * ((n11 + n10) + (n11 + n01));
  if (max_index == expected) return 1.0;
  return (n11 - expected) / (max_index - expected);
}

bool criterion_metric_oracles(std::string& detail) {
  CountedRng rng(crit_seed(11, 0));
  double worst_ari = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 6 + static_cast<int>(rng.next_below(25));
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(4));
      b[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(3));
    }
    worst_ari = std::max(worst_ari, std::abs(adjusted_rand_index(a, b) - ari_pairs(a, b)));
  }

  double worst_sets = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = rctest::random_matrix(rng, 12, 3);
    const Matrix y = rctest::random_matrix(rng, 9, 3);
    double forward = 0.0, backward = 0.0;
    for (int i = 0; i < 12; ++i) {
      double best = 1e300;
      for (int k = 0; k < 9; ++k) best = std::min(best, (x.row(i) - y.row(k)).norm());
      forward = std::max(forward, best);
    }
    for (int k = 0; k < 9; ++k) {
      double best = 1e300;
      for (int i = 0; i < 12; ++i) best = std::min(best, (x.row(i) - y.row(k)).norm());
      backward = std::max(backward, best);
    }
    worst_sets = std::max(worst_sets,
                          std::abs(hausdorff(x, y) - std::max(forward, backward)));
    double mean_min = 0.0;
    for (int i = 0; i < 12; ++i) {
      double best = 1e300;
      for (int k = 0; k < 9; ++k) best = std::min(best, (x.row(i) - y.row(k)).norm());
      mean_min += best;
    }
    worst_sets = std::max(worst_sets, std::abs(ridge_error(x, y) - mean_min / 12.0));
  }
  detail = "ARI worst gap " + fmt(worst_ari) + ", set-metric worst gap " + fmt(worst_sets);
  return worst_ari < 1e-12 && worst_sets < 1e-12;
}

// ---------------------------------------------------------------- criterion 12

bool criterion_determinism(std::string& detail) {
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto fresh = [](const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
  };

  bool ok = true;
  std::ostringstream notes;

  {  // cluster runs, including concurrent repetitions
    ExperimentConfig config;
    config.method = Method::lsldgc;
    config.dataset.generator = "blobs";
    config.dataset.n = 150;
    config.dataset.dim = 2;
    config.repetitions = 2;
    config.seed = crit_seed(12, 0);
    config.out_dir = fresh("rc_acc_det_a");
    run_cluster(config);
    const std::string labels1 = slurp(config.out_dir + "/labels_lsldgc_rep000.csv");
    const std::string modes1 = slurp(config.out_dir + "/modes_lsldgc_rep001.csv");
    config.out_dir = fresh("rc_acc_det_b");
    config.jobs = 2;
    run_cluster(config);
    ok = ok && labels1 == slurp(config.out_dir + "/labels_lsldgc_rep000.csv");
    ok = ok && modes1 == slurp(config.out_dir + "/modes_lsldgc_rep001.csv");
    notes << "cluster " << (ok ? "ok" : "MISMATCH");
  }
  {  // ridge runs
    ExperimentConfig config;
    config.method = Method::scms_ls;
    config.dataset.generator = "circle";
    config.dataset.n = 200;
    config.dataset.dim = 2;
    config.d = 1;
    config.seed = crit_seed(12, 1);
    config.out_dir = fresh("rc_acc_det_c");
    run_ridge(config);
    const std::string ridge1 = slurp(config.out_dir + "/ridge_scms_ls_rep000.csv");
    config.out_dir = fresh("rc_acc_det_d");
    run_ridge(config);
    const bool same = ridge1 == slurp(config.out_dir + "/ridge_scms_ls_rep000.csv");
    ok = ok && same;
    notes << ", ridge " << (same ? "ok" : "MISMATCH");
  }
  {  // benchmark sweeps
    ExperimentConfig config;
    config.method = Method::ms_nr;
    config.dataset.generator = "blobs";
    config.dataset.n = 100;
    config.dataset.dim = 2;
    config.repetitions = 2;
    config.seed = crit_seed(12, 2);
    config.sweep.axis = "n";
    config.sweep.values = {80, 120};
    config.out_dir = fresh("rc_acc_det_e");
    run_benchmark(config);
    const std::string csv1 = slurp(config.out_dir + "/benchmark_ms_nr_n.csv");
    config.out_dir = fresh("rc_acc_det_f");
    run_benchmark(config);
    const bool same = csv1 == slurp(config.out_dir + "/benchmark_ms_nr_n.csv");
    ok = ok && same;
    notes << ", benchmark " << (same ? "ok" : "MISMATCH");
  }
  detail = notes.str();
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "derivative correctness (kernel partials + KDE, rel. err < 1e-6)", criterion_derivatives},
      {2, "solver contract (normal-equation residual bound)", criterion_solver},
      {3, "estimator accuracy (1-D RMSE < 0.15, monotone trend)", criterion_estimator_accuracy},
      {4, "inverse local covariance accuracy (max entry < 0.3)", criterion_inverse_cov},
      {5, "mean-shift reduction (LSLDGC step == MS step, 1e-10)", criterion_ms_reduction},
      {6, "monotone hill-climb with nonneg-beta + coordinate-wise rule", criterion_monotone_climb},
      {7, "clustering quality (blobs D=2 and D=10 vs MS_NR)", criterion_clustering},
      {8, "ridge quality (circle: LSDRF < raw, <= SCMS_LS)", criterion_ridge_quality},
      {9, "projector invariants (L^2=L, L=L^T, trace=D-d, 1e-8)", criterion_projector_invariants},
      {10, "path-integral consistency (closed form vs quadrature, analytic)", criterion_path_integral},
      {11, "metric oracles (ARI, Hausdorff, ridge error)", criterion_metric_oracles},
      {12, "determinism (byte-identical reruns, concurrent jobs)", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion.id,
                criterion.name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures == 0)
    std::printf("all %d acceptance criteria passed\n", static_cast<int>(criteria.size()));
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
