#include "ridgecrest/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ridgecrest/lsddr.hpp"

namespace ridgecrest {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kUnderflow = 1e-300;

void check_model(const KdeModel& model) {
  if (model.h <= 0.0) throw std::invalid_argument("kde bandwidth must be positive");
  if (model.count() < 1) throw std::invalid_argument("kde needs at least one sample");
}

//! exp(-||x - x_i||^2 / (2 h^2)) for all samples.
Vector kernel_weights(const KdeModel& model, const Vector& x) {
  const double inv2h2 = 1.0 / (2.0 * model.h * model.h);
  return ((model.samples.rowwise() - x.transpose()).rowwise().squaredNorm() * -inv2h2)
      .array()
      .exp();
}

}  // namespace

double KdeModel::normalizer() const {
  return static_cast<double>(count()) * std::pow(2.0 * kPi * h * h, dim() / 2.0);
}

double kde_density(const KdeModel& model, const Vector& x) {
  check_model(model);
  if (x.size() != model.dim()) throw std::invalid_argument("point dimension mismatch");
  return kernel_weights(model, x).sum() / model.normalizer();
}

Vector kde_gradient(const KdeModel& model, const Vector& x) {
  check_model(model);
  if (x.size() != model.dim()) throw std::invalid_argument("point dimension mismatch");
  const Vector w = kernel_weights(model, x);
  const double inv_h2 = 1.0 / (model.h * model.h);
  Vector g = (model.samples.rowwise() - x.transpose()).transpose() * w;
  return g * (inv_h2 / model.normalizer());
}

Matrix kde_hessian(const KdeModel& model, const Vector& x) {
  check_model(model);
  if (x.size() != model.dim()) throw std::invalid_argument("point dimension mismatch");
  const Vector w = kernel_weights(model, x);
  const double inv_h2 = 1.0 / (model.h * model.h);
  const int dim = model.dim();
  Matrix hess = Matrix::Zero(dim, dim);
  for (int i = 0; i < model.count(); ++i) {
    const Vector diff = model.samples.row(i).transpose() - x;
    hess.selfadjointView<Eigen::Lower>().rankUpdate(diff, w[i] * inv_h2 * inv_h2);
  }
  Matrix full = hess.selfadjointView<Eigen::Lower>();
  full -= Matrix::Identity(dim, dim) * (inv_h2 * w.sum());
  return full / model.normalizer();
}

double nr_bandwidth(const Matrix& samples, bool use_sqrt) {
  const int n = static_cast<int>(samples.rows());
  const int dim = static_cast<int>(samples.cols());
  if (n < 2) throw std::invalid_argument("bandwidth rule needs at least two samples");
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const double pooled_var =
      (samples.rowwise() - mean).squaredNorm() / (static_cast<double>(n) * dim);
  if (pooled_var <= 0.0) throw std::invalid_argument("zero-variance data has no bandwidth scale");
  const double scale = use_sqrt ? std::sqrt(pooled_var) : pooled_var;
  const double expo = 1.0 / (dim + 6.0);
  return scale * std::pow(4.0 / (dim + 4.0), expo) * std::pow(static_cast<double>(n), -expo);
}

std::vector<double> lscv_grid(const Matrix& samples) {
  const double med = median_pairwise_scale_pooled(samples);
  std::vector<double> grid(10);
  for (int k = 0; k < 10; ++k)
    grid[static_cast<std::size_t>(k)] = std::pow(10.0, -1.5 + 1.5 * k / 9.0) * med;
  return grid;
}

namespace {

double lscv_from_dist2(const Matrix& dist2, int dim, double h, int n) {
  // integral of p-hat^2 via the Gaussian convolution (bandwidth sqrt(2) h)
  const double quad_norm = std::pow(4.0 * kPi * h * h, dim / 2.0);
  const double loo_norm = std::pow(2.0 * kPi * h * h, dim / 2.0);
  double quad_sum = 0.0;
  double loo_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      quad_sum += std::exp(-dist2(i, k) / (4.0 * h * h));
      if (k != i) loo_sum += std::exp(-dist2(i, k) / (2.0 * h * h));
    }
  }
  const double quad = quad_sum / (static_cast<double>(n) * n * quad_norm);
  const double loo_mean = loo_sum / (static_cast<double>(n) * (n - 1.0) * loo_norm);
  return quad - 2.0 * loo_mean;
}

Matrix pairwise_dist2(const Matrix& samples) {
  Matrix d2 = -2.0 * samples * samples.transpose();
  const Vector sq = samples.rowwise().squaredNorm();
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace

double lscv_criterion(const Matrix& samples, double h) {
  if (h <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  const int n = static_cast<int>(samples.rows());
  if (n < 2) throw std::invalid_argument("criterion needs at least two samples");
  return lscv_from_dist2(pairwise_dist2(samples), static_cast<int>(samples.cols()), h, n);
}

double lscv_bandwidth(const Matrix& samples, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("bandwidth grid must be non-empty");
  const int n = static_cast<int>(samples.rows());
  if (n < 2) throw std::invalid_argument("bandwidth selection needs at least two samples");
  const Matrix dist2 = pairwise_dist2(samples);
  const int dim = static_cast<int>(samples.cols());
  double best_h = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  for (double h : grid) {
    const double score = lscv_from_dist2(dist2, dim, h, n);
    if (score < best_score || (score == best_score && h > best_h)) {
      best_score = score;
      best_h = h;
    }
  }
  return best_h;
}

Vector ms_update(const KdeModel& model, const Vector& z) {
  check_model(model);
  if (z.size() != model.dim()) throw std::invalid_argument("point dimension mismatch");
  const Vector w = kernel_weights(model, z);
  return model.samples.transpose() * w / w.sum();
}

MsConfig default_ms_config(const KdeModel& model) {
  MsConfig config;
  const double extent =
      (model.samples.colwise().maxCoeff() - model.samples.colwise().minCoeff()).maxCoeff();
  config.tol_step = 1e-6 * (extent > 0.0 ? extent : 1.0);
  return config;
}

double default_ms_merge_radius(const KdeModel& model) { return model.h / 2.0; }

ClusterResult ms_cluster(const Matrix& samples, const KdeModel& model, const MsConfig& config,
                         double merge_radius) {
  const int n = static_cast<int>(samples.rows());
  if (n < 1) throw std::invalid_argument("clustering needs at least one sample");
  if (!samples.allFinite()) throw std::invalid_argument("samples must be finite");

  Matrix endpoints = Matrix::Zero(n, samples.cols());
  std::vector<bool> valid(static_cast<std::size_t>(n), false);
  ClusterResult result;
  result.iterations.resize(static_cast<std::size_t>(n));
  result.fallback_counts.assign(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < n; ++i) {
    Vector z = samples.row(i).transpose();
    Trajectory traj;
    traj.status = SeekStatus::max_iter_reached;
    if (config.record_trajectories) traj.iterates.push_back(z);
    int tau = 0;
    for (; tau < config.max_iter; ++tau) {
      const Vector next = ms_update(model, z);
      if (!next.allFinite()) {
        traj.status = SeekStatus::numeric_failure;
        break;
      }
      const double move = (next - z).norm();
      z = next;
      if (config.record_trajectories) traj.iterates.push_back(z);
      if (move < config.tol_step) {
        traj.status = SeekStatus::converged;
        ++tau;
        break;
      }
    }
    result.iterations[static_cast<std::size_t>(i)] = tau;
    if (traj.status != SeekStatus::numeric_failure) {
      endpoints.row(i) = z.transpose();
      valid[static_cast<std::size_t>(i)] = true;
    }
    if (config.record_trajectories) result.trajectories.push_back(std::move(traj));
  }

  auto [labels, modes] = merge_modes(endpoints, valid, merge_radius);
  result.labels = std::move(labels);
  result.modes = std::move(modes);
  return result;
}

Matrix kde_inverse_local_cov(const KdeModel& model, const Vector& x) {
  const double density = kde_density(model, x);
  if (density < kUnderflow) throw std::runtime_error("kde density underflow");
  const Vector grad = kde_gradient(model, x);
  const Matrix hess = kde_hessian(model, x);
  const Vector score = grad / density;
  Matrix a = -hess / density;
  a.selfadjointView<Eigen::Lower>().rankUpdate(score, 1.0);
  Matrix full = a.selfadjointView<Eigen::Lower>();
  return full;
}

Vector scms_update(const KdeModel& model, const Vector& z, int d) {
  if (d < 0 || d >= model.dim())
    throw std::invalid_argument("ridge dimension must satisfy 0 <= d < D");
  const Matrix projector = subspace_projector(kde_inverse_local_cov(model, z), d);
  const Vector mean_shift = ms_update(model, z) - z;
  return z + projector * mean_shift;
}

RidgeResult scms_find_ridge(const Matrix& starts, const KdeModel& model, int d,
                            const MsConfig& config) {
  if (d < 0 || d >= model.dim())
    throw std::invalid_argument("ridge dimension must satisfy 0 <= d < D");
  if (starts.cols() != model.dim()) throw std::invalid_argument("start dimension mismatch");
  const int n = static_cast<int>(starts.rows());
  const int dim = model.dim();

  RidgeResult result;
  result.points.resize(n, dim);
  result.statuses.assign(static_cast<std::size_t>(n), RidgeStatus::max_iter_reached);
  result.iterations.assign(static_cast<std::size_t>(n), 0);
  result.residual_gradient_norms.assign(static_cast<std::size_t>(n), 0.0);
  result.degenerate.assign(static_cast<std::size_t>(n), false);

  for (int k = 0; k < n; ++k) {
    Vector z = starts.row(k).transpose();
    RidgeStatus status = RidgeStatus::max_iter_reached;
    bool saw_degenerate = false;
    int tau = 0;
    for (; tau < config.max_iter; ++tau) {
      Matrix sigma_inv;
      try {
        sigma_inv = kde_inverse_local_cov(model, z);
      } catch (const std::exception&) {
        status = RidgeStatus::numeric_failure;
        break;
      }
      ProjectorInfo info = subspace_projector_detailed(sigma_inv, d);
      saw_degenerate = saw_degenerate || info.degenerate;
      result.diagnostics.absorb(info.projector, dim, d, info.degenerate);
      const Vector cand = z + info.projector * (ms_update(model, z) - z);
      if (!cand.allFinite()) {
        status = RidgeStatus::numeric_failure;
        break;
      }
      const double move = (cand - z).norm();
      z = cand;
      if (move < config.tol_step) {
        status = RidgeStatus::converged;
        ++tau;
        break;
      }
    }
    result.points.row(k) = z.transpose();
    result.statuses[static_cast<std::size_t>(k)] = status;
    result.iterations[static_cast<std::size_t>(k)] = tau;
    result.degenerate[static_cast<std::size_t>(k)] = saw_degenerate;
    if (status != RidgeStatus::numeric_failure) {
      try {
        const Matrix projector = subspace_projector(kde_inverse_local_cov(model, z), d);
        result.residual_gradient_norms[static_cast<std::size_t>(k)] =
            (projector * (kde_gradient(model, z) / kde_density(model, z))).norm();
      } catch (const std::exception&) {
        // leave the residual at zero when the density underflows at the end
      }
    }
  }
  return result;
}

}  // namespace ridgecrest
