#include "ridgecrest/mode_seeking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "model_view.hpp"
#include "ridgecrest/quadrature.hpp"

namespace ridgecrest {

namespace {

const RadialProfile& resolve(const RadialProfile* profile) {
  return profile != nullptr ? *profile : gaussian_profile();
}

void check_point(const GradientModel& model, const Vector& z) {
  if (z.size() != model.dim()) throw std::invalid_argument("point dimension mismatch");
}

}  // namespace

namespace detail {

StepResult step_impl(const ModelView& view, const Vector& z, const Vector& guards,
                     bool coordinate_wise, const RadialProfile& profile) {
  StepResult out;
  out.z = z;
  out.f.resize(view.dim());

  Vector dist2 = view.squared_distances(z);
  const auto& centers = view.centers();
  for (int j = 0; j < view.dim(); ++j) {
    const CoordinateEval e = view.eval_coordinate(j, dist2, profile);
    out.f[j] = e.f;
    if (std::abs(e.f) <= guards[j]) out.guard = true;
    const double updated = (view.sigma2[j] * e.alpha_phi + e.num) / e.f;
    if (coordinate_wise) {
      // carry the partially updated point into the next coordinates
      for (Eigen::Index i = 0; i < centers.rows(); ++i) {
        const double c = centers(i, j);
        dist2[i] += (updated - c) * (updated - c) - (out.z[j] - c) * (out.z[j] - c);
      }
    }
    out.z[j] = updated;
  }
  return out;
}

double path_integral_impl(const ModelView& view, const Vector& x, const Vector& y,
                          const RadialProfile& profile) {
  if (!view.simplified) return path_integral_quadrature_impl(view, x, y, 32, profile);

  const auto& centers = view.centers();
  const Eigen::Index b = centers.rows();
  // Segment j swaps coordinate j from y to x while earlier coordinates
  // already sit at x; only the j-th coordinate of the distances changes.
  Vector point = y;
  Vector dist2 = view.squared_distances(point);
  double total = 0.0;
  for (int j = 0; j < view.dim(); ++j) {
    for (Eigen::Index i = 0; i < b; ++i) {
      const double c = centers(i, j);
      const double d2_y = dist2[i];
      const double delta = (x[j] - c) * (x[j] - c) - (point[j] - c) * (point[j] - c);
      const double d2_x = d2_y + delta;
      total += view.tilde_beta(i, j) *
               (profile.phi(d2_x * view.inv2s2[j]) - profile.phi(d2_y * view.inv2s2[j]));
      dist2[i] = d2_x;
    }
    point[j] = x[j];
  }
  return total;
}

double path_integral_quadrature_impl(const ModelView& view, const Vector& x, const Vector& y,
                                     int nodes, const RadialProfile& profile) {
  double total = 0.0;
  Vector point = y;
  for (int j = 0; j < view.dim(); ++j) {
    if (y[j] != x[j]) {
      Vector probe = point;
      total += integrate(
          [&](double t) {
            probe[j] = t;
            const Vector dist2 = view.squared_distances(probe);
            return view.gradient_coordinate(j, probe, dist2, profile);
          },
          y[j], x[j], nodes);
    }
    point[j] = x[j];
  }
  return total;
}

AscentResult ascent_impl(const ModelView& view, const Vector& z, const Vector& g,
                         std::span<const double> eta_grid, const RadialProfile& profile) {
  AscentResult best;
  best.z = z;
  best.dhat = -std::numeric_limits<double>::infinity();
  for (double eta : eta_grid) {
    const Vector cand = z + eta * g;
    if (!cand.allFinite()) continue;
    const double d = path_integral_impl(view, cand, z, profile);
    if (d > best.dhat) {
      best.dhat = d;
      best.z = cand;
      best.eta = eta;
    }
  }
  if (best.dhat < 0.0) {
    best.z = z;
    best.dhat = 0.0;
    best.eta = 0.0;
    best.stalled = true;
  }
  return best;
}

}  // namespace detail

SeekConfig default_seek_config(const GradientModel& model) {
  SeekConfig config;
  const Matrix& centers = model.centers();
  const double extent = (centers.colwise().maxCoeff() - centers.colwise().minCoeff()).maxCoeff();
  config.tol_step = 1e-6 * (extent > 0.0 ? extent : 1.0);
  double min_s2 = std::numeric_limits<double>::infinity();
  for (int j = 0; j < model.dim(); ++j) min_s2 = std::min(min_s2, model.sigma(j) * model.sigma(j));
  const int count = 20;
  config.eta_grid.resize(count);
  for (int k = 0; k < count; ++k) {
    const double expo = -3.0 + 4.0 * k / (count - 1);  // 1e-3 .. 1e+1
    config.eta_grid[static_cast<std::size_t>(k)] = std::pow(10.0, expo) * min_s2;
  }
  return config;
}

ShiftResult shift_vector(const GradientModel& model, const Vector& z,
                         const RadialProfile* profile) {
  check_point(model, z);
  const RadialProfile& prof = resolve(profile);
  const detail::ModelView view(model);
  const Vector dist2 = view.squared_distances(z);
  ShiftResult out;
  out.m.resize(model.dim());
  out.f.resize(model.dim());
  for (int j = 0; j < model.dim(); ++j) {
    const detail::CoordinateEval e = view.eval_coordinate(j, dist2, prof);
    const double g = e.alpha_phi + (e.num - z[j] * e.f) / view.sigma2[j];
    out.f[j] = e.f;
    out.m[j] = view.sigma2[j] * g / e.f;
  }
  return out;
}

StepResult fixed_point_step(const GradientModel& model, const Vector& z, double f_guard_factor,
                            const RadialProfile* profile) {
  check_point(model, z);
  const RadialProfile& prof = resolve(profile);
  const detail::ModelView view(model);
  return detail::step_impl(view, z, view.guard_thresholds(f_guard_factor, prof), false, prof);
}

StepResult coordinate_wise_step(const GradientModel& model, const Vector& z, double f_guard_factor,
                                const RadialProfile* profile) {
  check_point(model, z);
  const RadialProfile& prof = resolve(profile);
  const detail::ModelView view(model);
  return detail::step_impl(view, z, view.guard_thresholds(f_guard_factor, prof), true, prof);
}

double path_integral(const GradientModel& model, const Vector& x, const Vector& y,
                     const RadialProfile* profile) {
  check_point(model, x);
  check_point(model, y);
  const detail::ModelView view(model);
  return detail::path_integral_impl(view, x, y, resolve(profile));
}

double path_integral_quadrature(const GradientModel& model, const Vector& x, const Vector& y,
                                int nodes, const RadialProfile* profile) {
  check_point(model, x);
  check_point(model, y);
  const detail::ModelView view(model);
  return detail::path_integral_quadrature_impl(view, x, y, nodes, resolve(profile));
}

AscentResult gradient_ascent_step(const GradientModel& model, const Vector& z,
                                  std::span<const double> eta_grid,
                                  const RadialProfile* profile) {
  check_point(model, z);
  if (eta_grid.empty()) throw std::invalid_argument("eta grid must be non-empty");
  const RadialProfile& prof = resolve(profile);
  const detail::ModelView view(model);
  return detail::ascent_impl(view, z, view.gradient(z, prof), eta_grid, prof);
}

int Trajectory::fallback_count() const {
  return static_cast<int>(std::count(fallback.begin(), fallback.end(), true));
}

namespace {

Trajectory seek_impl(const detail::ModelView& view, const Vector& start,
                     const SeekConfig& config) {
  const RadialProfile& prof = resolve(config.profile);
  const Vector guards = view.guard_thresholds(config.f_guard_factor, prof);
  Trajectory traj;
  traj.iterates.push_back(start);
  traj.status = SeekStatus::max_iter_reached;

  Vector z = start;
  for (int tau = 0; tau < config.max_iter; ++tau) {
    StepResult step = detail::step_impl(view, z, guards,
                                        config.rule == UpdateRule::coordinate_wise, prof);
    Vector cand = step.z;
    bool fell = false;
    double dhat = 0.0;
    if (step.guard || !cand.allFinite()) {
      const AscentResult asc =
          detail::ascent_impl(view, z, view.gradient(z, prof), config.eta_grid, prof);
      cand = asc.z;
      dhat = asc.dhat;
      fell = true;
    } else {
      dhat = detail::path_integral_impl(view, cand, z, prof);
      if (dhat < 0.0) {
        const AscentResult asc =
            detail::ascent_impl(view, z, view.gradient(z, prof), config.eta_grid, prof);
        cand = asc.z;
        dhat = asc.dhat;
        fell = true;
      }
    }
    if (!cand.allFinite()) {
      traj.status = SeekStatus::numeric_failure;
      return traj;
    }
    traj.iterates.push_back(cand);
    traj.dhat.push_back(dhat);
    traj.fallback.push_back(fell);
    const double move = (cand - z).norm();
    z = cand;
    if (move < config.tol_step || dhat < config.tol_dhat) {
      traj.status = SeekStatus::converged;
      break;
    }
  }
  return traj;
}

}  // namespace

Trajectory seek_mode(const GradientModel& model, const Vector& start, const SeekConfig& config) {
  check_point(model, start);
  if (config.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (config.eta_grid.empty()) throw std::invalid_argument("eta grid must be non-empty");
  const detail::ModelView view(model);
  return seek_impl(view, start, config);
}

double default_merge_radius(const GradientModel& model) {
  double max_sigma = 0.0;
  for (int j = 0; j < model.dim(); ++j) max_sigma = std::max(max_sigma, model.sigma(j));
  return max_sigma / 2.0;
}

std::pair<std::vector<int>, Matrix> merge_modes(const Matrix& endpoints,
                                                const std::vector<bool>& valid,
                                                double merge_radius) {
  const int n = static_cast<int>(endpoints.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (int i = 0; i < n; ++i) {
    if (!valid[static_cast<std::size_t>(i)]) continue;
    for (int k = i + 1; k < n; ++k) {
      if (!valid[static_cast<std::size_t>(k)]) continue;
      if ((endpoints.row(i) - endpoints.row(k)).norm() <= merge_radius) {
        const int ri = find(i);
        const int rk = find(k);
        if (ri != rk) parent[static_cast<std::size_t>(std::max(ri, rk))] = std::min(ri, rk);
      }
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (!valid[static_cast<std::size_t>(i)]) continue;
    const int root = find(i);
    auto it = std::find(roots.begin(), roots.end(), root);
    if (it == roots.end()) {
      labels[static_cast<std::size_t>(i)] = static_cast<int>(roots.size());
      roots.push_back(root);
    } else {
      labels[static_cast<std::size_t>(i)] = static_cast<int>(it - roots.begin());
    }
  }

  const int mode_count = static_cast<int>(roots.size());
  Matrix modes = Matrix::Zero(mode_count, endpoints.cols());
  std::vector<int> counts(static_cast<std::size_t>(mode_count), 0);
  for (int i = 0; i < n; ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    if (label < 0) continue;
    modes.row(label) += endpoints.row(i);
    counts[static_cast<std::size_t>(label)] += 1;
  }
  for (int m = 0; m < mode_count; ++m)
    modes.row(m) /= static_cast<double>(counts[static_cast<std::size_t>(m)]);
  return {std::move(labels), std::move(modes)};
}

ClusterResult cluster(const Matrix& samples, const GradientModel& model, const SeekConfig& config,
                      double merge_radius) {
  const int n = static_cast<int>(samples.rows());
  if (n < 1) throw std::invalid_argument("clustering needs at least one sample");
  if (!samples.allFinite()) throw std::invalid_argument("samples must be finite");
  if (config.eta_grid.empty()) throw std::invalid_argument("eta grid must be non-empty");

  const detail::ModelView view(model);
  Matrix endpoints = Matrix::Zero(n, samples.cols());
  std::vector<bool> valid(static_cast<std::size_t>(n), false);
  ClusterResult result;
  result.iterations.resize(static_cast<std::size_t>(n));
  result.fallback_counts.resize(static_cast<std::size_t>(n));
  if (config.record_trajectories) result.trajectories.reserve(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    Trajectory traj = seek_impl(view, samples.row(i).transpose(), config);
    result.iterations[static_cast<std::size_t>(i)] = traj.steps();
    result.fallback_counts[static_cast<std::size_t>(i)] = traj.fallback_count();
    if (traj.status != SeekStatus::numeric_failure) {
      endpoints.row(i) = traj.final_point().transpose();
      valid[static_cast<std::size_t>(i)] = true;
    }
    if (config.record_trajectories) result.trajectories.push_back(std::move(traj));
  }

  auto [labels, modes] = merge_modes(endpoints, valid, merge_radius);
  result.labels = std::move(labels);
  result.modes = std::move(modes);
  return result;
}

}  // namespace ridgecrest
