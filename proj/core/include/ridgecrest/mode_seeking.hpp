#pragma once

#include <span>
#include <vector>

#include "ridgecrest/lsddr.hpp"

namespace ridgecrest {

enum class UpdateRule { fixed_point, coordinate_wise };

enum class SeekStatus { converged, max_iter_reached, numeric_failure };

struct SeekConfig {
  UpdateRule rule = UpdateRule::fixed_point;
  double tol_step = 1e-6;   // absolute step-norm tolerance
  double tol_dhat = 1e-9;   // D-hat tolerance
  int max_iter = 500;
  double f_guard_factor = 1e-8;  // guard threshold factor on |f_j|
  std::vector<double> eta_grid;  // line-search grid for the ascent fallback
  bool record_trajectories = false;
  const RadialProfile* profile = nullptr;  // nullptr = Gaussian
};

//! Defaults derived from the fitted model: tol_step = 1e-6 times the center
//! bounding-box extent, 20 eta candidates log-spaced in [1e-3, 10] * min_j
//! sigma_j^2, everything else as the literals above.
SeekConfig default_seek_config(const GradientModel& model);

struct ShiftResult {
  Vector m;  // per-coordinate shift, sigma_j^2 g_j(z) / f_j(z)
  Vector f;  // denominators f_j(z) for guard checks
};

//! The seek displacement of one fixed-point step; f_j exactly zero yields a
//! non-finite coordinate, guarding is the caller's job.
ShiftResult shift_vector(const GradientModel& model, const Vector& z,
                         const RadialProfile* profile = nullptr);

struct StepResult {
  Vector z;            // proposed next point
  Vector f;            // f_j at the evaluation point of each coordinate
  bool guard = false;  // some |f_j| fell under the guard threshold
};

//! Weighted-mean fixed-point update; all coordinates evaluated at z.
StepResult fixed_point_step(const GradientModel& model, const Vector& z,
                            double f_guard_factor = 1e-8, const RadialProfile* profile = nullptr);

//! Coordinate-wise update: coordinate j is computed at the partially updated
//! point carrying the already-updated coordinates 1..j-1.
StepResult coordinate_wise_step(const GradientModel& model, const Vector& z,
                                double f_guard_factor = 1e-8,
                                const RadialProfile* profile = nullptr);

//! Estimate of log p(x) - log p(y) along the axis-aligned coordinate path.
//! Simplified models use the closed form; full models fall back to 32-node
//! Gauss-Legendre quadrature per coordinate segment.
double path_integral(const GradientModel& model, const Vector& x, const Vector& y,
                     const RadialProfile* profile = nullptr);

//! Quadrature route for any model (test oracle; also the full-model path).
double path_integral_quadrature(const GradientModel& model, const Vector& x, const Vector& y,
                                int nodes, const RadialProfile* profile = nullptr);

struct AscentResult {
  Vector z;
  double dhat = 0.0;
  double eta = 0.0;
  bool stalled = false;  // no candidate improved D-hat; z is unchanged
};

//! z + eta g-hat(z) with eta chosen from the grid to maximize the path
//! integral of the move; keeps z when every candidate decreases it.
AscentResult gradient_ascent_step(const GradientModel& model, const Vector& z,
                                  std::span<const double> eta_grid,
                                  const RadialProfile* profile = nullptr);

struct Trajectory {
  std::vector<Vector> iterates;  // z^0 ... z^T
  std::vector<double> dhat;      // one per accepted step
  std::vector<bool> fallback;    // whether the ascent fallback fired
  SeekStatus status = SeekStatus::converged;

  int steps() const { return static_cast<int>(iterates.size()) - 1; }
  const Vector& final_point() const { return iterates.back(); }
  int fallback_count() const;
};

//! Drives one start point to a mode: proposes a rule step, monitors D-hat and
//! the f_j guards, falls back to gradient ascent when needed, and terminates
//! when the step norm or D-hat drops below tolerance.
Trajectory seek_mode(const GradientModel& model, const Vector& start, const SeekConfig& config);

struct ClusterResult {
  std::vector<int> labels;  // -1 marks a failed trajectory
  Matrix modes;             // one row per detected mode (merged-group mean)
  std::vector<int> iterations;
  std::vector<int> fallback_counts;
  std::vector<Trajectory> trajectories;  // filled when config.record_trajectories
};

//! max_j sigma_j / 2.
double default_merge_radius(const GradientModel& model);

//! Seeks from every sample and merges converged points by single linkage at
//! merge_radius; failed trajectories get label -1.
ClusterResult cluster(const Matrix& samples, const GradientModel& model, const SeekConfig& config,
                      double merge_radius);

//! Single-linkage grouping of endpoint rows; returns per-row group labels in
//! first-occurrence order and the group means. Shared by the KDE baselines.
std::pair<std::vector<int>, Matrix> merge_modes(const Matrix& endpoints,
                                                const std::vector<bool>& valid,
                                                double merge_radius);

}  // namespace ridgecrest
