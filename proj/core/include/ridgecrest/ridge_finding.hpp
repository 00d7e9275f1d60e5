#pragma once

#include <span>
#include <vector>

#include "ridgecrest/mode_seeking.hpp"

namespace ridgecrest {

struct RidgeConfig {
  int d = 1;        // target ridge dimension, 0 <= d < D
  SeekConfig seek;  // termination and fallback knobs shared with mode seeking
};

enum class RidgeStatus { converged, max_iter_reached, numeric_failure };

//! Sigma-hat^{-1}(x) = -H-hat(x) + g-hat(x) g-hat(x)^T, symmetrized as
//! (A + A^T) / 2. The assembled Hessian uses each unordered-pair model for
//! both off-diagonal slots.
Matrix inverse_local_cov(const GradientModel& gradient, const HessianModel& hessian,
                         const Vector& x);

//! Orthogonal projector onto the span of the D-d eigenvectors with the
//! largest eigenvalues of the symmetric matrix m.
Matrix subspace_projector(const Matrix& m, int d);

struct ProjectorInfo {
  Matrix projector;
  double boundary_gap = 0.0;  // eigenvalue gap at the kept/dropped boundary
  bool degenerate = false;    // gap below 1e-10; basis still deterministic
};

ProjectorInfo subspace_projector_detailed(const Matrix& m, int d);

//! Eigenvectors of the `count` largest eigenvalues, columns in descending
//! eigenvalue order, first nonzero component of each made positive.
Matrix top_eigenvectors(const Matrix& m, int count);

//! One projected fixed-point move z + L-hat(z) m-hat(z).
StepResult lsdrf_step(const GradientModel& gradient, const HessianModel& hessian, const Vector& z,
                      int d, double f_guard_factor = 1e-8);

//! Projected ascent fallback z + eta L-hat(z) g-hat(z), eta maximizing D-hat.
AscentResult projected_gradient_step(const GradientModel& gradient, const HessianModel& hessian,
                                     const Vector& z, int d, std::span<const double> eta_grid);

//! Worst-case projector invariant violations across every iterate of a run.
struct ProjectorDiagnostics {
  double max_idempotency_error = 0.0;  // max-norm of L^2 - L
  double max_symmetry_error = 0.0;     // max-norm of L - L^T
  double max_trace_error = 0.0;        // |trace(L) - (D - d)|
  int degenerate_count = 0;

  void absorb(const Matrix& projector, int dim, int d, bool degenerate);
};

struct RidgeResult {
  Matrix points;  // one row per start point
  std::vector<RidgeStatus> statuses;
  std::vector<int> iterations;
  std::vector<double> residual_gradient_norms;  // ||L-hat g-hat|| at termination
  std::vector<bool> degenerate;                 // a degenerate spectrum was hit
  ProjectorDiagnostics diagnostics;
};

//! Drives every start point onto the d-dimensional ridge; per-point failures
//! are recorded and the run continues.
RidgeResult find_ridge(const Matrix& starts, const GradientModel& gradient,
                       const HessianModel& hessian, const RidgeConfig& config);

}  // namespace ridgecrest
