#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ridgecrest/kernels.hpp"
#include "ridgecrest/types.hpp"

namespace ridgecrest {

//! Basis of the representer-form ratio model. The full basis holds one
//! kernel-value feature and one kernel-derivative feature per center; the
//! simplified basis drops the kernel-value half (meaningful for |j| = 1,
//! where it is what the clustering and ridge pipelines use).
struct BasisSpec {
  Matrix centers;  // b x D, a subset of the sample set
  double sigma = 1.0;
  MultiIndex multi_index;
  bool simplified = false;

  int center_count() const { return static_cast<int>(centers.rows()); }
  int dim() const { return static_cast<int>(centers.cols()); }
  int feature_count() const { return simplified ? center_count() : 2 * center_count(); }
};

//! Feature rows psi_j(x) for each point (n x m, m = feature_count).
Matrix basis_features(const Matrix& points, const BasisSpec& basis);
//! Rows of the |j|-th partial of the features with respect to x.
Matrix basis_feature_partials(const Matrix& points, const BasisSpec& basis);

//! Empirical design quantities: G = (1/n) sum psi psi^T and
//! h = (1/n) sum d_j psi, both over the samples.
std::pair<Matrix, Vector> build_design(const Matrix& samples, const BasisSpec& basis);

//! A fitted density-derivative-ratio model r(x) = theta^T psi(x).
struct RatioModel {
  BasisSpec basis;
  Vector theta;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double solve_residual = 0.0;  // ||(G + lambda I) theta - (-1)^{|j|} h||
  bool fallback_solver = false;

  double evaluate(const Vector& x) const;
  //! First partial of the model along `axis` (supported for |j| <= 1 bases).
  double evaluate_partial(const Vector& x, int axis) const;

  //! Kernel-value coefficients (zeros when simplified).
  Vector alpha() const;
  //! Raw derivative-feature coefficients beta-hat.
  Vector beta() const;
  //! tilde-beta = -beta-hat, the weights used by the seek formulas.
  Vector tilde_beta() const;
};

//! Solves (G + lambda I) theta = (-1)^{|j|} h via an SPD factorization, with a
//! pivoted least-squares fallback when the factorization fails.
RatioModel fit_ratio(const Matrix& samples, const BasisSpec& basis, double lambda);

//! Hold-out objective: mean of r^2 - 2 (-1)^{|j|} d_j r over the hold-out set.
double cv_score(const RatioModel& model, const Matrix& holdout);

enum class CvAggregate { mean, median };

struct CvCell {
  double sigma = 0.0;
  double lambda = 0.0;
  double score = 0.0;
  std::vector<double> fold_scores;
};

struct ModelSelection {
  double sigma = 0.0;
  double lambda = 0.0;
  double score = 0.0;
  std::vector<CvCell> table;  // one cell per grid pair, sigma-major order
};

//! Fold index per sample: a seeded uniform shuffle cut into near-equal
//! blocks. This is exactly the split select_model uses.
std::vector<int> cv_fold_assignment(int n, int folds, std::uint64_t seed);

//! Centers used when scoring fold `fold`: a subsample of the training part
//! only, so hold-out points never appear in the basis.
Matrix cv_fold_centers(const Matrix& train, int count, std::uint64_t seed, int fold);

//! T-fold cross-validated grid search over (sigma, lambda). Folds come from
//! cv_fold_assignment and each fold re-subsamples `center_count` centers from
//! its training part; ties break toward larger lambda, then larger sigma.
ModelSelection select_model(const Matrix& samples, const MultiIndex& multi_index,
                            int center_count, std::span<const double> sigma_grid,
                            std::span<const double> lambda_grid, int folds, CvAggregate aggregate,
                            std::uint64_t seed, bool simplified);

//! Median over pairs i < k of |x_i^(coord) - x_k^(coord)|.
double median_pairwise_scale(const Matrix& samples, int coord);
//! Same but pooled over all coordinates (the MS bandwidth scale h_med).
double median_pairwise_scale_pooled(const Matrix& samples);

//! b distinct sample rows, uniform without replacement, deterministic in seed.
Matrix subsample_centers(const Matrix& samples, int b, std::uint64_t seed);

struct ParamGrid {
  std::vector<double> sigmas;
  std::vector<double> lambdas;
};

//! Ten sigma candidates c * sigma_med^(coord), c log-spaced in [0.5, 5], and
//! ten lambdas 10^m, m in [-3, 0].
ParamGrid clustering_grid(const Matrix& samples, int coord);
//! Ten sigma candidates 10^l * sigma_med^(coord), l in [-0.3, 1], lambdas
//! 10^m, m in [-4, 0].
ParamGrid ridge_gradient_grid(const Matrix& samples, int coord);
//! Hessian component grid: sigmas from 10^l * sqrt(sigma_med^(i) sigma_med^(j)).
ParamGrid ridge_hessian_grid(const Matrix& samples, int coord_i, int coord_j);

struct FitOptions {
  int folds = 5;
  CvAggregate aggregate = CvAggregate::mean;
  std::uint64_t seed = 0;
  bool simplified = false;
  //! Clamp tilde-beta to be non-negative after the solve (monotone
  //! hill-climbing conditions; off by default, the fit is unconstrained).
  bool nonneg_beta = false;
};

//! Bundle of per-coordinate first-order ratio models sharing one center set.
class GradientModel {
 public:
  GradientModel() = default;
  explicit GradientModel(std::vector<RatioModel> components);

  int dim() const { return static_cast<int>(components_.size()); }
  const Matrix& centers() const { return components_.front().basis.centers; }
  bool simplified() const { return components_.front().basis.simplified; }
  double sigma(int j) const { return components_[static_cast<std::size_t>(j)].basis.sigma; }
  const RatioModel& component(int j) const { return components_[static_cast<std::size_t>(j)]; }
  RatioModel& component(int j) { return components_[static_cast<std::size_t>(j)]; }
  const std::vector<RatioModel>& components() const { return components_; }

  //! g-hat(z), one ratio per coordinate.
  Vector evaluate(const Vector& z) const;

 private:
  std::vector<RatioModel> components_;
};

//! Bundle of second-order ratio models for unordered coordinate pairs,
//! stored for i <= j in lexicographic order.
class HessianModel {
 public:
  HessianModel() = default;
  HessianModel(int dim, std::vector<RatioModel> components);

  int dim() const { return dim_; }
  int component_count() const { return static_cast<int>(components_.size()); }
  const RatioModel& component(int i, int j) const;
  const std::vector<RatioModel>& components() const { return components_; }

  //! H-hat(z); off-diagonal entries reuse the unordered-pair model twice.
  Matrix evaluate(const Vector& z) const;

 private:
  int dim_ = 0;
  std::vector<RatioModel> components_;
};

//! Per-coordinate CV selection followed by a full-sample fit. `grids` holds
//! one grid per coordinate.
GradientModel fit_gradient(const Matrix& samples, const Matrix& centers,
                           const std::vector<ParamGrid>& grids, const FitOptions& options);
//! Pair grids are indexed like the components (i <= j, lexicographic). The
//! Hessian always uses the full basis and reuses the gradient's centers.
HessianModel fit_hessian(const Matrix& samples, const Matrix& centers,
                         const std::vector<ParamGrid>& grids, const FitOptions& options);

nlohmann::json to_json(const RatioModel& model);
RatioModel ratio_model_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GradientModel& model);
GradientModel gradient_model_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const HessianModel& model);
HessianModel hessian_model_from_json(const nlohmann::json& doc);

}  // namespace ridgecrest
