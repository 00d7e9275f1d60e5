#pragma once

#include <span>
#include <vector>

#include "ridgecrest/mode_seeking.hpp"
#include "ridgecrest/ridge_finding.hpp"

namespace ridgecrest {

//! Gaussian kernel density estimate with profile K(t) = exp(-t) and
//! normalizer Z = n (2 pi h^2)^{D/2}.
struct KdeModel {
  Matrix samples;
  double h = 1.0;

  int dim() const { return static_cast<int>(samples.cols()); }
  int count() const { return static_cast<int>(samples.rows()); }
  double normalizer() const;
};

double kde_density(const KdeModel& model, const Vector& x);
Vector kde_gradient(const KdeModel& model, const Vector& x);
Matrix kde_hessian(const KdeModel& model, const Vector& x);

//! Normal-reference bandwidth S_n (4/(D+4))^{1/(D+6)} n^{-1/(D+6)} with
//! S_n the pooled per-coordinate variance as printed; use_sqrt substitutes
//! sqrt(S_n) (the classical standard-deviation variant).
double nr_bandwidth(const Matrix& samples, bool use_sqrt = false);

//! Ten candidates 10^l * h_med, l in [-1.5, 0], h_med the pooled pairwise
//! coordinate-gap median.
std::vector<double> lscv_grid(const Matrix& samples);

//! Leave-one-out integrated-squared-error criterion; the quadratic term uses
//! the closed-form Gaussian convolution.
double lscv_criterion(const Matrix& samples, double h);

double lscv_bandwidth(const Matrix& samples, std::span<const double> grid);

//! Mean-shift fixed point: the G-weighted mean of the samples around z.
Vector ms_update(const KdeModel& model, const Vector& z);

struct MsConfig {
  double tol_step = 1e-6;
  int max_iter = 500;
  bool record_trajectories = false;
};

MsConfig default_ms_config(const KdeModel& model);
double default_ms_merge_radius(const KdeModel& model);  // h / 2

//! Mean-shift clustering; shares the merge/label logic with mode_seeking.
ClusterResult ms_cluster(const Matrix& samples, const KdeModel& model, const MsConfig& config,
                         double merge_radius);

//! KDE plug-in inverse local covariance
//! -grad grad p / p + (grad p)(grad p)^T / p^2; throws on density underflow.
Matrix kde_inverse_local_cov(const KdeModel& model, const Vector& x);

//! One SCMS move z + L_KDE(z) m_KDE(z); throws on density underflow.
Vector scms_update(const KdeModel& model, const Vector& z, int d);

//! SCMS driver over all start points; underflow abandons the point with a
//! numeric-failure status and the run continues.
RidgeResult scms_find_ridge(const Matrix& starts, const KdeModel& model, int d,
                            const MsConfig& config);

}  // namespace ridgecrest
