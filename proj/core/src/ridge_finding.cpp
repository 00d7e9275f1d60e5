#include "ridgecrest/ridge_finding.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "model_view.hpp"

namespace ridgecrest {

namespace detail {

Matrix HessianView::evaluate(const Vector& z) const {
  const int dim = model->dim();
  Matrix h(dim, dim);
  std::size_t k = 0;
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b, ++k) {
      const RatioModel& comp = model->components()[k];
      const Matrix& centers = comp.basis.centers;
      const bool simplified = comp.basis.simplified;
      double value = 0.0;
      for (Eigen::Index i = 0; i < centers.rows(); ++i) {
        const double d2 = (z - centers.row(i).transpose()).squaredNorm();
        const double kernel = std::exp(-d2 * inv2s2[k]);
        const double da = (z[a] - centers(i, a)) * inv_s2[k];
        double deriv_feature;
        if (a == b) {
          deriv_feature = (da * (z[a] - centers(i, a)) - 1.0) * inv_s2[k] * kernel;
        } else {
          deriv_feature = da * (z[b] - centers(i, b)) * inv_s2[k] * kernel;
        }
        value += beta[k][i] * deriv_feature;
        if (!simplified) value += alpha[k][i] * kernel;
      }
      h(a, b) = value;
      h(b, a) = value;
    }
  }
  return h;
}

}  // namespace detail

namespace {

constexpr double kDegenerateGap = 1e-10;

Matrix symmetrized_inverse_cov(const Vector& g, const Matrix& hessian) {
  Matrix a = -hessian;
  a.selfadjointView<Eigen::Lower>().rankUpdate(g, 1.0);
  Matrix full = a.selfadjointView<Eigen::Lower>();
  return 0.5 * (full + full.transpose());
}

ProjectorInfo projector_from_eigen(const Eigen::SelfAdjointEigenSolver<Matrix>& eig, int d) {
  const int dim = static_cast<int>(eig.eigenvalues().size());
  ProjectorInfo info;
  const int kept = dim - d;
  const Matrix v = eig.eigenvectors().rightCols(kept);
  Matrix lower = Matrix::Zero(dim, dim);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0);
  info.projector = lower.selfadjointView<Eigen::Lower>();
  if (d >= 1) {
    info.boundary_gap = eig.eigenvalues()[d] - eig.eigenvalues()[d - 1];
    info.degenerate = info.boundary_gap < kDegenerateGap;
  } else {
    info.boundary_gap = std::numeric_limits<double>::infinity();
  }
  return info;
}

void validate_d(int d, int dim) {
  if (d < 0 || d >= dim) throw std::invalid_argument("ridge dimension must satisfy 0 <= d < D");
}

}  // namespace

Matrix inverse_local_cov(const GradientModel& gradient, const HessianModel& hessian,
                         const Vector& x) {
  if (gradient.dim() != hessian.dim())
    throw std::invalid_argument("gradient and hessian models disagree on dimension");
  if (x.size() != gradient.dim()) throw std::invalid_argument("point dimension mismatch");
  const Vector g = gradient.evaluate(x);
  const Matrix h = hessian.evaluate(x);
  const Matrix result = symmetrized_inverse_cov(g, h);
  if (!result.allFinite())
    throw std::runtime_error("inverse local covariance has non-finite entries");
  return result;
}

ProjectorInfo subspace_projector_detailed(const Matrix& m, int d) {
  if (m.rows() != m.cols()) throw std::invalid_argument("projector input must be square");
  if (!m.isApprox(m.transpose(), 1e-10))
    throw std::invalid_argument("projector input must be symmetric");
  validate_d(d, static_cast<int>(m.rows()));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return projector_from_eigen(eig, d);
}

Matrix subspace_projector(const Matrix& m, int d) {
  return subspace_projector_detailed(m, d).projector;
}

Matrix top_eigenvectors(const Matrix& m, int count) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvector input must be square");
  if (count < 1 || count > m.rows()) throw std::invalid_argument("eigenvector count out of range");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Matrix v(m.rows(), count);
  for (int k = 0; k < count; ++k) {
    Vector col = eig.eigenvectors().col(m.rows() - 1 - k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) > 1e-12) {
        if (col[i] < 0.0) col = -col;
        break;
      }
    }
    v.col(k) = col;
  }
  return v;
}

void ProjectorDiagnostics::absorb(const Matrix& projector, int dim, int d, bool deg) {
  const Matrix sq = projector * projector;
  max_idempotency_error = std::max(max_idempotency_error, (sq - projector).cwiseAbs().maxCoeff());
  max_symmetry_error =
      std::max(max_symmetry_error, (projector - projector.transpose()).cwiseAbs().maxCoeff());
  max_trace_error =
      std::max(max_trace_error, std::abs(projector.trace() - static_cast<double>(dim - d)));
  if (deg) degenerate_count += 1;
}

StepResult lsdrf_step(const GradientModel& gradient, const HessianModel& hessian, const Vector& z,
                      int d, double f_guard_factor) {
  validate_d(d, gradient.dim());
  const detail::ModelView view(gradient);
  const detail::HessianView hview(hessian);
  const RadialProfile& prof = gaussian_profile();
  const Vector guards = view.guard_thresholds(f_guard_factor, prof);

  Vector g, f;
  view.gradient_and_f(z, prof, g, f);
  const Matrix sigma_inv = symmetrized_inverse_cov(g, hview.evaluate(z));
  const Matrix projector = subspace_projector(sigma_inv, d);

  StepResult out;
  out.f = f;
  Vector shift(view.dim());
  for (int j = 0; j < view.dim(); ++j) {
    shift[j] = view.sigma2[j] * g[j] / f[j];
    if (std::abs(f[j]) <= guards[j]) out.guard = true;
  }
  out.z = z + projector * shift;
  return out;
}

AscentResult projected_gradient_step(const GradientModel& gradient, const HessianModel& hessian,
                                     const Vector& z, int d, std::span<const double> eta_grid) {
  validate_d(d, gradient.dim());
  if (eta_grid.empty()) throw std::invalid_argument("eta grid must be non-empty");
  const detail::ModelView view(gradient);
  const detail::HessianView hview(hessian);
  const RadialProfile& prof = gaussian_profile();
  const Vector g = view.gradient(z, prof);
  const Matrix sigma_inv = symmetrized_inverse_cov(g, hview.evaluate(z));
  const Matrix projector = subspace_projector(sigma_inv, d);
  return detail::ascent_impl(view, z, projector * g, eta_grid, prof);
}

RidgeResult find_ridge(const Matrix& starts, const GradientModel& gradient,
                       const HessianModel& hessian, const RidgeConfig& config) {
  validate_d(config.d, gradient.dim());
  if (gradient.dim() != hessian.dim())
    throw std::invalid_argument("gradient and hessian models disagree on dimension");
  if (starts.cols() != gradient.dim()) throw std::invalid_argument("start dimension mismatch");
  if (config.seek.eta_grid.empty()) throw std::invalid_argument("eta grid must be non-empty");

  const detail::ModelView view(gradient);
  const detail::HessianView hview(hessian);
  const RadialProfile& prof = gaussian_profile();
  const Vector guards = view.guard_thresholds(config.seek.f_guard_factor, prof);
  const int n = static_cast<int>(starts.rows());
  const int dim = gradient.dim();

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
    Vector g, f;
    Matrix projector;
    for (; tau < config.seek.max_iter; ++tau) {
      view.gradient_and_f(z, prof, g, f);
      Matrix sigma_inv = symmetrized_inverse_cov(g, hview.evaluate(z));
      if (!sigma_inv.allFinite()) {
        status = RidgeStatus::numeric_failure;
        break;
      }
      ProjectorInfo info = subspace_projector_detailed(sigma_inv, config.d);
      projector = std::move(info.projector);
      saw_degenerate = saw_degenerate || info.degenerate;
      result.diagnostics.absorb(projector, dim, config.d, info.degenerate);

      Vector shift(dim);
      bool guard = false;
      for (int j = 0; j < dim; ++j) {
        shift[j] = view.sigma2[j] * g[j] / f[j];
        if (std::abs(f[j]) <= guards[j]) guard = true;
      }
      Vector cand = z + projector * shift;
      double dhat = 0.0;
      if (guard || !cand.allFinite()) {
        const AscentResult asc =
            detail::ascent_impl(view, z, projector * g, config.seek.eta_grid, prof);
        cand = asc.z;
        dhat = asc.dhat;
      } else {
        dhat = detail::path_integral_impl(view, cand, z, prof);
        if (dhat < 0.0) {
          const AscentResult asc =
              detail::ascent_impl(view, z, projector * g, config.seek.eta_grid, prof);
          cand = asc.z;
          dhat = asc.dhat;
        }
      }
      if (!cand.allFinite()) {
        status = RidgeStatus::numeric_failure;
        break;
      }
      const double move = (cand - z).norm();
      z = cand;
      if (move < config.seek.tol_step || dhat < config.seek.tol_dhat) {
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
      view.gradient_and_f(z, prof, g, f);
      const Matrix sigma_inv = symmetrized_inverse_cov(g, hview.evaluate(z));
      if (sigma_inv.allFinite()) {
        const Matrix final_projector = subspace_projector(sigma_inv, config.d);
        result.residual_gradient_norms[static_cast<std::size_t>(k)] =
            (final_projector * g).norm();
      }
    }
  }
  return result;
}

}  // namespace ridgecrest
