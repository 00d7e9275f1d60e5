#pragma once

// Internal evaluation caches for the seek loops. Not installed.

#include <cmath>

#include "ridgecrest/lsddr.hpp"
#include "ridgecrest/mode_seeking.hpp"

namespace ridgecrest::detail {

//! Per-coordinate pieces of the restricted-kernel gradient model at a point.
struct CoordinateEval {
  double f = 0.0;          // sum_i tilde_beta_i varphi_i
  double num = 0.0;        // sum_i tilde_beta_i c_i^(j) varphi_i
  double alpha_phi = 0.0;  // sum_i alpha_i phi_i
};

//! Flattened coefficients of a GradientModel for tight seek loops.
struct ModelView {
  const GradientModel* model;
  Matrix tilde_beta;  // b x D
  Matrix alpha;       // b x D, empty when simplified
  Vector inv2s2;      // 1 / (2 sigma_j^2)
  Vector sigma2;
  bool simplified;

  explicit ModelView(const GradientModel& m) : model(&m) {
    const int dim = m.dim();
    const Eigen::Index b = m.centers().rows();
    simplified = m.simplified();
    tilde_beta.resize(b, dim);
    if (!simplified) alpha.resize(b, dim);
    inv2s2.resize(dim);
    sigma2.resize(dim);
    for (int j = 0; j < dim; ++j) {
      tilde_beta.col(j) = m.component(j).tilde_beta();
      if (!simplified) alpha.col(j) = m.component(j).alpha();
      const double s = m.sigma(j);
      sigma2[j] = s * s;
      inv2s2[j] = 1.0 / (2.0 * s * s);
    }
  }

  int dim() const { return model->dim(); }
  const Matrix& centers() const { return model->centers(); }

  Vector squared_distances(const Vector& z) const {
    return (model->centers().rowwise() - z.transpose()).rowwise().squaredNorm();
  }

  CoordinateEval eval_coordinate(int j, const Vector& dist2, const RadialProfile& profile) const {
    CoordinateEval out;
    const Eigen::Index b = dist2.size();
    const auto& c = model->centers();
    for (Eigen::Index i = 0; i < b; ++i) {
      const double t = dist2[i] * inv2s2[j];
      const double vphi = profile.varphi(t);
      const double tb = tilde_beta(i, j);
      out.f += tb * vphi;
      out.num += tb * c(i, j) * vphi;
      if (!simplified) out.alpha_phi += alpha(i, j) * profile.phi(t);
    }
    return out;
  }

  double gradient_coordinate(int j, const Vector& z, const Vector& dist2,
                             const RadialProfile& profile) const {
    const CoordinateEval e = eval_coordinate(j, dist2, profile);
    return e.alpha_phi + (e.num - z[j] * e.f) / sigma2[j];
  }

  //! g-hat(z) and the f_j denominators in one pass.
  void gradient_and_f(const Vector& z, const RadialProfile& profile, Vector& g, Vector& f) const {
    const Vector dist2 = squared_distances(z);
    g.resize(dim());
    f.resize(dim());
    for (int j = 0; j < dim(); ++j) {
      const CoordinateEval e = eval_coordinate(j, dist2, profile);
      g[j] = e.alpha_phi + (e.num - z[j] * e.f) / sigma2[j];
      f[j] = e.f;
    }
  }

  Vector gradient(const Vector& z, const RadialProfile& profile) const {
    Vector g, f;
    gradient_and_f(z, profile, g, f);
    return g;
  }

  //! Guard threshold per coordinate: factor * max_i |tilde_beta_i varphi(0)|.
  Vector guard_thresholds(double factor, const RadialProfile& profile) const {
    const double vphi0 = std::abs(profile.varphi(0.0));
    Vector out(dim());
    for (int j = 0; j < dim(); ++j)
      out[j] = factor * tilde_beta.col(j).cwiseAbs().maxCoeff() * vphi0;
    return out;
  }
};

StepResult step_impl(const ModelView& view, const Vector& z, const Vector& guards,
                     bool coordinate_wise, const RadialProfile& profile);
double path_integral_impl(const ModelView& view, const Vector& x, const Vector& y,
                          const RadialProfile& profile);
double path_integral_quadrature_impl(const ModelView& view, const Vector& x, const Vector& y,
                                     int nodes, const RadialProfile& profile);
AscentResult ascent_impl(const ModelView& view, const Vector& z, const Vector& g,
                         std::span<const double> eta_grid, const RadialProfile& profile);

//! Flattened second-order components for the ridge loops.
struct HessianView {
  const HessianModel* model;
  // per component: alpha/beta coefficient vectors and bandwidth scalars
  std::vector<Vector> alpha;
  std::vector<Vector> beta;
  std::vector<double> inv2s2;
  std::vector<double> inv_s2;

  explicit HessianView(const HessianModel& m) : model(&m) {
    const std::size_t count = m.components().size();
    alpha.resize(count);
    beta.resize(count);
    inv2s2.resize(count);
    inv_s2.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      const RatioModel& c = m.components()[k];
      alpha[k] = c.alpha();
      beta[k] = c.beta();
      const double s2 = c.basis.sigma * c.basis.sigma;
      inv2s2[k] = 1.0 / (2.0 * s2);
      inv_s2[k] = 1.0 / s2;
    }
  }

  //! H-hat(z) assembled from the unordered-pair components.
  Matrix evaluate(const Vector& z) const;
};

}  // namespace ridgecrest::detail
