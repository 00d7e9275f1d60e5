#include "ridgecrest/lsddr.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ridgecrest/rng.hpp"
#include "ridgecrest/version.hpp"

namespace ridgecrest {

namespace {

constexpr double kResidualTol = 1e-8;

Matrix squared_distances(const Matrix& points, const Matrix& centers) {
  Matrix s = -2.0 * points * centers.transpose();
  s.colwise() += points.rowwise().squaredNorm();
  s.rowwise() += centers.rowwise().squaredNorm().transpose();
  return s.cwiseMax(0.0);
}

//! Elementwise product over coordinates of the per-dimension Hermite factors
//! for mixed orders (jx_d, jc_d); multiplied into the kernel matrix it gives
//! the mixed partial of the kernel for every (point, center) pair.
Matrix partial_factors(const Matrix& points, const Matrix& centers, double sigma,
                       const MultiIndex& jx, const MultiIndex& jc) {
  const Eigen::Index n = points.rows();
  const Eigen::Index b = centers.rows();
  Matrix factors = Matrix::Ones(n, b);
  for (int d = 0; d < jx.dim(); ++d) {
    const int m = jx[d];
    const int l = jc[d];
    if (m == 0 && l == 0) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xd = points(i, d);
      for (Eigen::Index k = 0; k < b; ++k) {
        factors(i, k) *= detail::mixed_partial_factor(m, l, (xd - centers(k, d)) / sigma, sigma);
      }
    }
  }
  return factors;
}

void validate_basis(const Matrix& points, const BasisSpec& basis) {
  if (basis.sigma <= 0.0) throw std::invalid_argument("basis bandwidth must be positive");
  if (basis.center_count() < 1) throw std::invalid_argument("basis needs at least one center");
  if (points.cols() != basis.centers.cols())
    throw std::invalid_argument("point dimension does not match basis centers");
  if (basis.multi_index.dim() != basis.dim())
    throw std::invalid_argument("multi-index dimension does not match basis");
  const int order = basis.multi_index.order();
  if (order < 1 || order > 2)
    throw std::invalid_argument("ratio bases support |j| in {1, 2}");
  if (basis.simplified && order != 1)
    throw std::invalid_argument("simplified bases are only meaningful for |j| = 1");
}

double median_of(std::vector<double>& values) {
  const std::size_t n = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  double hi = *mid;
  double lo = *std::max_element(values.begin(), mid);
  return 0.5 * (lo + hi);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (int k = 0; k < count; ++k)
    out[static_cast<std::size_t>(k)] = std::pow(10.0, llo + (lhi - llo) * k / (count - 1));
  return out;
}

int pair_component_index(int dim, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (2 * dim - i - 1) / 2 + j;
}

void project_nonneg_tilde_beta(RatioModel& model) {
  // tilde-beta = -beta-hat >= 0 means the beta coefficients are clamped to
  // be non-positive.
  const int b = model.basis.center_count();
  const int offset = model.basis.simplified ? 0 : b;
  for (int i = 0; i < b; ++i) {
    double& v = model.theta[offset + i];
    v = std::min(v, 0.0);
  }
}

}  // namespace

Matrix basis_features(const Matrix& points, const BasisSpec& basis) {
  validate_basis(points, basis);
  const double s2 = 2.0 * basis.sigma * basis.sigma;
  Matrix kernel = (-squared_distances(points, basis.centers) / s2).array().exp().matrix();
  const MultiIndex zero = MultiIndex::zero(basis.dim());
  Matrix deriv =
      partial_factors(points, basis.centers, basis.sigma, zero, basis.multi_index).cwiseProduct(
          kernel);
  if (basis.simplified) return deriv;
  Matrix features(points.rows(), basis.feature_count());
  features << kernel, deriv;
  return features;
}

Matrix basis_feature_partials(const Matrix& points, const BasisSpec& basis) {
  validate_basis(points, basis);
  const double s2 = 2.0 * basis.sigma * basis.sigma;
  Matrix kernel = (-squared_distances(points, basis.centers) / s2).array().exp().matrix();
  const MultiIndex zero = MultiIndex::zero(basis.dim());
  Matrix dderiv = partial_factors(points, basis.centers, basis.sigma, basis.multi_index,
                                  basis.multi_index)
                      .cwiseProduct(kernel);
  if (basis.simplified) return dderiv;
  Matrix dvalue =
      partial_factors(points, basis.centers, basis.sigma, basis.multi_index, zero).cwiseProduct(
          kernel);
  Matrix out(points.rows(), basis.feature_count());
  out << dvalue, dderiv;
  return out;
}

std::pair<Matrix, Vector> build_design(const Matrix& samples, const BasisSpec& basis) {
  if (samples.rows() < 1) throw std::invalid_argument("design needs at least one sample");
  const Matrix psi = basis_features(samples, basis);
  const Matrix dpsi = basis_feature_partials(samples, basis);
  const int m = basis.feature_count();
  Matrix lower = Matrix::Zero(m, m);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(psi.transpose(),
                                                   1.0 / static_cast<double>(samples.rows()));
  Matrix gram = lower.selfadjointView<Eigen::Lower>();
  Vector h = dpsi.colwise().mean();
  return {std::move(gram), std::move(h)};
}

double RatioModel::evaluate(const Vector& x) const {
  if (x.size() != basis.dim()) throw std::invalid_argument("point dimension mismatch");
  return (basis_features(x.transpose(), basis) * theta)(0);
}

double RatioModel::evaluate_partial(const Vector& x, int axis) const {
  if (x.size() != basis.dim()) throw std::invalid_argument("point dimension mismatch");
  const MultiIndex di = MultiIndex::unit(basis.dim(), axis);
  const double s2 = 2.0 * basis.sigma * basis.sigma;
  const Matrix point = x.transpose();
  Matrix kernel = (-squared_distances(point, basis.centers) / s2).array().exp().matrix();
  Matrix dderiv =
      partial_factors(point, basis.centers, basis.sigma, di, basis.multi_index).cwiseProduct(
          kernel);
  if (basis.simplified) return (dderiv * theta)(0);
  Matrix dvalue = partial_factors(point, basis.centers, basis.sigma, di,
                                  MultiIndex::zero(basis.dim()))
                      .cwiseProduct(kernel);
  Matrix row(1, basis.feature_count());
  row << dvalue, dderiv;
  return (row * theta)(0);
}

Vector RatioModel::alpha() const {
  if (basis.simplified) return Vector::Zero(basis.center_count());
  return theta.head(basis.center_count());
}

Vector RatioModel::beta() const {
  return basis.simplified ? theta : Vector(theta.tail(basis.center_count()));
}

Vector RatioModel::tilde_beta() const { return -beta(); }

RatioModel fit_ratio(const Matrix& samples, const BasisSpec& basis, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("regularization must be positive");
  auto [gram, h] = build_design(samples, basis);
  const double sign = basis.multi_index.order() % 2 == 0 ? 1.0 : -1.0;
  const int m = basis.feature_count();
  Matrix system = gram + lambda * Matrix::Identity(m, m);

  RatioModel model;
  model.basis = basis;
  model.lambda = lambda;

  const double tol = kResidualTol * (1.0 + h.norm());
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() == Eigen::Success) {
    model.theta = sign * llt.solve(h);
    model.solve_residual = (system * model.theta - sign * h).norm();
    if (model.solve_residual <= tol) return model;
  }
  // Pivoted least-squares fallback for ill-conditioned systems.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(system);
  model.theta = sign * cod.solve(h);
  model.fallback_solver = true;
  model.solve_residual = (system * model.theta - sign * h).norm();
  if (model.solve_residual > tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(system, Eigen::EigenvaluesOnly);
    const double cond = eig.eigenvalues().maxCoeff() / std::max(eig.eigenvalues().minCoeff(), 1e-300);
    throw std::runtime_error("ratio solve failed: residual " + std::to_string(model.solve_residual) +
                             " exceeds tolerance, condition estimate " + std::to_string(cond));
  }
  return model;
}

double cv_score(const RatioModel& model, const Matrix& holdout) {
  if (holdout.rows() < 1) throw std::invalid_argument("hold-out set must be non-empty");
  const Vector values = basis_features(holdout, model.basis) * model.theta;
  const Vector partials = basis_feature_partials(holdout, model.basis) * model.theta;
  const double sign = model.basis.multi_index.order() % 2 == 0 ? 1.0 : -1.0;
  return values.squaredNorm() / static_cast<double>(holdout.rows()) - 2.0 * sign * partials.mean();
}

std::vector<int> cv_fold_assignment(int n, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (n < folds) throw std::invalid_argument("fewer samples than folds");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  CountedRng rng(seed, /*stream=*/0x666f6c64);  // fold-split stream
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n));
  for (int t = 0; t < folds; ++t) {
    const int lo = t * n / folds;
    const int hi = (t + 1) * n / folds;
    for (int i = lo; i < hi; ++i) assignment[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = t;
  }
  return assignment;
}

Matrix cv_fold_centers(const Matrix& train, int count, std::uint64_t seed, int fold) {
  const int usable = std::min(count, static_cast<int>(train.rows()));
  return subsample_centers(train, usable, derive_seed(seed, 0xF01D + static_cast<std::uint64_t>(fold)));
}

ModelSelection select_model(const Matrix& samples, const MultiIndex& multi_index,
                            int center_count, std::span<const double> sigma_grid,
                            std::span<const double> lambda_grid, int folds, CvAggregate aggregate,
                            std::uint64_t seed, bool simplified) {
  const int n = static_cast<int>(samples.rows());
  if (center_count < 1) throw std::invalid_argument("center count must be positive");
  if (sigma_grid.empty() || lambda_grid.empty())
    throw std::invalid_argument("parameter grids must be non-empty");
  const std::vector<int> fold_of = cv_fold_assignment(n, folds, seed);

  const double sign = multi_index.order() % 2 == 0 ? 1.0 : -1.0;
  const std::size_t cells = sigma_grid.size() * lambda_grid.size();
  ModelSelection result;
  result.table.resize(cells);
  for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
      CvCell& cell = result.table[si * lambda_grid.size() + li];
      cell.sigma = sigma_grid[si];
      cell.lambda = lambda_grid[li];
      cell.fold_scores.assign(static_cast<std::size_t>(folds), 0.0);
    }
  }

  for (int t = 0; t < folds; ++t) {
    int n_hold = 0;
    for (int i = 0; i < n; ++i)
      if (fold_of[static_cast<std::size_t>(i)] == t) ++n_hold;
    const int n_train = n - n_hold;
    Matrix train(n_train, samples.cols());
    Matrix hold(n_hold, samples.cols());
    int it = 0;
    int ih = 0;
    for (int i = 0; i < n; ++i) {
      if (fold_of[static_cast<std::size_t>(i)] == t)
        hold.row(ih++) = samples.row(i);
      else
        train.row(it++) = samples.row(i);
    }

    const Matrix fold_centers = cv_fold_centers(train, center_count, seed, t);
    for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
      BasisSpec basis{fold_centers, sigma_grid[si], multi_index, simplified};
      auto [gram, h] = build_design(train, basis);
      const Matrix psi_hold = basis_features(hold, basis);
      const Matrix dpsi_hold = basis_feature_partials(hold, basis);
      const int m = basis.feature_count();

      // one eigendecomposition serves the whole lambda sweep; scale first so
      // the iteration converges on badly conditioned grams
      const double scale = std::max(gram.cwiseAbs().maxCoeff(), 1e-300);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(gram / scale);
      const bool eig_ok = eig.info() == Eigen::Success;
      Vector evals;
      Vector qth;
      if (eig_ok) {
        evals = scale * eig.eigenvalues().cwiseMax(0.0);
        qth = eig.eigenvectors().transpose() * h;
      }
      for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
        Vector theta;
        if (eig_ok) {
          const Vector scaled = (qth.array() / (evals.array() + lambda_grid[li])).matrix();
          theta = sign * (eig.eigenvectors() * scaled);
        } else {
          // per-lambda factorization fallback
          const Matrix system = gram + lambda_grid[li] * Matrix::Identity(m, m);
          theta = sign * Eigen::LLT<Matrix>(system).solve(h);
        }
        const Vector values = psi_hold * theta;
        const Vector partials = dpsi_hold * theta;
        const double score =
            values.squaredNorm() / static_cast<double>(n_hold) - 2.0 * sign * partials.mean();
        result.table[si * lambda_grid.size() + li].fold_scores[static_cast<std::size_t>(t)] =
            score;
      }
    }
  }

  bool first = true;
  for (CvCell& cell : result.table) {
    if (aggregate == CvAggregate::mean) {
      cell.score = std::accumulate(cell.fold_scores.begin(), cell.fold_scores.end(), 0.0) /
                   static_cast<double>(folds);
    } else {
      std::vector<double> copy = cell.fold_scores;
      cell.score = median_of(copy);
    }
    const bool better =
        first || cell.score < result.score ||
        (cell.score == result.score &&
         (cell.lambda > result.lambda ||
          (cell.lambda == result.lambda && cell.sigma > result.sigma)));
    if (better) {
      result.sigma = cell.sigma;
      result.lambda = cell.lambda;
      result.score = cell.score;
      first = false;
    }
  }
  return result;
}

double median_pairwise_scale(const Matrix& samples, int coord) {
  const int n = static_cast<int>(samples.rows());
  if (n < 2) throw std::invalid_argument("pairwise scale needs at least two samples");
  if (coord < 0 || coord >= samples.cols()) throw std::invalid_argument("coordinate out of range");
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) gaps.push_back(std::abs(samples(i, coord) - samples(k, coord)));
  return median_of(gaps);
}

double median_pairwise_scale_pooled(const Matrix& samples) {
  const int n = static_cast<int>(samples.rows());
  if (n < 2) throw std::invalid_argument("pairwise scale needs at least two samples");
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 * static_cast<std::size_t>(samples.cols()));
  for (int j = 0; j < samples.cols(); ++j)
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) gaps.push_back(std::abs(samples(i, j) - samples(k, j)));
  return median_of(gaps);
}

Matrix subsample_centers(const Matrix& samples, int b, std::uint64_t seed) {
  const int n = static_cast<int>(samples.rows());
  if (b < 1 || b > n) throw std::invalid_argument("center count must satisfy 1 <= b <= n");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  CountedRng rng(seed, /*stream=*/0x63747273);  // center-subsample stream
  for (int i = 0; i < b; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  Matrix centers(b, samples.cols());
  for (int i = 0; i < b; ++i) centers.row(i) = samples.row(idx[static_cast<std::size_t>(i)]);
  return centers;
}

ParamGrid clustering_grid(const Matrix& samples, int coord) {
  const double med = median_pairwise_scale(samples, coord);
  ParamGrid grid;
  for (double c : log_spaced(0.5, 5.0, 10)) grid.sigmas.push_back(c * med);
  grid.lambdas = log_spaced(1e-3, 1.0, 10);
  return grid;
}

ParamGrid ridge_gradient_grid(const Matrix& samples, int coord) {
  const double med = median_pairwise_scale(samples, coord);
  ParamGrid grid;
  for (double c : log_spaced(std::pow(10.0, -0.3), 10.0, 10)) grid.sigmas.push_back(c * med);
  grid.lambdas = log_spaced(1e-4, 1.0, 10);
  return grid;
}

ParamGrid ridge_hessian_grid(const Matrix& samples, int coord_i, int coord_j) {
  const double med = std::sqrt(median_pairwise_scale(samples, coord_i) *
                               median_pairwise_scale(samples, coord_j));
  ParamGrid grid;
  for (double c : log_spaced(std::pow(10.0, -0.3), 10.0, 10)) grid.sigmas.push_back(c * med);
  grid.lambdas = log_spaced(1e-4, 1.0, 10);
  return grid;
}

GradientModel::GradientModel(std::vector<RatioModel> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("gradient model needs components");
  const int dim = components_.front().basis.dim();
  if (static_cast<int>(components_.size()) != dim)
    throw std::invalid_argument("gradient model needs one component per coordinate");
  for (int j = 0; j < dim; ++j) {
    const RatioModel& c = components_[static_cast<std::size_t>(j)];
    if (!(c.basis.multi_index == MultiIndex::unit(dim, j)))
      throw std::invalid_argument("gradient component order mismatch");
    if (c.basis.simplified != components_.front().basis.simplified)
      throw std::invalid_argument("gradient components disagree on basis form");
    const Matrix& ref = components_.front().basis.centers;
    if (c.basis.centers.rows() != ref.rows() || c.basis.centers.cols() != ref.cols() ||
        !(c.basis.centers.array() == ref.array()).all())
      throw std::invalid_argument("gradient components must share the center set");
  }
}

Vector GradientModel::evaluate(const Vector& z) const {
  Vector g(dim());
  for (int j = 0; j < dim(); ++j) g[j] = components_[static_cast<std::size_t>(j)].evaluate(z);
  return g;
}

HessianModel::HessianModel(int dim, std::vector<RatioModel> components)
    : dim_(dim), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != dim * (dim + 1) / 2)
    throw std::invalid_argument("hessian model needs D(D+1)/2 components");
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const RatioModel& c = components_[static_cast<std::size_t>(pair_component_index(dim, i, j))];
      if (!(c.basis.multi_index == MultiIndex::pair(dim, i, j)))
        throw std::invalid_argument("hessian component order mismatch");
    }
  }
}

const RatioModel& HessianModel::component(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
    throw std::invalid_argument("hessian component index out of range");
  return components_[static_cast<std::size_t>(pair_component_index(dim_, i, j))];
}

Matrix HessianModel::evaluate(const Vector& z) const {
  Matrix h(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const double value = component(i, j).evaluate(z);
      h(i, j) = value;
      h(j, i) = value;
    }
  }
  return h;
}

GradientModel fit_gradient(const Matrix& samples, const Matrix& centers,
                           const std::vector<ParamGrid>& grids, const FitOptions& options) {
  const int dim = static_cast<int>(samples.cols());
  if (static_cast<int>(grids.size()) != dim)
    throw std::invalid_argument("need one parameter grid per coordinate");
  std::vector<RatioModel> components;
  components.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    try {
      const ParamGrid& grid = grids[static_cast<std::size_t>(j)];
      const MultiIndex mi = MultiIndex::unit(dim, j);
      const ModelSelection sel = select_model(
          samples, mi, static_cast<int>(centers.rows()), grid.sigmas, grid.lambdas, options.folds,
          options.aggregate, derive_seed(options.seed, static_cast<std::uint64_t>(j)),
          options.simplified);
      BasisSpec basis{centers, sel.sigma, mi, options.simplified};
      RatioModel model = fit_ratio(samples, basis, sel.lambda);
      model.seed = options.seed;
      if (options.nonneg_beta) project_nonneg_tilde_beta(model);
      components.push_back(std::move(model));
    } catch (const std::exception& e) {
      throw std::runtime_error("gradient component " + std::to_string(j) + ": " + e.what());
    }
  }
  return GradientModel(std::move(components));
}

HessianModel fit_hessian(const Matrix& samples, const Matrix& centers,
                         const std::vector<ParamGrid>& grids, const FitOptions& options) {
  const int dim = static_cast<int>(samples.cols());
  if (static_cast<int>(grids.size()) != dim * (dim + 1) / 2)
    throw std::invalid_argument("need one parameter grid per unordered coordinate pair");
  std::vector<RatioModel> components;
  components.reserve(grids.size());
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const int index = pair_component_index(dim, i, j);
      try {
        const ParamGrid& grid = grids[static_cast<std::size_t>(index)];
        const MultiIndex mi = MultiIndex::pair(dim, i, j);
        const ModelSelection sel = select_model(
            samples, mi, static_cast<int>(centers.rows()), grid.sigmas, grid.lambdas,
            options.folds, options.aggregate,
            derive_seed(options.seed, 0x1000 + static_cast<std::uint64_t>(index)),
            /*simplified=*/false);
        BasisSpec basis{centers, sel.sigma, mi, /*simplified=*/false};
        RatioModel model = fit_ratio(samples, basis, sel.lambda);
        model.seed = options.seed;
        components.push_back(std::move(model));
      } catch (const std::exception& e) {
        throw std::runtime_error("hessian component (" + std::to_string(i) + "," +
                                 std::to_string(j) + "): " + e.what());
      }
    }
  }
  return HessianModel(dim, std::move(components));
}

nlohmann::json to_json(const RatioModel& model) {
  nlohmann::json doc;
  doc["multi_index"] = model.basis.multi_index.entries();
  doc["sigma"] = model.basis.sigma;
  doc["lambda"] = model.lambda;
  doc["dim"] = model.basis.dim();
  doc["center_count"] = model.basis.center_count();
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(model.basis.centers.size()));
  for (int i = 0; i < model.basis.centers.rows(); ++i)
    for (int j = 0; j < model.basis.centers.cols(); ++j) centers.push_back(model.basis.centers(i, j));
  doc["centers"] = centers;
  doc["theta"] = std::vector<double>(model.theta.data(), model.theta.data() + model.theta.size());
  doc["simplified"] = model.basis.simplified;
  doc["seed"] = model.seed;
  doc["solve_residual"] = model.solve_residual;
  doc["fallback_solver"] = model.fallback_solver;
  return doc;
}

RatioModel ratio_model_from_json(const nlohmann::json& doc) {
  const int dim = doc.at("dim").get<int>();
  const int b = doc.at("center_count").get<int>();
  const auto centers_flat = doc.at("centers").get<std::vector<double>>();
  if (static_cast<int>(centers_flat.size()) != b * dim)
    throw std::invalid_argument("center payload size mismatch");
  RatioModel model;
  model.basis.centers = Matrix(b, dim);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < dim; ++j)
      model.basis.centers(i, j) = centers_flat[static_cast<std::size_t>(i * dim + j)];
  model.basis.sigma = doc.at("sigma").get<double>();
  model.basis.multi_index = MultiIndex(doc.at("multi_index").get<std::vector<int>>());
  model.basis.simplified = doc.at("simplified").get<bool>();
  const auto theta = doc.at("theta").get<std::vector<double>>();
  if (static_cast<int>(theta.size()) != model.basis.feature_count())
    throw std::invalid_argument("theta payload size mismatch");
  model.theta = Eigen::Map<const Vector>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  model.lambda = doc.at("lambda").get<double>();
  model.seed = doc.value("seed", std::uint64_t{0});
  model.solve_residual = doc.value("solve_residual", 0.0);
  model.fallback_solver = doc.value("fallback_solver", false);
  return model;
}

namespace {
nlohmann::json bundle_header(const char* kind, int dim) {
  nlohmann::json doc;
  doc["kind"] = kind;
  doc["dim"] = dim;
  doc["rng"] = CountedRng::algorithm();
  doc["toolkit_version"] = kVersion;
  return doc;
}
}  // namespace

nlohmann::json to_json(const GradientModel& model) {
  nlohmann::json doc = bundle_header("gradient", model.dim());
  nlohmann::json components = nlohmann::json::array();
  for (const RatioModel& c : model.components()) components.push_back(to_json(c));
  doc["components"] = std::move(components);
  return doc;
}

GradientModel gradient_model_from_json(const nlohmann::json& doc) {
  if (doc.at("kind").get<std::string>() != "gradient")
    throw std::invalid_argument("not a gradient model document");
  std::vector<RatioModel> components;
  for (const auto& c : doc.at("components")) components.push_back(ratio_model_from_json(c));
  return GradientModel(std::move(components));
}

nlohmann::json to_json(const HessianModel& model) {
  nlohmann::json doc = bundle_header("hessian", model.dim());
  nlohmann::json components = nlohmann::json::array();
  for (const RatioModel& c : model.components()) components.push_back(to_json(c));
  doc["components"] = std::move(components);
  return doc;
}

HessianModel hessian_model_from_json(const nlohmann::json& doc) {
  if (doc.at("kind").get<std::string>() != "hessian")
    throw std::invalid_argument("not a hessian model document");
  std::vector<RatioModel> components;
  for (const auto& c : doc.at("components")) components.push_back(ratio_model_from_json(c));
  return HessianModel(doc.at("dim").get<int>(), std::move(components));
}

}  // namespace ridgecrest
