#include "ridgecrest/data_metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ridgecrest/baselines.hpp"
#include "ridgecrest/rng.hpp"

namespace ridgecrest {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr int kTruthGridSize = 10000;

void pad_gaussian(Vector& row, int from_dim, double std_dev, CountedRng& rng) {
  for (int j = from_dim; j < row.size(); ++j) row[j] = std_dev * rng.next_normal();
}

Eigen::Vector2d curve_point(RidgeCurve curve, double t) {
  switch (curve) {
    case RidgeCurve::circle:
      return {std::cos(2.0 * kPi * t), std::sin(2.0 * kPi * t)};
    case RidgeCurve::spiral: {
      const double angle = 3.0 * kPi * t;
      const double radius = 0.25 + 1.5 * t;
      return {radius * std::cos(angle), radius * std::sin(angle)};
    }
    case RidgeCurve::sine: {
      const double x = 3.0 * (t - 0.5);
      return {x, std::sin(kPi * x)};
    }
    case RidgeCurve::quadratic: {
      const double x = 2.4 * (t - 0.5);
      return {x, x * x};
    }
  }
  throw std::invalid_argument("unknown ridge curve");
}

double choose2(double m) { return m * (m - 1.0) / 2.0; }

}  // namespace

LabeledDataset gen_blobs(int n, int dim, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  if (dim < 2) throw std::invalid_argument("blob data needs dimension >= 2");
  const double means[3][2] = {{0.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}};
  const double comp_std = std::sqrt(0.1);

  LabeledDataset out;
  out.name = "blobs";
  out.points.resize(n, dim);
  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CountedRng rng(seed, static_cast<std::uint64_t>(i));
    const double u = rng.next_double();
    const int comp = u < 0.4 ? 0 : (u < 0.7 ? 1 : 2);
    Vector row(dim);
    row[0] = means[comp][0] + comp_std * rng.next_normal();
    row[1] = means[comp][1] + comp_std * rng.next_normal();
    pad_gaussian(row, 2, 0.1, rng);
    out.points.row(i) = row.transpose();
    out.labels[static_cast<std::size_t>(i)] = comp;
  }
  return out;
}

LabeledDataset gen_two_curves(int n, int dim, bool with_blob, std::uint64_t seed,
                              double noise_scale) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  if (dim < 2) throw std::invalid_argument("curve data needs dimension >= 2");
  const double curve_noise = std::sqrt(0.1) * noise_scale;
  const double blob_std = 0.1 * noise_scale;

  LabeledDataset out;
  out.name = with_blob ? "two_curves_blob" : "two_curves";
  out.points.resize(n, dim);
  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CountedRng rng(seed, static_cast<std::uint64_t>(i));
    const int cls = with_blob ? i % 3 : i % 2;
    Vector row(dim);
    if (with_blob && cls == 2) {
      row[0] = blob_std * rng.next_normal();
      row[1] = blob_std * rng.next_normal();
    } else {
      const double t = 0.5 + 0.15 * rng.next_normal();
      if (cls == 0) {
        row[0] = std::cos(kPi * t);
        row[1] = std::sin(kPi * t);
      } else {
        row[0] = -std::cos(kPi * t) + 1.0;
        row[1] = -std::sin(kPi * t);
      }
      row[0] += curve_noise * rng.next_normal();
      row[1] += curve_noise * rng.next_normal();
    }
    pad_gaussian(row, 2, 0.1 * noise_scale, rng);
    out.points.row(i) = row.transpose();
    out.labels[static_cast<std::size_t>(i)] = cls;
  }
  return out;
}

RidgeCurve ridge_curve_from_name(const std::string& name) {
  if (name == "circle") return RidgeCurve::circle;
  if (name == "spiral") return RidgeCurve::spiral;
  if (name == "sine") return RidgeCurve::sine;
  if (name == "quadratic") return RidgeCurve::quadratic;
  throw std::invalid_argument("unknown ridge curve: " + name);
}

const char* ridge_curve_name(RidgeCurve curve) {
  switch (curve) {
    case RidgeCurve::circle: return "circle";
    case RidgeCurve::spiral: return "spiral";
    case RidgeCurve::sine: return "sine";
    case RidgeCurve::quadratic: return "quadratic";
  }
  return "unknown";
}

LabeledDataset gen_ridge_curve(RidgeCurve curve, int n, int dim, double noise_std,
                               std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  if (dim < 2) throw std::invalid_argument("curve data needs dimension >= 2");
  if (noise_std < 0.0) throw std::invalid_argument("noise level must be non-negative");

  LabeledDataset out;
  out.name = ridge_curve_name(curve);
  out.points.resize(n, dim);
  // The circle parameter wraps, so exclude the duplicate endpoint.
  const double t_step = curve == RidgeCurve::circle ? 1.0 / n : 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    CountedRng rng(seed, static_cast<std::uint64_t>(i));
    const Eigen::Vector2d base = curve_point(curve, i * t_step);
    Vector row = Vector::Zero(dim);
    row[0] = base[0];
    row[1] = base[1];
    for (int j = 0; j < dim; ++j) row[j] += noise_std * rng.next_normal();
    out.points.row(i) = row.transpose();
  }
  out.truth_curve = Matrix::Zero(kTruthGridSize, dim);
  const double grid_step =
      curve == RidgeCurve::circle ? 1.0 / kTruthGridSize : 1.0 / (kTruthGridSize - 1);
  for (int l = 0; l < kTruthGridSize; ++l) {
    const Eigen::Vector2d base = curve_point(curve, l * grid_step);
    out.truth_curve(l, 0) = base[0];
    out.truth_curve(l, 1) = base[1];
  }
  return out;
}

double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  if (labels_a.size() != labels_b.size())
    throw std::invalid_argument("labelings must have equal length");
  if (labels_a.empty()) throw std::invalid_argument("labelings must be non-empty");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> count_a;
  std::map<int, double> count_b;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    joint[{labels_a[i], labels_b[i]}] += 1.0;
    count_a[labels_a[i]] += 1.0;
    count_b[labels_b[i]] += 1.0;
  }
  double index = 0.0;
  for (const auto& [key, value] : joint) index += choose2(value);
  double sum_a = 0.0;
  for (const auto& [key, value] : count_a) sum_a += choose2(value);
  double sum_b = 0.0;
  for (const auto& [key, value] : count_b) sum_b += choose2(value);
  const double total = choose2(static_cast<double>(labels_a.size()));
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double ridge_error(const Matrix& outputs, const Matrix& truth_grid) {
  if (outputs.rows() < 1 || truth_grid.rows() < 1)
    throw std::invalid_argument("ridge error needs non-empty inputs");
  if (outputs.cols() != truth_grid.cols())
    throw std::invalid_argument("ridge error dimension mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < outputs.rows(); ++i) {
    total += (truth_grid.rowwise() - outputs.row(i)).rowwise().norm().minCoeff();
  }
  return total / static_cast<double>(outputs.rows());
}

double hausdorff(const Matrix& set_a, const Matrix& set_b) {
  if (set_a.rows() < 1 || set_b.rows() < 1)
    throw std::invalid_argument("hausdorff needs non-empty sets");
  if (set_a.cols() != set_b.cols()) throw std::invalid_argument("hausdorff dimension mismatch");
  double forward = 0.0;
  for (Eigen::Index i = 0; i < set_a.rows(); ++i)
    forward = std::max(forward, (set_b.rowwise() - set_a.row(i)).rowwise().norm().minCoeff());
  double backward = 0.0;
  for (Eigen::Index i = 0; i < set_b.rows(); ++i)
    backward = std::max(backward, (set_a.rowwise() - set_b.row(i)).rowwise().norm().minCoeff());
  return std::max(forward, backward);
}

MeanLogKde mean_log_kde(const Matrix& points, const Matrix& reference, double h) {
  if (h <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (points.rows() < 1 || reference.rows() < 1)
    throw std::invalid_argument("mean log kde needs non-empty inputs");
  KdeModel model{reference, h};
  MeanLogKde out;
  double total = 0.0;
  int kept = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double density = kde_density(model, points.row(i).transpose());
    if (density < 1e-300) {
      out.excluded += 1;
      continue;
    }
    total += std::log(density);
    kept += 1;
  }
  out.value = kept > 0 ? total / kept : -std::numeric_limits<double>::infinity();
  return out;
}

LabeledDataset load_csv(const std::string& path, bool has_labels, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    if (has_header) {
      has_header = false;  // first non-comment line is the header
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int column = 0;
    while (std::getline(ss, cell, ',')) {
      ++column;
      const char* begin = cell.data();
      const char* end = begin + cell.size();
      while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
      while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end) {
        throw std::runtime_error("csv parse error at row " + std::to_string(line_number) +
                                 ", column " + std::to_string(column) + ": '" + cell + "'");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("csv parse error at row " + std::to_string(line_number) +
                               ": expected " + std::to_string(rows.front().size()) +
                               " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv file has no data rows: " + path);
  const int columns = static_cast<int>(rows.front().size());
  const int dim = has_labels ? columns - 1 : columns;
  if (dim < 1) throw std::runtime_error("csv file has no feature columns: " + path);

  LabeledDataset out;
  out.name = path;
  out.points.resize(static_cast<Eigen::Index>(rows.size()), dim);
  if (has_labels) out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dim; ++j) out.points(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    if (has_labels)
      out.labels[i] = static_cast<int>(std::llround(rows[i][static_cast<std::size_t>(columns - 1)]));
  }
  return out;
}

void write_csv(const LabeledDataset& dataset, const std::string& path, bool header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  if (header) {
    for (int j = 0; j < dataset.dim(); ++j) {
      if (j > 0) out << ',';
      out << "x" << j;
    }
    if (dataset.has_labels()) out << ",label";
    out << '\n';
  }
  for (int i = 0; i < dataset.count(); ++i) {
    for (int j = 0; j < dataset.dim(); ++j) {
      if (j > 0) out << ',';
      out << format_double(dataset.points(i, j));
    }
    if (dataset.has_labels()) out << ',' << dataset.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

LabeledDataset standardize(const LabeledDataset& dataset) {
  if (dataset.count() < 2) throw std::invalid_argument("standardize needs at least two rows");
  LabeledDataset out = dataset;
  const Eigen::RowVectorXd mean = dataset.points.colwise().mean();
  Eigen::RowVectorXd std_dev(dataset.dim());
  for (int j = 0; j < dataset.dim(); ++j) {
    const double var =
        (dataset.points.col(j).array() - mean[j]).square().sum() / dataset.count();
    if (var <= 0.0)
      throw std::invalid_argument("column " + std::to_string(j) + " is constant");
    std_dev[j] = std::sqrt(var);
  }
  out.points = (dataset.points.rowwise() - mean).array().rowwise() / std_dev.array();
  if (out.truth_curve.size() > 0)
    out.truth_curve = (dataset.truth_curve.rowwise() - mean).array().rowwise() / std_dev.array();
  return out;
}

LabeledDataset clutter_filter(const LabeledDataset& dataset, double h, double threshold) {
  if (h <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  KdeModel model{dataset.points, h};
  Vector density(dataset.count());
  for (int i = 0; i < dataset.count(); ++i)
    density[i] = kde_density(model, dataset.points.row(i).transpose());
  const double cutoff = density.maxCoeff() * threshold;
  std::vector<int> keep;
  for (int i = 0; i < dataset.count(); ++i)
    if (density[i] >= cutoff) keep.push_back(i);

  LabeledDataset out;
  out.name = dataset.name;
  out.truth_curve = dataset.truth_curve;
  out.points.resize(static_cast<Eigen::Index>(keep.size()), dataset.dim());
  if (dataset.has_labels()) out.labels.resize(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = dataset.points.row(keep[i]);
    if (dataset.has_labels()) out.labels[i] = dataset.labels[static_cast<std::size_t>(keep[i])];
  }
  return out;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buffer, ptr);
}

}  // namespace ridgecrest
