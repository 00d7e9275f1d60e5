#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ridgecrest/types.hpp"

namespace ridgecrest {

struct LabeledDataset {
  Matrix points;            // n x D
  std::vector<int> labels;  // empty when unlabeled
  Matrix truth_curve;       // dense truth grid for ridge datasets, empty otherwise
  std::string name;

  int count() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_labels() const { return !labels.empty(); }
};

//! Mixture of three Gaussians with means (0,1), (-1,-1), (1,-1), covariance
//! 0.1 I_2 and weights 0.4/0.3/0.3; extra dimensions are N(0, 0.1^2) padding.
LabeledDataset gen_blobs(int n, int dim, std::uint64_t seed);

//! Two half-circle curves (plus an optional center blob with roughly n/3
//! points); curve parameters t ~ N(0.5, 0.15^2), additive noise with
//! covariance 0.1 I_2, padding N(0, 0.1^2). noise_scale multiplies every
//! noise draw (0 gives the noiseless curves).
LabeledDataset gen_two_curves(int n, int dim, bool with_blob, std::uint64_t seed,
                              double noise_scale = 1.0);

enum class RidgeCurve { circle, spiral, sine, quadratic };

RidgeCurve ridge_curve_from_name(const std::string& name);
const char* ridge_curve_name(RidgeCurve curve);

//! Curve samples x_i = f(t_i) + noise with t_i at regular intervals and
//! isotropic Gaussian noise of the given standard deviation in all D
//! coordinates. Keeps a dense 10000-point truth grid of f for the ridge
//! error metric.
LabeledDataset gen_ridge_curve(RidgeCurve curve, int n, int dim, double noise_std,
                               std::uint64_t seed);

//! Hubert-Arabie adjusted Rand index from the contingency table.
double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

//! Mean nearest-neighbor distance from each output row to the truth grid.
double ridge_error(const Matrix& outputs, const Matrix& truth_grid);

//! Max of the two directed sup-inf set distances.
double hausdorff(const Matrix& set_a, const Matrix& set_b);

struct MeanLogKde {
  double value = 0.0;
  int excluded = 0;  // rows dropped for density underflow
};

//! Mean log-density of the points under a Gaussian KDE centered at the
//! reference samples.
MeanLogKde mean_log_kde(const Matrix& points, const Matrix& reference, double h);

//! Comma-separated numeric CSV; labels are the last column when has_labels.
LabeledDataset load_csv(const std::string& path, bool has_labels, bool has_header = false);

//! Writes points (and the label column when present) in input order.
void write_csv(const LabeledDataset& dataset, const std::string& path, bool header = false);

//! Coordinate-wise mean-zero unit-variance transform; the same affine map is
//! applied to the truth grid when present. Constant columns are an error.
LabeledDataset standardize(const LabeledDataset& dataset);

//! Removes rows whose self-KDE density falls below threshold * max density.
LabeledDataset clutter_filter(const LabeledDataset& dataset, double h, double threshold = 1e-3);

//! Shortest round-trip decimal formatting, used by all CSV output.
std::string format_double(double value);

}  // namespace ridgecrest
