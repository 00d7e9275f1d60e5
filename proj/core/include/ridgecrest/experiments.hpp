#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ridgecrest/baselines.hpp"
#include "ridgecrest/data_metrics.hpp"
#include "ridgecrest/lsddr.hpp"
#include "ridgecrest/mode_seeking.hpp"
#include "ridgecrest/ridge_finding.hpp"

namespace ridgecrest {

enum class Method { lsldgc, lsldgc_cw, ms_ls, ms_nr, scms_ls, lsdrf };

Method method_from_name(const std::string& name);
const char* method_name(Method method);
bool is_ridge_method(Method method);

struct DatasetSpec {
  //! blobs | two_curves | two_curves_blob | circle | spiral | sine |
  //! quadratic; empty means CSV-backed.
  std::string generator = "blobs";
  int n = 600;
  int dim = 2;
  double noise_std = 0.15;  // ridge curve generators only

  std::string csv_path;
  bool csv_has_labels = false;
  bool csv_has_header = false;
  bool standardize = false;
  bool clutter_filter = false;
};

LabeledDataset materialize(const DatasetSpec& spec, std::uint64_t seed);

struct SweepSpec {
  std::string axis;  // "n" or "D"
  std::vector<int> values;
};

struct ExperimentConfig {
  Method method = Method::lsldgc;
  DatasetSpec dataset;
  int repetitions = 1;
  std::uint64_t seed = 0;
  int d = 1;        // ridge target dimension
  int centers = 0;  // 0 selects min(n, 100)
  int folds = 5;
  CvAggregate aggregate = CvAggregate::mean;
  bool nonneg_beta = false;
  bool nr_sqrt = false;
  int jobs = 1;
  std::string out_dir = "out";
  SweepSpec sweep;  // benchmark only
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
//! Hash of the canonical config serialization, embedded in every artifact.
std::string config_hash(const ExperimentConfig& config);

//! Seed of repetition `rep` under the master seed.
std::uint64_t repetition_seed(std::uint64_t master, int rep);

//! One clustering repetition, deterministic in rep_seed.
struct ClusterRun {
  ClusterResult clusters;
  double merge_radius = 0.0;
  std::optional<GradientModel> gradient;  // lsldgc variants
  double kde_bandwidth = 0.0;             // ms variants
};
ClusterRun cluster_once(const ExperimentConfig& config, const LabeledDataset& data,
                        std::uint64_t rep_seed, bool record_trajectories = false);

//! One ridge repetition, deterministic in rep_seed.
struct RidgeRun {
  RidgeResult ridge;
  std::optional<GradientModel> gradient;
  std::optional<HessianModel> hessian;
  double kde_bandwidth = 0.0;
};
RidgeRun ridge_once(const ExperimentConfig& config, const LabeledDataset& data,
                    std::uint64_t rep_seed);

struct RepOutcome {
  int repetition = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::map<std::string, double> metrics;
};

struct RunSummary {
  std::vector<RepOutcome> repetitions;
  std::map<std::string, double> metric_means;
  std::map<std::string, double> metric_stds;
  std::vector<std::string> artifact_paths;
  bool all_ok = false;
};

//! Fits and serializes the models for the configured method along with the
//! full cross-validation tables.
RunSummary run_fit(const ExperimentConfig& config);
//! Clustering repetitions: per-repetition labels and modes CSVs plus one
//! metrics JSON document.
RunSummary run_cluster(const ExperimentConfig& config);
//! Ridge repetitions: per-repetition ridge CSVs plus one metrics JSON.
RunSummary run_ridge(const ExperimentConfig& config);
//! n- or D-sweep emitting one long-format CSV of per-repetition metrics.
RunSummary run_benchmark(const ExperimentConfig& config);

}  // namespace ridgecrest
