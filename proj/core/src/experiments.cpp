#include "ridgecrest/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ridgecrest/log.hpp"
#include "ridgecrest/rng.hpp"
#include "ridgecrest/version.hpp"

namespace ridgecrest {

namespace fs = std::filesystem;

Method method_from_name(const std::string& name) {
  if (name == "lsldgc") return Method::lsldgc;
  if (name == "lsldgc_cw") return Method::lsldgc_cw;
  if (name == "ms_ls") return Method::ms_ls;
  if (name == "ms_nr") return Method::ms_nr;
  if (name == "scms_ls") return Method::scms_ls;
  if (name == "lsdrf") return Method::lsdrf;
  throw std::invalid_argument("unknown method: " + name);
}

const char* method_name(Method method) {
  switch (method) {
    case Method::lsldgc: return "lsldgc";
    case Method::lsldgc_cw: return "lsldgc_cw";
    case Method::ms_ls: return "ms_ls";
    case Method::ms_nr: return "ms_nr";
    case Method::scms_ls: return "scms_ls";
    case Method::lsdrf: return "lsdrf";
  }
  return "unknown";
}

bool is_ridge_method(Method method) {
  return method == Method::scms_ls || method == Method::lsdrf;
}

LabeledDataset materialize(const DatasetSpec& spec, std::uint64_t seed) {
  LabeledDataset data;
  if (!spec.csv_path.empty()) {
    data = load_csv(spec.csv_path, spec.csv_has_labels, spec.csv_has_header);
  } else if (spec.generator == "blobs") {
    data = gen_blobs(spec.n, spec.dim, seed);
  } else if (spec.generator == "two_curves") {
    data = gen_two_curves(spec.n, spec.dim, false, seed);
  } else if (spec.generator == "two_curves_blob") {
    data = gen_two_curves(spec.n, spec.dim, true, seed);
  } else {
    data = gen_ridge_curve(ridge_curve_from_name(spec.generator), spec.n, spec.dim,
                           spec.noise_std, seed);
  }
  if (spec.standardize) data = standardize(data);
  if (spec.clutter_filter) data = ::ridgecrest::clutter_filter(data, nr_bandwidth(data.points));
  return data;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  ExperimentConfig config;
  if (doc.contains("method")) config.method = method_from_name(doc.at("method").get<std::string>());
  if (doc.contains("dataset")) {
    const auto& d = doc.at("dataset");
    if (d.contains("csv")) {
      config.dataset.generator.clear();
      config.dataset.csv_path = d.at("csv").get<std::string>();
      config.dataset.csv_has_labels = d.value("has_labels", false);
      config.dataset.csv_has_header = d.value("has_header", false);
    } else {
      config.dataset.generator = d.value("generator", std::string("blobs"));
      config.dataset.n = d.value("n", 600);
      config.dataset.dim = d.value("dim", 2);
      config.dataset.noise_std = d.value("noise_std", 0.15);
    }
    config.dataset.standardize = d.value("standardize", false);
    config.dataset.clutter_filter = d.value("clutter_filter", false);
  }
  config.repetitions = doc.value("repetitions", 1);
  config.seed = doc.value("seed", std::uint64_t{0});
  config.d = doc.value("d", 1);
  config.centers = doc.value("centers", 0);
  config.folds = doc.value("folds", 5);
  if (doc.value("cv_aggregate", std::string("mean")) == "median")
    config.aggregate = CvAggregate::median;
  config.nonneg_beta = doc.value("nonneg_beta", false);
  config.nr_sqrt = doc.value("nr_sqrt", false);
  config.jobs = doc.value("jobs", 1);
  config.out_dir = doc.value("out", std::string("out"));
  if (doc.contains("sweep")) {
    config.sweep.axis = doc.at("sweep").value("axis", std::string());
    config.sweep.values = doc.at("sweep").value("values", std::vector<int>());
  }
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["method"] = method_name(config.method);
  nlohmann::json d;
  if (!config.dataset.csv_path.empty()) {
    d["csv"] = config.dataset.csv_path;
    d["has_labels"] = config.dataset.csv_has_labels;
    d["has_header"] = config.dataset.csv_has_header;
  } else {
    d["generator"] = config.dataset.generator;
    d["n"] = config.dataset.n;
    d["dim"] = config.dataset.dim;
    d["noise_std"] = config.dataset.noise_std;
  }
  d["standardize"] = config.dataset.standardize;
  d["clutter_filter"] = config.dataset.clutter_filter;
  doc["dataset"] = std::move(d);
  doc["repetitions"] = config.repetitions;
  doc["seed"] = config.seed;
  doc["d"] = config.d;
  doc["centers"] = config.centers;
  doc["folds"] = config.folds;
  doc["cv_aggregate"] = config.aggregate == CvAggregate::median ? "median" : "mean";
  doc["nonneg_beta"] = config.nonneg_beta;
  doc["nr_sqrt"] = config.nr_sqrt;
  doc["jobs"] = config.jobs;
  doc["out"] = config.out_dir;
  if (!config.sweep.axis.empty()) {
    doc["sweep"] = {{"axis", config.sweep.axis}, {"values", config.sweep.values}};
  }
  return doc;
}

std::string config_hash(const ExperimentConfig& config) {
  // hash the experiment identity only: where results go and how many worker
  // threads ran must not change any output byte
  nlohmann::json doc = config_to_json(config);
  doc.erase("out");
  doc.erase("jobs");
  const std::string canon = doc.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

std::uint64_t repetition_seed(std::uint64_t master, int rep) {
  return derive_seed(master, 0x5265ULL + static_cast<std::uint64_t>(rep));
}

namespace {

int effective_centers(const ExperimentConfig& config, int n) {
  const int b = config.centers > 0 ? config.centers : std::min(n, 100);
  return std::min(b, n);
}

std::vector<ParamGrid> gradient_grids(const Matrix& points, bool ridge) {
  std::vector<ParamGrid> grids;
  const int dim = static_cast<int>(points.cols());
  grids.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j)
    grids.push_back(ridge ? ridge_gradient_grid(points, j) : clustering_grid(points, j));
  return grids;
}

std::vector<ParamGrid> hessian_grids(const Matrix& points) {
  std::vector<ParamGrid> grids;
  const int dim = static_cast<int>(points.cols());
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) grids.push_back(ridge_hessian_grid(points, i, j));
  return grids;
}

GradientModel fit_pipeline_gradient(const ExperimentConfig& config, const Matrix& points,
                                    std::uint64_t rep_seed, bool ridge,
                                    std::vector<ModelSelection>* selections = nullptr) {
  const Matrix centers =
      subsample_centers(points, effective_centers(config, static_cast<int>(points.rows())),
                        derive_seed(rep_seed, 0xCE));
  FitOptions options;
  options.folds = config.folds;
  options.aggregate = config.aggregate;
  options.seed = rep_seed;
  options.simplified = true;
  options.nonneg_beta = config.nonneg_beta;
  const auto grids = gradient_grids(points, ridge);
  if (selections != nullptr) {
    selections->clear();
    for (int j = 0; j < static_cast<int>(points.cols()); ++j) {
      selections->push_back(select_model(
          points, MultiIndex::unit(static_cast<int>(points.cols()), j),
          static_cast<int>(centers.rows()), grids[static_cast<std::size_t>(j)].sigmas,
          grids[static_cast<std::size_t>(j)].lambdas, options.folds, options.aggregate,
          derive_seed(options.seed, static_cast<std::uint64_t>(j)), options.simplified));
    }
  }
  return fit_gradient(points, centers, grids, options);
}

HessianModel fit_pipeline_hessian(const ExperimentConfig& config, const Matrix& points,
                                  const Matrix& centers, std::uint64_t rep_seed) {
  FitOptions options;
  options.folds = config.folds;
  options.aggregate = config.aggregate;
  options.seed = rep_seed;
  options.simplified = false;
  return fit_hessian(points, centers, hessian_grids(points), options);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string rep_file(const std::string& dir, const std::string& stem, Method method, int rep,
                     const std::string& ext) {
  char num[8];
  std::snprintf(num, sizeof(num), "%03d", rep);
  return dir + "/" + stem + "_" + method_name(method) + "_rep" + num + "." + ext;
}

nlohmann::json provenance(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["config"] = config_to_json(config);
  doc["config_hash"] = config_hash(config);
  doc["master_seed"] = config.seed;
  doc["toolkit_version"] = kVersion;
  doc["rng"] = CountedRng::algorithm();
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < config.repetitions; ++r) seeds.push_back(repetition_seed(config.seed, r));
  doc["repetition_seeds"] = seeds;
  return doc;
}

void aggregate_metrics(RunSummary& summary) {
  std::map<std::string, std::vector<double>> values;
  for (const RepOutcome& rep : summary.repetitions) {
    if (!rep.ok) continue;
    for (const auto& [key, value] : rep.metrics) values[key].push_back(value);
  }
  for (const auto& [key, vec] : values) {
    double mean = 0.0;
    for (double v : vec) mean += v;
    mean /= static_cast<double>(vec.size());
    double var = 0.0;
    for (double v : vec) var += (v - mean) * (v - mean);
    var = vec.empty() ? 0.0 : var / static_cast<double>(vec.size());
    summary.metric_means[key] = mean;
    summary.metric_stds[key] = std::sqrt(var);
  }
  summary.all_ok = true;
  for (const RepOutcome& rep : summary.repetitions)
    if (!rep.ok) summary.all_ok = false;
}

void write_metrics_json(const ExperimentConfig& config, RunSummary& summary,
                        const std::string& path) {
  nlohmann::json doc = provenance(config);
  nlohmann::json reps = nlohmann::json::array();
  for (const RepOutcome& rep : summary.repetitions) {
    nlohmann::json r;
    r["repetition"] = rep.repetition;
    r["seed"] = rep.seed;
    r["ok"] = rep.ok;
    if (!rep.ok) r["error"] = rep.error;
    r["metrics"] = rep.metrics;
    reps.push_back(std::move(r));
  }
  doc["repetitions"] = std::move(reps);
  doc["metric_means"] = summary.metric_means;
  doc["metric_stds"] = summary.metric_stds;
  write_text_atomic(path, doc.dump(2) + "\n");
  summary.artifact_paths.push_back(path);
}

void write_failures_manifest(const ExperimentConfig& config, RunSummary& summary) {
  if (summary.all_ok) return;
  nlohmann::json doc;
  doc["config_hash"] = config_hash(config);
  nlohmann::json failures = nlohmann::json::array();
  for (const RepOutcome& rep : summary.repetitions) {
    if (rep.ok) continue;
    failures.push_back({{"repetition", rep.repetition}, {"seed", rep.seed}, {"error", rep.error}});
  }
  doc["failures"] = std::move(failures);
  const std::string path = config.out_dir + "/failures.json";
  write_text_atomic(path, doc.dump(2) + "\n");
  summary.artifact_paths.push_back(path);
}

//! Runs `count` jobs over a bounded pool; exceptions surface per index.
void run_pool(int count, int jobs, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

ClusterRun cluster_once(const ExperimentConfig& config, const LabeledDataset& data,
                        std::uint64_t rep_seed, bool record_trajectories) {
  ClusterRun run;
  switch (config.method) {
    case Method::lsldgc:
    case Method::lsldgc_cw: {
      GradientModel model = fit_pipeline_gradient(config, data.points, rep_seed, /*ridge=*/false);
      SeekConfig seek = default_seek_config(model);
      seek.rule = config.method == Method::lsldgc_cw ? UpdateRule::coordinate_wise
                                                     : UpdateRule::fixed_point;
      seek.record_trajectories = record_trajectories;
      run.merge_radius = default_merge_radius(model);
      run.clusters = cluster(data.points, model, seek, run.merge_radius);
      run.gradient = std::move(model);
      break;
    }
    case Method::ms_ls:
    case Method::ms_nr: {
      const double h = config.method == Method::ms_nr
                           ? nr_bandwidth(data.points, config.nr_sqrt)
                           : lscv_bandwidth(data.points, lscv_grid(data.points));
      KdeModel model{data.points, h};
      MsConfig ms = default_ms_config(model);
      ms.record_trajectories = record_trajectories;
      run.kde_bandwidth = h;
      run.merge_radius = default_ms_merge_radius(model);
      run.clusters = ms_cluster(data.points, model, ms, run.merge_radius);
      break;
    }
    default:
      throw std::invalid_argument("method is not a clustering method");
  }
  return run;
}

RidgeRun ridge_once(const ExperimentConfig& config, const LabeledDataset& data,
                    std::uint64_t rep_seed) {
  if (config.d < 0 || config.d >= data.dim())
    throw std::invalid_argument("ridge methods need 0 <= d < D");
  RidgeRun run;
  switch (config.method) {
    case Method::lsdrf: {
      GradientModel gradient =
          fit_pipeline_gradient(config, data.points, rep_seed, /*ridge=*/true);
      HessianModel hessian =
          fit_pipeline_hessian(config, data.points, gradient.centers(), rep_seed);
      RidgeConfig ridge_config;
      ridge_config.d = config.d;
      ridge_config.seek = default_seek_config(gradient);
      run.ridge = find_ridge(data.points, gradient, hessian, ridge_config);
      run.gradient = std::move(gradient);
      run.hessian = std::move(hessian);
      break;
    }
    case Method::scms_ls: {
      const double h = lscv_bandwidth(data.points, lscv_grid(data.points));
      KdeModel model{data.points, h};
      run.kde_bandwidth = h;
      run.ridge = scms_find_ridge(data.points, model, config.d, default_ms_config(model));
      break;
    }
    default:
      throw std::invalid_argument("method is not a ridge method");
  }
  return run;
}

namespace {

//! Provenance comment line embedded in every CSV artifact; readers skip
//! lines starting with '#'.
std::string provenance_comment(const ExperimentConfig& config, int rep) {
  std::ostringstream out;
  out << "# ridgecrest " << kVersion << " config=" << config_hash(config)
      << " master_seed=" << config.seed << " rep=" << rep
      << " rep_seed=" << repetition_seed(config.seed, rep) << " rng=" << CountedRng::algorithm()
      << '\n';
  return out.str();
}

std::string cluster_csv(const ClusterResult& result) {
  std::ostringstream out;
  out << "label,mode_index,iterations,fallback_count\n";
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    out << result.labels[i] << ',' << result.labels[i] << ',' << result.iterations[i] << ','
        << result.fallback_counts[i] << '\n';
  }
  return out.str();
}

std::string modes_csv(const Matrix& modes) {
  std::ostringstream out;
  for (int j = 0; j < modes.cols(); ++j) out << (j > 0 ? "," : "") << 'x' << j;
  out << '\n';
  for (Eigen::Index i = 0; i < modes.rows(); ++i) {
    for (Eigen::Index j = 0; j < modes.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(modes(i, j));
    }
    out << '\n';
  }
  return out.str();
}

const char* ridge_status_name(RidgeStatus status) {
  switch (status) {
    case RidgeStatus::converged: return "converged";
    case RidgeStatus::max_iter_reached: return "max_iter";
    case RidgeStatus::numeric_failure: return "failed";
  }
  return "unknown";
}

std::string ridge_csv(const Matrix& starts, const RidgeResult& result) {
  std::ostringstream out;
  const int dim = static_cast<int>(starts.cols());
  for (int j = 0; j < dim; ++j) out << (j > 0 ? "," : "") << 'x' << j;
  for (int j = 0; j < dim; ++j) out << ",y" << j;
  out << ",iterations,status,residual_grad_norm\n";
  for (Eigen::Index i = 0; i < starts.rows(); ++i) {
    for (int j = 0; j < dim; ++j) out << (j > 0 ? "," : "") << format_double(starts(i, j));
    for (int j = 0; j < dim; ++j) out << ',' << format_double(result.points(i, j));
    out << ',' << result.iterations[static_cast<std::size_t>(i)] << ','
        << ridge_status_name(result.statuses[static_cast<std::size_t>(i)]) << ','
        << format_double(result.residual_gradient_norms[static_cast<std::size_t>(i)]) << '\n';
  }
  return out.str();
}

}  // namespace

RunSummary run_fit(const ExperimentConfig& config) {
  fs::create_directories(config.out_dir);
  const std::uint64_t rep_seed = repetition_seed(config.seed, 0);
  const LabeledDataset data = materialize(config.dataset, rep_seed);

  RunSummary summary;
  RepOutcome outcome;
  outcome.repetition = 0;
  outcome.seed = rep_seed;
  try {
    std::vector<ModelSelection> selections;
    const bool ridge = is_ridge_method(config.method);
    GradientModel gradient =
        fit_pipeline_gradient(config, data.points, rep_seed, ridge, &selections);

    nlohmann::json gradient_doc = to_json(gradient);
    gradient_doc["provenance"] = provenance(config);
    const std::string gradient_path = config.out_dir + "/gradient_model.json";
    write_text_atomic(gradient_path, gradient_doc.dump(2) + "\n");
    summary.artifact_paths.push_back(gradient_path);

    nlohmann::json cv = nlohmann::json::array();
    for (std::size_t j = 0; j < selections.size(); ++j) {
      nlohmann::json entry;
      entry["coordinate"] = j;
      entry["selected"] = {{"sigma", selections[j].sigma},
                           {"lambda", selections[j].lambda},
                           {"score", selections[j].score}};
      nlohmann::json cells = nlohmann::json::array();
      for (const CvCell& cell : selections[j].table) {
        cells.push_back({{"sigma", cell.sigma},
                         {"lambda", cell.lambda},
                         {"score", cell.score},
                         {"fold_scores", cell.fold_scores}});
      }
      entry["cells"] = std::move(cells);
      cv.push_back(std::move(entry));
    }
    nlohmann::json cv_doc = provenance(config);
    cv_doc["gradient_cv"] = std::move(cv);
    const std::string cv_path = config.out_dir + "/cv_diagnostics.json";

    if (ridge) {
      HessianModel hessian =
          fit_pipeline_hessian(config, data.points, gradient.centers(), rep_seed);
      nlohmann::json hessian_doc = to_json(hessian);
      hessian_doc["provenance"] = provenance(config);
      const std::string hessian_path = config.out_dir + "/hessian_model.json";
      write_text_atomic(hessian_path, hessian_doc.dump(2) + "\n");
      summary.artifact_paths.push_back(hessian_path);
    }

    write_text_atomic(cv_path, cv_doc.dump(2) + "\n");
    summary.artifact_paths.push_back(cv_path);
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.error = e.what();
    log_error("fit failed: ", e.what());
  }
  summary.repetitions.push_back(std::move(outcome));
  aggregate_metrics(summary);
  write_failures_manifest(config, summary);
  return summary;
}

RunSummary run_cluster(const ExperimentConfig& config) {
  fs::create_directories(config.out_dir);
  RunSummary summary;
  summary.repetitions.resize(static_cast<std::size_t>(config.repetitions));
  std::vector<std::string> artifacts(static_cast<std::size_t>(config.repetitions) * 2);

  run_pool(config.repetitions, config.jobs, [&](int rep) {
    RepOutcome& outcome = summary.repetitions[static_cast<std::size_t>(rep)];
    outcome.repetition = rep;
    outcome.seed = repetition_seed(config.seed, rep);
    try {
      const LabeledDataset data = materialize(config.dataset, outcome.seed);
      const ClusterRun run = cluster_once(config, data, outcome.seed);
      if (data.has_labels())
        outcome.metrics["ari"] = adjusted_rand_index(run.clusters.labels, data.labels);
      outcome.metrics["modes"] = static_cast<double>(run.clusters.modes.rows());

      const std::string labels_path = rep_file(config.out_dir, "labels", config.method, rep, "csv");
      write_text_atomic(labels_path, provenance_comment(config, rep) + cluster_csv(run.clusters));
      const std::string modes_path = rep_file(config.out_dir, "modes", config.method, rep, "csv");
      write_text_atomic(modes_path, provenance_comment(config, rep) + modes_csv(run.clusters.modes));
      artifacts[static_cast<std::size_t>(rep) * 2] = labels_path;
      artifacts[static_cast<std::size_t>(rep) * 2 + 1] = modes_path;
      outcome.ok = true;
    } catch (const std::exception& e) {
      outcome.error = e.what();
      log_error("cluster repetition ", rep, " failed: ", e.what());
    }
  });

  for (std::string& path : artifacts)
    if (!path.empty()) summary.artifact_paths.push_back(std::move(path));
  aggregate_metrics(summary);
  write_metrics_json(config, summary, config.out_dir + "/metrics.json");
  write_failures_manifest(config, summary);
  return summary;
}

RunSummary run_ridge(const ExperimentConfig& config) {
  fs::create_directories(config.out_dir);
  RunSummary summary;
  summary.repetitions.resize(static_cast<std::size_t>(config.repetitions));
  std::vector<std::string> artifacts(static_cast<std::size_t>(config.repetitions));

  run_pool(config.repetitions, config.jobs, [&](int rep) {
    RepOutcome& outcome = summary.repetitions[static_cast<std::size_t>(rep)];
    outcome.repetition = rep;
    outcome.seed = repetition_seed(config.seed, rep);
    try {
      const LabeledDataset data = materialize(config.dataset, outcome.seed);
      const RidgeRun run = ridge_once(config, data, outcome.seed);
      if (data.truth_curve.size() > 0)
        outcome.metrics["ridge_error"] = ridge_error(run.ridge.points, data.truth_curve);
      const MeanLogKde score =
          mean_log_kde(run.ridge.points, data.points, nr_bandwidth(data.points, config.nr_sqrt));
      outcome.metrics["mean_log_kde"] = score.value;

      const std::string path = rep_file(config.out_dir, "ridge", config.method, rep, "csv");
      write_text_atomic(path, provenance_comment(config, rep) + ridge_csv(data.points, run.ridge));
      artifacts[static_cast<std::size_t>(rep)] = path;
      outcome.ok = true;
    } catch (const std::exception& e) {
      outcome.error = e.what();
      log_error("ridge repetition ", rep, " failed: ", e.what());
    }
  });

  for (std::string& path : artifacts)
    if (!path.empty()) summary.artifact_paths.push_back(std::move(path));
  aggregate_metrics(summary);
  write_metrics_json(config, summary, config.out_dir + "/metrics.json");
  write_failures_manifest(config, summary);
  return summary;
}

RunSummary run_benchmark(const ExperimentConfig& config) {
  if (config.sweep.axis != "n" && config.sweep.axis != "D")
    throw std::invalid_argument("sweep axis must be 'n' or 'D'");
  if (config.sweep.values.empty()) throw std::invalid_argument("sweep values must be non-empty");
  fs::create_directories(config.out_dir);

  struct Cell {
    int axis_value;
    int rep;
  };
  std::vector<Cell> cells;
  for (int value : config.sweep.values)
    for (int rep = 0; rep < config.repetitions; ++rep) cells.push_back({value, rep});

  RunSummary summary;
  summary.repetitions.resize(cells.size());
  std::vector<std::string> rows(cells.size());

  run_pool(static_cast<int>(cells.size()), config.jobs, [&](int index) {
    const Cell& cell = cells[static_cast<std::size_t>(index)];
    RepOutcome& outcome = summary.repetitions[static_cast<std::size_t>(index)];
    outcome.repetition = cell.rep;
    outcome.seed = repetition_seed(config.seed, cell.rep);
    try {
      ExperimentConfig point = config;
      if (config.sweep.axis == "n")
        point.dataset.n = cell.axis_value;
      else
        point.dataset.dim = cell.axis_value;
      const LabeledDataset data = materialize(point.dataset, outcome.seed);

      std::string metric_name;
      double metric_value = 0.0;
      if (is_ridge_method(config.method)) {
        const RidgeRun run = ridge_once(point, data, outcome.seed);
        if (data.truth_curve.size() > 0) {
          metric_name = "ridge_error";
          metric_value = ridge_error(run.ridge.points, data.truth_curve);
        } else {
          metric_name = "mean_log_kde";
          metric_value =
              mean_log_kde(run.ridge.points, data.points, nr_bandwidth(data.points)).value;
        }
      } else {
        const ClusterRun run = cluster_once(point, data, outcome.seed);
        metric_name = "ari";
        metric_value = adjusted_rand_index(run.clusters.labels, data.labels);
      }
      outcome.metrics[metric_name] = metric_value;
      std::ostringstream row;
      row << method_name(config.method) << ',' << config.sweep.axis << ',' << cell.axis_value
          << ',' << cell.rep << ',' << metric_name << ',' << format_double(metric_value) << '\n';
      rows[static_cast<std::size_t>(index)] = row.str();
      outcome.ok = true;
    } catch (const std::exception& e) {
      outcome.error = e.what();
      log_error("benchmark cell failed: ", e.what());
    }
  });

  std::ostringstream csv;
  csv << "# ridgecrest " << kVersion << " config=" << config_hash(config)
      << " master_seed=" << config.seed << " rng=" << CountedRng::algorithm() << '\n';
  csv << "method,axis,axis_value,repetition,metric,value\n";
  for (const std::string& row : rows) csv << row;
  const std::string path = config.out_dir + "/benchmark_" + std::string(method_name(config.method)) +
                           "_" + config.sweep.axis + ".csv";
  write_text_atomic(path, csv.str());
  summary.artifact_paths.push_back(path);
  aggregate_metrics(summary);
  write_metrics_json(config, summary, config.out_dir + "/metrics.json");
  write_failures_manifest(config, summary);
  return summary;
}

}  // namespace ridgecrest
