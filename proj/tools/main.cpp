#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ridgecrest/data_metrics.hpp"
#include "ridgecrest/experiments.hpp"
#include "ridgecrest/version.hpp"

namespace rc = ridgecrest;

namespace {

struct CliOverrides {
  std::string config_path;
  std::string method;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
  int d = -1;
  int centers = -1;
  int folds = 0;
  int repetitions = 0;
  bool nr_sqrt = false;
  bool nonneg_beta = false;
  bool median_cv = false;

  std::string dataset;
  int n = 0;
  int dim = 0;
  double noise_std = -1.0;
  std::string csv_path;
  bool csv_has_labels = false;
  bool csv_has_header = false;
  bool standardize = false;
  bool clutter_filter = false;

  std::string axis;
  std::vector<int> values;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "experiment config JSON");
  cmd->add_option("--method", o.method, "lsldgc|lsldgc_cw|ms_ls|ms_nr|scms_ls|lsdrf");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--jobs", o.jobs, "concurrent repetitions");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--d", o.d, "ridge target dimension");
  cmd->add_option("--centers", o.centers, "kernel center count, default min(n,100)");
  cmd->add_option("--folds", o.folds, "cross-validation folds");
  cmd->add_option("--repetitions", o.repetitions, "number of seeded repetitions");
  cmd->add_flag("--nr-sqrt", o.nr_sqrt, "use sqrt variance in the normal-reference bandwidth");
  cmd->add_flag("--nonneg-beta", o.nonneg_beta, "project tilde-beta onto >= 0 after fitting");
  cmd->add_flag("--median-cv", o.median_cv, "aggregate CV folds by median instead of mean");

  cmd->add_option("--dataset", o.dataset,
                  "blobs|two_curves|two_curves_blob|circle|spiral|sine|quadratic");
  cmd->add_option("--n", o.n, "generator sample count");
  cmd->add_option("--dim", o.dim, "generator dimension");
  cmd->add_option("--noise-std", o.noise_std, "ridge curve noise level");
  cmd->add_option("--csv", o.csv_path, "CSV dataset path");
  cmd->add_flag("--csv-has-labels", o.csv_has_labels, "labels in last CSV column");
  cmd->add_flag("--csv-has-header", o.csv_has_header, "skip the first CSV row");
  cmd->add_flag("--standardize", o.standardize, "coordinate-wise standardization");
  cmd->add_flag("--clutter-filter", o.clutter_filter, "drop low-density rows before fitting");
}

rc::ExperimentConfig build_config(const CLI::App* cmd, const CliOverrides& o) {
  rc::ExperimentConfig config;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + o.config_path);
    nlohmann::json doc;
    in >> doc;
    config = rc::config_from_json(doc);
  }
  auto given = [&](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--method")) config.method = rc::method_from_name(o.method);
  if (given("--seed")) config.seed = o.seed;
  if (given("--jobs")) config.jobs = o.jobs;
  if (given("--out")) config.out_dir = o.out_dir;
  if (given("--d")) config.d = o.d;
  if (given("--centers")) config.centers = o.centers;
  if (given("--folds")) config.folds = o.folds;
  if (given("--repetitions")) config.repetitions = o.repetitions;
  if (given("--nr-sqrt")) config.nr_sqrt = true;
  if (given("--nonneg-beta")) config.nonneg_beta = true;
  if (given("--median-cv")) config.aggregate = rc::CvAggregate::median;

  if (given("--csv")) {
    config.dataset.generator.clear();
    config.dataset.csv_path = o.csv_path;
    config.dataset.csv_has_labels = o.csv_has_labels;
    config.dataset.csv_has_header = o.csv_has_header;
  } else if (given("--dataset")) {
    config.dataset.generator = o.dataset;
    config.dataset.csv_path.clear();
  }
  if (given("--n")) config.dataset.n = o.n;
  if (given("--dim")) config.dataset.dim = o.dim;
  if (given("--noise-std")) config.dataset.noise_std = o.noise_std;
  if (given("--standardize")) config.dataset.standardize = true;
  if (given("--clutter-filter")) config.dataset.clutter_filter = true;

  if (given("--axis")) config.sweep.axis = o.axis;
  if (given("--values")) config.sweep.values = o.values;
  return config;
}

int report(const rc::RunSummary& summary) {
  for (const auto& [key, mean] : summary.metric_means) {
    std::cout << key << " mean=" << rc::format_double(mean)
              << " std=" << rc::format_double(summary.metric_stds.at(key)) << "\n";
  }
  int failures = 0;
  for (const auto& rep : summary.repetitions)
    if (!rep.ok) ++failures;
  if (failures > 0) {
    std::cerr << failures << " repetition(s) failed; see failures.json\n";
    return 1;
  }
  return 0;
}

//! Reads a label vector from a CSV: prefers a header column named "label",
//! otherwise takes the last column.
std::vector<int> read_labels(const std::string& path) {
  std::ifstream probe(path);
  std::string first_line;
  while (std::getline(probe, first_line) && (first_line.empty() || first_line[0] == '#')) {
  }
  const bool has_header = first_line.find("label") != std::string::npos;
  if (has_header) {
    std::vector<std::string> names;
    std::stringstream ss(first_line);
    std::string cell;
    int label_col = -1;
    int idx = 0;
    while (std::getline(ss, cell, ',')) {
      if (cell == "label") label_col = idx;
      ++idx;
    }
    rc::LabeledDataset data = rc::load_csv(path, /*has_labels=*/false, /*has_header=*/true);
    if (label_col < 0) label_col = data.dim() - 1;
    std::vector<int> labels(static_cast<std::size_t>(data.count()));
    for (int i = 0; i < data.count(); ++i)
      labels[static_cast<std::size_t>(i)] = static_cast<int>(std::llround(data.points(i, label_col)));
    return labels;
  }
  rc::LabeledDataset data = rc::load_csv(path, /*has_labels=*/true, /*has_header=*/false);
  return data.labels;
}

//! Reads a point matrix; when the header carries y0..yk columns (ridge output
//! files) only those are taken, otherwise every numeric column.
rc::Matrix read_points(const std::string& path) {
  std::ifstream probe(path);
  std::string first_line;
  while (std::getline(probe, first_line) && (first_line.empty() || first_line[0] == '#')) {
  }
  const bool header = !first_line.empty() && !(std::isdigit(first_line[0]) != 0 ||
                                               first_line[0] == '-' || first_line[0] == '+');
  std::vector<int> y_cols;
  if (header) {
    std::stringstream ss(first_line);
    std::string cell;
    int idx = 0;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell[0] == 'y') y_cols.push_back(idx);
      ++idx;
    }
  }
  // status columns are non-numeric; strip them by re-reading manually
  std::ifstream in(path);
  std::string line;
  bool header_pending = header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int idx = 0;
    while (std::getline(ss, cell, ',')) {
      const bool wanted = y_cols.empty() || std::find(y_cols.begin(), y_cols.end(), idx) != y_cols.end();
      if (wanted) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          if (y_cols.empty()) {
            // skip non-numeric trailing columns such as status
          } else {
            throw std::runtime_error("non-numeric cell in " + path + ": " + cell);
          }
        }
      }
      ++idx;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no rows in " + path);
  rc::Matrix points(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw std::runtime_error("ragged rows in " + path);
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return points;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ridgecrest: direct density-derivative-ratio toolkit"};
  app.set_version_flag("--version", rc::kVersion);
  app.require_subcommand(1);

  CliOverrides o;
  CLI::App* fit = app.add_subcommand("fit", "fit and serialize ratio models");
  CLI::App* cluster = app.add_subcommand("cluster", "mode-seeking clustering runs");
  CLI::App* ridge = app.add_subcommand("ridge", "density ridge estimation runs");
  CLI::App* benchmark = app.add_subcommand("benchmark", "n/D sweeps as plot-ready CSV");
  for (CLI::App* cmd : {fit, cluster, ridge, benchmark}) add_common_flags(cmd, o);
  benchmark->add_option("--axis", o.axis, "sweep axis: n or D");
  benchmark->add_option("--values", o.values, "sweep axis values")->delimiter(',');

  CLI::App* metrics = app.add_subcommand("metrics", "evaluate metric files");
  std::string kind, file_a, file_b;
  double bandwidth = 0.0;
  metrics->add_option("--kind", kind, "ari|hausdorff|ridge-error|mean-log-kde")->required();
  metrics->add_option("--a", file_a, "first input CSV")->required();
  metrics->add_option("--b", file_b, "second input CSV")->required();
  metrics->add_option("--bandwidth", bandwidth, "KDE bandwidth for mean-log-kde (default NR rule)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (metrics->parsed()) {
      nlohmann::json out;
      out["kind"] = kind;
      if (kind == "ari") {
        out["value"] = rc::adjusted_rand_index(read_labels(file_a), read_labels(file_b));
      } else if (kind == "hausdorff") {
        out["value"] = rc::hausdorff(read_points(file_a), read_points(file_b));
      } else if (kind == "ridge-error") {
        out["value"] = rc::ridge_error(read_points(file_a), read_points(file_b));
      } else if (kind == "mean-log-kde") {
        const rc::Matrix points = read_points(file_a);
        const rc::Matrix reference = read_points(file_b);
        const double h = metrics->count("--bandwidth") > 0 ? bandwidth : rc::nr_bandwidth(reference);
        const rc::MeanLogKde result = rc::mean_log_kde(points, reference, h);
        out["value"] = result.value;
        out["excluded"] = result.excluded;
        out["bandwidth"] = h;
      } else {
        throw std::runtime_error("unknown metric kind: " + kind);
      }
      std::cout << out.dump() << "\n";
      return 0;
    }

    if (fit->parsed()) return report(rc::run_fit(build_config(fit, o)));
    if (cluster->parsed()) return report(rc::run_cluster(build_config(cluster, o)));
    if (ridge->parsed()) return report(rc::run_ridge(build_config(ridge, o)));
    if (benchmark->parsed()) return report(rc::run_benchmark(build_config(benchmark, o)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
