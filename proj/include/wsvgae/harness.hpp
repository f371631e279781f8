/*
 * Copyright 2026 The wsvgae Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Experiment orchestration: configuration, dataset registry, single runs,
// learning-rate search, aggregation over runs and the paired
// weight-sharing comparison.

#ifndef WSVGAE_HARNESS_HPP_
#define WSVGAE_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsvgae/graph.hpp"
#include "wsvgae/trainer.hpp"

namespace wsvgae {

enum class ModelKind { kVgae, kDeepVgae };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ExperimentConfig {
  std::string dataset = "cora";
  std::string data_root = "data";
  bool use_features = false;
  ModelKind model = ModelKind::kVgae;
  bool ws = true;
  Index d = 16;
  /// Hidden sizes. A single value is repeated for every hidden layer of the
  /// model kind (1 for vgae, 2 for deep-vgae).
  std::vector<Index> dh{32};
  Index iterations = 300;
  double lr = 0.01;
  std::vector<double> lr_grid;
  Index grid_seeds = 3;
  Index runs = 100;
  std::uint64_t seed = 0;
  double mask_val = 0.05;
  double mask_test = 0.10;
  FastGaeOptions fastgae;
  bool link_prediction = true;
  bool community_detection = true;
  double dropout = 0.0;
  double kl_scale = 0.0;  // <= 0 selects 1/n
  bool self_loops = true;
  Index kmeans_restarts = 10;
  Index kmeans_max_iter = 300;
  // Used when dataset == "sbm".
  std::vector<Index> sbm_blocks{50, 50};
  double sbm_p_in = 0.2;
  double sbm_p_out = 0.02;
  std::uint64_t sbm_seed = 0;

  std::vector<Index> hidden_dims() const;
  void validate() const;

  /// Sets one key from its text value. Keys match the CLI flag names
  /// ("mask-val", "lr-grid", ...); '_' is accepted for '-'.
  void set(std::string_view key, std::string_view value);

  /// Canonical "key = value" lines, stable across runs.
  std::string to_text() const;
  /// FNV-1a hash of to_text() with `ws` and `seed` left out, identifying the
  /// experiment a run belongs to.
  std::uint64_t experiment_hash() const;
};

/// Reads "key = value" lines ('#' comments) on top of `base`.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  ExperimentConfig base = {});

struct Dataset {
  std::string name;
  SparseGraph graph;
  std::optional<FeatureMatrix> features;
  std::optional<CommunityLabels> labels;
};

/// Directory-per-dataset registry. `<root>/<name>/manifest.txt` names the
/// files:
///
///   edges = edges.txt          (required)
///   format = tsv-pairs         (or tsv-weighted)
///   features = features.txt    (optional; "node dim value" triplets)
///   feature-dim = 1433         (optional)
///   labels = labels.txt        (optional; "node label")
Dataset load_registry_dataset(const std::filesystem::path& dir);
bool registry_has(const std::filesystem::path& root, std::string_view name);

/// Resolves config.dataset: "sbm" generates from the sbm_* keys, anything
/// else is looked up under config.data_root.
Dataset load_dataset(const ExperimentConfig& config);

/// Writes `dataset` in registry layout under `dir`.
void write_registry_dataset(const std::filesystem::path& dir, const Dataset& dataset);

struct RunResult {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  /// Fractions in [0, 1]: "auc", "ap" for link prediction; "ami", "ari" for
  /// community detection.
  std::map<std::string, double> metrics;
  std::optional<double> validation_auc;
  double seconds = 0.0;        // whole run
  double train_seconds = 0.0;  // optimizer loop(s) only
  double final_loss = 0.0;
  double lr = 0.0;
  bool used_fastgae = false;
};

TrainOptions train_options(const ExperimentConfig& config, Index n);

/// The link-prediction split of run `seed`. It ignores the ws flag, so paired
/// runs see the same held-out edges.
EdgeSplit link_split(const ExperimentConfig& config, const Dataset& dataset,
                     std::uint64_t seed);

/// One seeded run: split -> train on the incomplete graph -> score test
/// pairs with the posterior mean; and, separately, train on the full graph ->
/// k-means on the posterior mean -> AMI/ARI. The split depends only on
/// `seed`; weight initialization also depends on the ws flag.
RunResult run_single(const ExperimentConfig& config, const Dataset& dataset,
                     std::uint64_t seed);
RunResult run_single(const ExperimentConfig& config, std::uint64_t seed);

/// Runs seeds config.seed .. config.seed + runs - 1.
std::vector<RunResult> run_many(const ExperimentConfig& config, const Dataset& dataset);

struct GridPoint {
  double lr = 0.0;
  double mean_validation_auc = 0.0;
  bool excluded = false;
  std::string reason;
};

struct GridSearchResult {
  double best_lr = 0.0;
  std::vector<GridPoint> points;
};

/// Mean validation AUC per learning rate over `seeds`; the best one wins,
/// ties going to the smaller rate. Rates that produce a non-finite loss are
/// excluded.
GridSearchResult grid_search_lr(const ExperimentConfig& config, const Dataset& dataset,
                                std::span<const std::uint64_t> seeds);

struct CellKey {
  std::string dataset;
  bool features = false;
  ModelKind model = ModelKind::kVgae;
  bool ws = true;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) estimator

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct AggregateCell {
  CellKey key;
  Index runs = 0;
  std::uint64_t experiment_hash = 0;
  /// Same units as RunResult::metrics (fractions).
  std::map<std::string, MetricSummary> metrics;
  MetricSummary train_seconds;

  friend bool operator==(const AggregateCell&, const AggregateCell&) = default;
};

enum class Verdict { kEquivalent, kWsOutside, kNowsOutside };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

/// WS vs no-WS on one metric. `verdict` is kEquivalent iff
/// |mean_ws - mean_nows| <= std_nows (else kWsOutside); `reverse` applies the
/// same test with std_ws (else kNowsOutside).
struct MetricVerdict {
  std::string metric;
  double mean_ws = 0.0;
  double mean_nows = 0.0;
  double std_ws = 0.0;
  double std_nows = 0.0;
  Verdict verdict = Verdict::kEquivalent;
  Verdict reverse = Verdict::kEquivalent;

  friend bool operator==(const MetricVerdict&, const MetricVerdict&) = default;
};

struct PairedVerdict {
  CellKey ws_cell;  // key of the ws side
  std::vector<MetricVerdict> metrics;

  friend bool operator==(const PairedVerdict&, const PairedVerdict&) = default;
};

struct AggregateReport {
  std::vector<AggregateCell> cells;  // sorted by key
  std::vector<PairedVerdict> verdicts;
  std::string rng_algorithm;
  std::string commit;

  const AggregateCell* find(const CellKey& key) const;
  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

/// Groups runs into cells, computing mean and sample std per metric. Every
/// cell needs at least two runs of one experiment.
AggregateReport aggregate(std::span<const RunResult> results);

std::vector<MetricVerdict> one_std_verdict(const AggregateCell& ws_cell,
                                           const AggregateCell& nows_cell);

/// Pairs every ws cell with its no-ws counterpart present in `cells`.
std::vector<PairedVerdict> pair_verdicts(std::span<const AggregateCell> cells);

enum class ReportFormat { kCsv, kJson, kMarkdown };
std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view text);

/// "84.86 ± 1.48": both values rounded to two decimals.
std::string format_mean_std(double mean, double std);

/// Markdown renders metrics in percent; csv and json keep full precision.
std::string emit_report(const AggregateReport& report, ReportFormat format);
/// Inverse of emit_report for csv and json.
AggregateReport parse_report(std::string_view text, ReportFormat format);

/// Per-run results file written by `run --out`.
std::string emit_results_json(std::span<const RunResult> runs);
std::vector<RunResult> parse_results_json(std::string_view text);

/// Commit id baked in at configure time ("unknown" outside a git checkout).
std::string_view build_commit();

}  // namespace wsvgae

#endif  // WSVGAE_HARNESS_HPP_
