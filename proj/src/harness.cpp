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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "wsvgae/error.hpp"
#include "wsvgae/harness.hpp"
#include "wsvgae/metrics.hpp"
#include "wsvgae/model.hpp"

#ifndef WSVGAE_COMMIT
#define WSVGAE_COMMIT "unknown"
#endif

namespace wsvgae {
namespace {

std::string run_context(const ExperimentConfig& config, std::uint64_t seed) {
  return "run dataset=" + config.dataset + " model=" + std::string(to_string(config.model)) +
         " ws=" + (config.ws ? "true" : "false") + " seed=" + std::to_string(seed);
}

std::string tag(const char* stage, const char* task, bool ws) {
  return std::string(stage) + (ws ? "/ws/" : "/nows/") + task;
}

std::vector<double> edge_probabilities(const DenseMatrix& mu, std::span<const NodePair> pairs) {
  std::vector<double> p = decode_logits(mu, pairs);
  for (double& v : p) v = sigmoid(v);
  return p;
}

// Test and validation positives must be invisible to the model.
void check_split_disjoint(const EdgeSplit& split) {
  for (const auto* held_out : {&split.test_pos, &split.val_pos}) {
    for (const NodePair& p : *held_out) {
      if (split.train_graph.has_edge(p.first, p.second)) {
        throw std::logic_error("held-out edge present in the training graph");
      }
    }
  }
}

RunResult run_single_impl(const ExperimentConfig& config, const Dataset& dataset,
                          std::uint64_t seed) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const SparseGraph& graph = dataset.graph;

  FeatureMatrix x = FeatureMatrix::identity(graph.n());
  if (config.use_features) {
    if (!dataset.features) {
      throw InvalidArgument("dataset '" + dataset.name + "' has no features");
    }
    if (dataset.features->n() != graph.n()) {
      throw InvalidArgument("feature rows do not match the node count");
    }
    x = *dataset.features;
  }

  const std::vector<Index> hidden = config.hidden_dims();
  const TrainOptions options = train_options(config, graph.n());

  RunResult result;
  result.config = config;
  result.seed = seed;
  result.lr = config.lr;

  if (config.link_prediction) {
    const EdgeSplit split = link_split(config, dataset, seed);
    check_split_disjoint(split);

    RngStream init = RngStream::derive(seed, tag("init", "link", config.ws));
    EncoderParams params = EncoderParams::init(x.dim(), hidden, config.d, config.ws, init);
    const TrainReport report =
        train(params, split.train_graph, x, options,
              RngStream::derive_seed(seed, tag("train", "link", config.ws)));
    const Posterior post = encode(params, normalize(split.train_graph), x);

    const ScoredPairs test = ScoredPairs::from(edge_probabilities(post.mu, split.test_pos),
                                               edge_probabilities(post.mu, split.test_neg));
    result.metrics["auc"] = roc_auc(test);
    result.metrics["ap"] = average_precision(test);
    if (!split.val_pos.empty()) {
      result.validation_auc =
          roc_auc(ScoredPairs::from(edge_probabilities(post.mu, split.val_pos),
                                    edge_probabilities(post.mu, split.val_neg)));
    }
    result.train_seconds += report.seconds;
    result.final_loss = report.final.total;
    result.used_fastgae = report.used_fastgae;
  }

  if (config.community_detection) {
    if (!dataset.labels) {
      throw InvalidArgument("dataset '" + dataset.name + "' has no community labels");
    }
    if (dataset.labels->n() != graph.n()) {
      throw InvalidArgument("label count does not match the node count");
    }
    RngStream init = RngStream::derive(seed, tag("init", "community", config.ws));
    EncoderParams params = EncoderParams::init(x.dim(), hidden, config.d, config.ws, init);
    const TrainReport report =
        train(params, graph, x, options,
              RngStream::derive_seed(seed, tag("train", "community", config.ws)));
    const Posterior post = encode(params, normalize(graph), x);

    RngStream km_rng = RngStream::derive(seed, tag("kmeans", "community", config.ws));
    KMeansOptions km;
    km.restarts = config.kmeans_restarts;
    km.max_iter = config.kmeans_max_iter;
    const Clustering clusters = kmeans(post.mu, dataset.labels->k(), km, km_rng);
    result.metrics["ami"] = ami(clusters.assignments, dataset.labels->labels());
    result.metrics["ari"] = ari(clusters.assignments, dataset.labels->labels());
    result.train_seconds += report.seconds;
    if (!config.link_prediction) {
      result.final_loss = report.final.total;
      result.used_fastgae = report.used_fastgae;
    }
  }

  for (const auto& [name, value] : result.metrics) {
    if (!std::isfinite(value)) throw NonFiniteError("metric " + name + " is not finite");
  }
  if (!std::isfinite(result.final_loss)) throw NonFiniteError("final loss is not finite");

  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

MetricSummary summarize(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

TrainOptions train_options(const ExperimentConfig& config, Index n) {
  TrainOptions options;
  options.iterations = config.iterations;
  options.adam.learning_rate = config.lr;
  options.loss.kl_scale = config.kl_scale > 0.0 ? config.kl_scale : 1.0 / static_cast<double>(n);
  options.self_loops = config.self_loops;
  options.dropout = config.dropout;
  options.fastgae = config.fastgae;
  return options;
}

EdgeSplit link_split(const ExperimentConfig& config, const Dataset& dataset,
                     std::uint64_t seed) {
  return split_edges(dataset.graph, config.mask_val, config.mask_test,
                     RngStream::derive_seed(seed, "split"));
}

RunResult run_single(const ExperimentConfig& config, const Dataset& dataset,
                     std::uint64_t seed) {
  try {
    return run_single_impl(config, dataset, seed);
  } catch (const NonFiniteError& e) {
    throw e.with_context(run_context(config, seed));
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(run_context(config, seed) + ": " + e.what());
  } catch (const Error& e) {
    throw Error(run_context(config, seed) + ": " + e.what());
  }
}

RunResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
  return run_single(config, load_dataset(config), seed);
}

std::vector<RunResult> run_many(const ExperimentConfig& config, const Dataset& dataset) {
  config.validate();
  std::vector<RunResult> results;
  results.reserve(static_cast<std::size_t>(config.runs));
  for (Index j = 0; j < config.runs; ++j) {
    results.push_back(run_single(config, dataset, config.seed + static_cast<std::uint64_t>(j)));
  }
  return results;
}

GridSearchResult grid_search_lr(const ExperimentConfig& config, const Dataset& dataset,
                                std::span<const std::uint64_t> seeds) {
  if (config.lr_grid.empty()) throw InvalidArgument("grid search: lr-grid is empty");
  if (seeds.empty()) throw InvalidArgument("grid search: no seeds");
  if (config.mask_val <= 0.0) throw InvalidArgument("grid search: needs mask-val > 0");

  std::vector<double> grid = config.lr_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  GridSearchResult result;
  const GridPoint* best = nullptr;
  result.points.reserve(grid.size());
  for (double lr : grid) {
    ExperimentConfig c = config;
    c.lr = lr;
    c.link_prediction = true;
    c.community_detection = false;
    GridPoint point;
    point.lr = lr;
    try {
      double sum = 0.0;
      for (std::uint64_t s : seeds) sum += *run_single(c, dataset, s).validation_auc;
      point.mean_validation_auc = sum / static_cast<double>(seeds.size());
    } catch (const NonFiniteError& e) {
      point.excluded = true;
      point.reason = e.what();
    }
    result.points.push_back(point);
  }
  for (const GridPoint& p : result.points) {
    if (!p.excluded && (best == nullptr || p.mean_validation_auc > best->mean_validation_auc)) {
      best = &p;
    }
  }
  if (best == nullptr) throw Error("grid search: every learning rate produced a non-finite loss");
  result.best_lr = best->lr;
  return result;
}

const AggregateCell* AggregateReport::find(const CellKey& key) const {
  for (const AggregateCell& c : cells) {
    if (c.key == key) return &c;
  }
  return nullptr;
}

AggregateReport aggregate(std::span<const RunResult> results) {
  std::map<CellKey, std::vector<const RunResult*>> groups;
  for (const RunResult& r : results) {
    const CellKey key{r.config.dataset, r.config.use_features, r.config.model, r.config.ws};
    groups[key].push_back(&r);
  }

  AggregateReport report;
  report.rng_algorithm = std::string(RngStream::kAlgorithmId);
  report.commit = std::string(build_commit());
  for (auto& [key, runs] : groups) {
    const std::string where = "aggregate: cell " + key.dataset + "/" +
                              std::string(to_string(key.model)) + (key.ws ? "/ws" : "/nows");
    if (runs.size() < 2) throw InvalidArgument(where + " has fewer than 2 runs");
    std::sort(runs.begin(), runs.end(),
              [](const RunResult* a, const RunResult* b) { return a->seed < b->seed; });

    AggregateCell cell;
    cell.key = key;
    cell.runs = static_cast<Index>(runs.size());
    cell.experiment_hash = runs.front()->config.experiment_hash();
    std::set<std::string> names;
    for (const auto& [name, value] : runs.front()->metrics) names.insert(name);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const RunResult& r = *runs[i];
      if (r.config.experiment_hash() != cell.experiment_hash) {
        throw InvalidArgument(where + " mixes configurations");
      }
      if (i > 0 && r.seed == runs[i - 1]->seed) {
        throw InvalidArgument(where + " has seed " + std::to_string(r.seed) + " twice");
      }
      std::set<std::string> mine;
      for (const auto& [name, value] : r.metrics) mine.insert(name);
      if (mine != names) throw InvalidArgument(where + " mixes metric sets");
    }

    for (const std::string& name : names) {
      std::vector<double> values;
      for (const RunResult* r : runs) values.push_back(r->metrics.at(name));
      cell.metrics[name] = summarize(values);
    }
    std::vector<double> seconds;
    for (const RunResult* r : runs) seconds.push_back(r->train_seconds);
    cell.train_seconds = summarize(seconds);
    report.cells.push_back(std::move(cell));
  }
  report.verdicts = pair_verdicts(report.cells);
  return report;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kEquivalent:
      return "equivalent";
    case Verdict::kWsOutside:
      return "ws_outside";
    case Verdict::kNowsOutside:
      return "nows_outside";
  }
  return "equivalent";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "equivalent") return Verdict::kEquivalent;
  if (text == "ws_outside") return Verdict::kWsOutside;
  if (text == "nows_outside") return Verdict::kNowsOutside;
  throw InvalidArgument("unknown verdict '" + std::string(text) + "'");
}

std::vector<MetricVerdict> one_std_verdict(const AggregateCell& ws_cell,
                                           const AggregateCell& nows_cell) {
  const CellKey& a = ws_cell.key;
  const CellKey& b = nows_cell.key;
  if (!a.ws || b.ws) throw InvalidArgument("verdict: expected a ws cell and a no-ws cell");
  if (a.dataset != b.dataset || a.features != b.features || a.model != b.model) {
    throw InvalidArgument("verdict: cells differ in dataset, features or model");
  }
  if (ws_cell.metrics.size() != nows_cell.metrics.size()) {
    throw InvalidArgument("verdict: cells have different metric sets");
  }

  std::vector<MetricVerdict> out;
  for (const auto& [name, ws] : ws_cell.metrics) {
    const auto it = nows_cell.metrics.find(name);
    if (it == nows_cell.metrics.end()) {
      throw InvalidArgument("verdict: metric " + name + " missing from the no-ws cell");
    }
    const MetricSummary& nows = it->second;
    const double gap = std::abs(ws.mean - nows.mean);
    MetricVerdict v;
    v.metric = name;
    v.mean_ws = ws.mean;
    v.mean_nows = nows.mean;
    v.std_ws = ws.std;
    v.std_nows = nows.std;
    v.verdict = gap <= nows.std ? Verdict::kEquivalent : Verdict::kWsOutside;
    v.reverse = gap <= ws.std ? Verdict::kEquivalent : Verdict::kNowsOutside;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<PairedVerdict> pair_verdicts(std::span<const AggregateCell> cells) {
  std::vector<PairedVerdict> out;
  for (const AggregateCell& ws : cells) {
    if (!ws.key.ws) continue;
    CellKey other = ws.key;
    other.ws = false;
    for (const AggregateCell& nows : cells) {
      if (nows.key == other) {
        out.push_back({ws.key, one_std_verdict(ws, nows)});
        break;
      }
    }
  }
  return out;
}

std::string_view build_commit() { return WSVGAE_COMMIT; }

}  // namespace wsvgae
