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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wsvgae/error.hpp"
#include "wsvgae/harness.hpp"

namespace wsvgae {
namespace {

namespace fs = std::filesystem;

ExperimentConfig sbm_config(std::uint64_t graph_seed) {
  ExperimentConfig c;
  c.dataset = "sbm";
  c.sbm_blocks = {30, 30};
  c.sbm_p_in = 0.9;
  c.sbm_p_out = 0.05;
  c.sbm_seed = graph_seed;
  return c;
}

RunResult fake_run(const std::string& dataset, bool ws, std::uint64_t seed,
                   std::map<std::string, double> metrics) {
  RunResult r;
  r.config.dataset = dataset;
  r.config.ws = ws;
  r.seed = seed;
  r.metrics = std::move(metrics);
  r.train_seconds = 1.0 + 0.1 * static_cast<double>(seed);
  return r;
}

AggregateCell cell(bool ws, std::map<std::string, MetricSummary> metrics) {
  AggregateCell c;
  c.key = CellKey{"blogs", false, ModelKind::kVgae, ws};
  c.runs = 100;
  c.metrics = std::move(metrics);
  return c;
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wsvgae_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Config, DefaultsMirrorTheProtocol) {
  const ExperimentConfig c;
  EXPECT_EQ(c.d, 16);
  EXPECT_EQ(c.dh, std::vector<Index>{32});
  EXPECT_EQ(c.iterations, 300);
  EXPECT_EQ(c.runs, 100);
  EXPECT_DOUBLE_EQ(c.mask_val, 0.05);
  EXPECT_DOUBLE_EQ(c.mask_test, 0.10);
  EXPECT_EQ(c.fastgae.node_threshold, 20000);
  EXPECT_EQ(c.fastgae.sample_size, 5000);
  EXPECT_EQ(c.dropout, 0.0);
  EXPECT_EQ(c.kmeans_restarts, 10);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParseFileAndOverride) {
  const ExperimentConfig c = parse_config(
      "# experiment\n"
      "dataset = citeseer\n"
      "model = deep-vgae\n"
      "ws = false\n"
      "lr_grid = 0.01, 0.02,0.03\n"
      "mask-test = 0.2\n"
      "dh = 64\n"
      "tasks = link\n");
  EXPECT_EQ(c.dataset, "citeseer");
  EXPECT_EQ(c.model, ModelKind::kDeepVgae);
  EXPECT_FALSE(c.ws);
  EXPECT_EQ(c.lr_grid, (std::vector<double>{0.01, 0.02, 0.03}));
  EXPECT_DOUBLE_EQ(c.mask_test, 0.2);
  EXPECT_EQ(c.hidden_dims(), (std::vector<Index>{64, 64}));
  EXPECT_TRUE(c.link_prediction);
  EXPECT_FALSE(c.community_detection);

  // Later settings (flags) override the file.
  ExperimentConfig o = c;
  o.set("ws", "true");
  o.set("mask_test", "0.1");
  EXPECT_TRUE(o.ws);
  EXPECT_DOUBLE_EQ(o.mask_test, 0.1);

  // parse_config layers on top of a base.
  const ExperimentConfig layered = parse_config("runs = 7\n", c);
  EXPECT_EQ(layered.runs, 7);
  EXPECT_EQ(layered.dataset, "citeseer");
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_config("dataset = cora\nbogus-key = 1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  try {
    parse_config("runs = many\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  EXPECT_THROW(parse_config("no equals sign\n"), ParseError);
  ExperimentConfig c;
  EXPECT_THROW(c.set("ws", "maybe"), InvalidArgument);
}

TEST(Config, ValidationRejectsBadValues) {
  ExperimentConfig c;
  c.mask_val = 0.6;
  c.mask_test = 0.5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ExperimentConfig{};
  c.runs = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ExperimentConfig{};
  c.link_prediction = c.community_detection = false;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Config, TextRoundTripAndHash) {
  ExperimentConfig c = sbm_config(3);
  c.lr_grid = {0.01, 0.05};
  c.dropout = 0.25;
  const ExperimentConfig back = parse_config(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());

  ExperimentConfig other = c;
  other.ws = false;
  other.seed = 99;
  other.runs = 5;
  EXPECT_EQ(other.experiment_hash(), c.experiment_hash());
  other.lr = 0.02;
  EXPECT_NE(other.experiment_hash(), c.experiment_hash());
}

TEST(Registry, WriteThenLoad) {
  const fs::path root = temp_dir("registry");
  const std::vector<Index> blocks = {6, 6};
  SbmGraph sbm = sbm_generate(blocks, 1.0, 0.1, 2);
  Dataset ds;
  ds.name = "toy";
  ds.graph = sbm.graph;
  ds.labels = sbm.labels;
  DenseMatrix x = DenseMatrix::Zero(12, 3);
  for (Index i = 0; i < 12; ++i) x(i, i % 3) = 1.0 + static_cast<double>(i) / 8.0;
  ds.features = FeatureMatrix::dense(x);
  write_registry_dataset(root / "toy", ds);

  EXPECT_TRUE(registry_has(root, "toy"));
  EXPECT_FALSE(registry_has(root, "cora"));
  const Dataset back = load_registry_dataset(root / "toy");
  EXPECT_EQ(back.graph.n(), 12);
  EXPECT_EQ(back.graph.m(), ds.graph.m());
  ASSERT_TRUE(back.labels.has_value());
  ASSERT_TRUE(back.features.has_value());
  EXPECT_EQ(back.features->dim(), 3);

  // Re-indexing by first appearance may permute nodes; compare through the
  // edge structure and label agreement.
  ExperimentConfig c;
  c.dataset = "toy";
  c.data_root = root.string();
  const Dataset via_config = load_dataset(c);
  EXPECT_EQ(via_config.graph.m(), ds.graph.m());
  fs::remove_all(root);
}

TEST(Registry, MissingDatasetNamesThePath) {
  ExperimentConfig c;
  c.dataset = "absent";
  c.data_root = temp_dir("empty").string();
  try {
    load_dataset(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("absent"), std::string::npos);
  }
}

TEST(Registry, SbmDatasetIsGenerated) {
  const Dataset ds = load_dataset(sbm_config(1));
  EXPECT_EQ(ds.graph.n(), 60);
  ASSERT_TRUE(ds.labels.has_value());
  EXPECT_EQ(ds.labels->k(), 2);
}

TEST(RunSingle, DeterministicGivenConfigAndSeed) {
  ExperimentConfig c = sbm_config(5);
  c.iterations = 60;
  const Dataset ds = load_dataset(c);
  const RunResult a = run_single(c, ds, 11);
  const RunResult b = run_single(c, ds, 11);
  EXPECT_EQ(a.metrics, b.metrics);
  EXPECT_EQ(a.validation_auc, b.validation_auc);
  EXPECT_EQ(a.final_loss, b.final_loss);
  EXPECT_EQ(a.lr, b.lr);
  EXPECT_EQ(a.metrics.count("auc"), 1u);
  EXPECT_EQ(a.metrics.count("ap"), 1u);
  EXPECT_EQ(a.metrics.count("ami"), 1u);
  EXPECT_EQ(a.metrics.count("ari"), 1u);
  const RunResult other = run_single(c, ds, 12);
  EXPECT_NE(a.metrics, other.metrics);
}

TEST(RunSingle, MetricsOnlyForConfiguredTasks) {
  ExperimentConfig c = sbm_config(5);
  c.iterations = 20;
  c.community_detection = false;
  const RunResult r = run_single(c, load_dataset(c), 1);
  EXPECT_EQ(r.metrics.size(), 2u);
  c.community_detection = true;
  c.link_prediction = false;
  const RunResult q = run_single(c, load_dataset(c), 1);
  EXPECT_EQ(q.metrics.size(), 2u);
  EXPECT_EQ(q.metrics.count("ami"), 1u);
  EXPECT_FALSE(q.validation_auc.has_value());
}

TEST(RunSingle, PairedRunsShareTheSplit) {
  ExperimentConfig c = sbm_config(2);
  const Dataset ds = load_dataset(c);
  ExperimentConfig nows = c;
  nows.ws = false;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const EdgeSplit a = link_split(c, ds, seed);
    const EdgeSplit b = link_split(nows, ds, seed);
    EXPECT_EQ(a.test_pos, b.test_pos);
    EXPECT_EQ(a.test_neg, b.test_neg);
    EXPECT_EQ(a.val_pos, b.val_pos);
    for (const NodePair& p : a.test_pos) EXPECT_FALSE(a.train_graph.has_edge(p.first, p.second));
  }
}

TEST(RunSingle, MissingLabelsAreReportedWithContext) {
  ExperimentConfig c = sbm_config(1);
  Dataset ds = load_dataset(c);
  ds.labels.reset();
  try {
    run_single(c, ds, 4);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("seed=4"), std::string::npos);
  }
}

TEST(RunSingle, PlantedPartitionIsRecovered) {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ExperimentConfig c = sbm_config(seed);
    c.community_detection = false;
    const RunResult r = run_single(c, load_dataset(c), seed);
    good += r.metrics.at("auc") > 0.85;
  }
  EXPECT_GE(good, 90);
}

TEST(RunSingle, FastGaeNeverActiveAtCitationScale) {
  const ExperimentConfig c;
  EXPECT_FALSE(train_options(c, 2708).fastgae.active_for(2708));
  EXPECT_FALSE(train_options(c, 3327).fastgae.active_for(3327));
  EXPECT_TRUE(train_options(c, 25000).fastgae.active_for(25000));
  EXPECT_DOUBLE_EQ(train_options(c, 100).loss.kl_scale, 0.01);
}

TEST(GridSearch, SingleValue) {
  ExperimentConfig c = sbm_config(1);
  c.iterations = 30;
  c.lr_grid = {0.02};
  const std::vector<std::uint64_t> seeds = {0, 1};
  const GridSearchResult r = grid_search_lr(c, load_dataset(c), seeds);
  EXPECT_EQ(r.best_lr, 0.02);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_FALSE(r.points[0].excluded);
}

TEST(GridSearch, DivergentRateIsExcluded) {
  ExperimentConfig c = sbm_config(1);
  c.lr_grid = {1e3, 0.01, 0.05};
  const std::vector<std::uint64_t> seeds = {0, 1};
  const GridSearchResult r = grid_search_lr(c, load_dataset(c), seeds);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_TRUE(r.points.back().excluded);
  EXPECT_EQ(r.points.back().lr, 1e3);
  EXPECT_NE(r.best_lr, 1e3);
  // The winner is at least as good as every other finite point.
  for (const GridPoint& p : r.points) {
    if (p.excluded) continue;
    const auto best = std::find_if(r.points.begin(), r.points.end(),
                                   [&](const GridPoint& q) { return q.lr == r.best_lr; });
    EXPECT_GE(best->mean_validation_auc, p.mean_validation_auc);
  }
}

TEST(GridSearch, AllDivergentIsAnError) {
  ExperimentConfig c = sbm_config(1);
  c.lr_grid = {1e3};
  // Seeds whose first step already overflows; others can stall on dead
  // ReLU units instead and stay finite.
  const std::vector<std::uint64_t> seeds = {1, 2};
  EXPECT_THROW(grid_search_lr(c, load_dataset(c), seeds), Error);
}

TEST(Aggregate, ConstantValues) {
  std::vector<RunResult> runs;
  for (std::uint64_t s = 0; s < 3; ++s) runs.push_back(fake_run("cora", true, s, {{"auc", 1.0}}));
  const AggregateReport r = aggregate(runs);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].metrics.at("auc").mean, 1.0);
  EXPECT_EQ(r.cells[0].metrics.at("auc").std, 0.0);
  EXPECT_EQ(r.cells[0].runs, 3);
  EXPECT_EQ(r.rng_algorithm, "mt19937_64/polar-v1");
}

TEST(Aggregate, SampleStandardDeviation) {
  std::vector<RunResult> runs = {fake_run("cora", true, 0, {{"auc", 0.8}}),
                                 fake_run("cora", true, 1, {{"auc", 0.9}})};
  const AggregateReport r = aggregate(runs);
  EXPECT_NEAR(r.cells[0].metrics.at("auc").mean, 0.85, 1e-15);
  EXPECT_NEAR(r.cells[0].metrics.at("auc").std, 0.070711, 1e-6);
}

TEST(Aggregate, OrderIndependent) {
  std::vector<RunResult> runs;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (std::uint64_t s = 0; s < 6; ++s) {
    runs.push_back(fake_run("cora", s % 2 == 0, s / 2, {{"auc", u(gen)}, {"ap", u(gen)}}));
    runs.push_back(fake_run("citeseer", true, s, {{"auc", u(gen)}, {"ap", u(gen)}}));
  }
  const AggregateReport a = aggregate(runs);
  std::shuffle(runs.begin(), runs.end(), gen);
  const AggregateReport b = aggregate(runs);
  EXPECT_EQ(a, b);
  EXPECT_EQ(emit_report(a, ReportFormat::kJson), emit_report(b, ReportFormat::kJson));
  ASSERT_EQ(a.verdicts.size(), 1u);
  EXPECT_EQ(a.verdicts[0].ws_cell.dataset, "cora");
}

TEST(Aggregate, RejectsBadCells) {
  std::vector<RunResult> single = {fake_run("cora", true, 0, {{"auc", 0.8}})};
  EXPECT_THROW(aggregate(single), InvalidArgument);

  std::vector<RunResult> mixed = {fake_run("cora", true, 0, {{"auc", 0.8}}),
                                  fake_run("cora", true, 1, {{"auc", 0.9}})};
  mixed[1].config.lr = 0.05;
  EXPECT_THROW(aggregate(mixed), InvalidArgument);

  std::vector<RunResult> dup = {fake_run("cora", true, 0, {{"auc", 0.8}}),
                                fake_run("cora", true, 0, {{"auc", 0.9}})};
  EXPECT_THROW(aggregate(dup), InvalidArgument);
}

TEST(Verdict, Examples) {
  const auto v = one_std_verdict(cell(true, {{"ami", {0.7393, 0.0050}}}),
                                 cell(false, {{"ami", {0.7383, 0.0081}}}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].verdict, Verdict::kEquivalent);

  const AggregateCell same_ws = cell(true, {{"auc", {0.8, 0.01}}});
  const AggregateCell same_nows = cell(false, {{"auc", {0.8, 0.01}}});
  EXPECT_EQ(one_std_verdict(same_ws, same_nows)[0].verdict, Verdict::kEquivalent);

  const auto far = one_std_verdict(cell(true, {{"auc", {10.0, 5.0}}}),
                                   cell(false, {{"auc", {20.0, 1.0}}}));
  EXPECT_EQ(far[0].verdict, Verdict::kWsOutside);
  EXPECT_EQ(far[0].reverse, Verdict::kNowsOutside);
  EXPECT_EQ(to_string(Verdict::kWsOutside), "ws_outside");
}

TEST(Verdict, MissingPairIsAnError) {
  EXPECT_THROW(one_std_verdict(cell(true, {{"auc", {0.8, 0.1}}}),
                               cell(false, {{"ap", {0.8, 0.1}}})),
               InvalidArgument);
  EXPECT_THROW(one_std_verdict(cell(true, {{"auc", {0.8, 0.1}}}),
                               cell(true, {{"auc", {0.8, 0.1}}})),
               InvalidArgument);
}

AggregateReport sample_report() {
  std::vector<RunResult> runs;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.3, 0.95);
  for (bool ws : {true, false}) {
    for (std::uint64_t s = 0; s < 4; ++s) {
      runs.push_back(fake_run("cora", ws, s,
                              {{"auc", u(gen)}, {"ap", u(gen)}, {"ami", u(gen)}, {"ari", u(gen)}}));
      RunResult deep = fake_run("my,\"odd\" set", ws, s, {{"auc", u(gen)}, {"ap", u(gen)}});
      deep.config.model = ModelKind::kDeepVgae;
      deep.config.use_features = true;
      runs.push_back(deep);
    }
  }
  return aggregate(runs);
}

TEST(Report, JsonRoundTripIsByteIdentical) {
  const AggregateReport r = sample_report();
  const std::string json = emit_report(r, ReportFormat::kJson);
  const AggregateReport back = parse_report(json, ReportFormat::kJson);
  EXPECT_EQ(back, r);
  EXPECT_EQ(emit_report(back, ReportFormat::kJson), json);
}

TEST(Report, CsvRoundTripIsLossless) {
  const AggregateReport r = sample_report();
  const std::string csv = emit_report(r, ReportFormat::kCsv);
  const AggregateReport back = parse_report(csv, ReportFormat::kCsv);
  EXPECT_EQ(back, r);
  EXPECT_EQ(emit_report(back, ReportFormat::kCsv), csv);
}

TEST(Report, CsvHeaderMatchesGoldenFile) {
  std::ifstream golden(std::string(WSVGAE_GOLDEN_DIR) + "/report_csv_header.txt");
  ASSERT_TRUE(golden.good());
  std::string expected;
  std::getline(golden, expected);
  std::istringstream csv(emit_report(sample_report(), ReportFormat::kCsv));
  std::string line;
  while (std::getline(csv, line) && line.starts_with('#')) {
  }
  EXPECT_EQ(line, expected);
}

TEST(Report, MarkdownUsesMeanPlusMinusStd) {
  EXPECT_EQ(format_mean_std(84.8612, 1.4789), "84.86 ± 1.48");
  AggregateReport r;
  r.rng_algorithm = "mt19937_64/polar-v1";
  r.commit = "abc";
  AggregateCell c;
  c.key = CellKey{"cora", false, ModelKind::kVgae, true};
  c.runs = 100;
  c.metrics["auc"] = {0.848612, 0.014789};
  r.cells.push_back(c);
  const std::string md = emit_report(r, ReportFormat::kMarkdown);
  EXPECT_NE(md.find("84.86 ± 1.48"), std::string::npos);
  EXPECT_NE(md.find("VGAE - WS"), std::string::npos);
  EXPECT_NE(md.find("rng: mt19937_64/polar-v1, commit: abc"), std::string::npos);
}

TEST(Report, ResultsFileRoundTrip) {
  ExperimentConfig c = sbm_config(3);
  c.iterations = 20;
  const Dataset ds = load_dataset(c);
  std::vector<RunResult> runs = {run_single(c, ds, 0), run_single(c, ds, 1)};
  const std::string text = emit_results_json(runs);
  const std::vector<RunResult> back = parse_results_json(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].metrics, runs[1].metrics);
  EXPECT_EQ(back[1].validation_auc, runs[1].validation_auc);
  EXPECT_EQ(back[1].final_loss, runs[1].final_loss);
  EXPECT_EQ(back[1].config.to_text(), runs[1].config.to_text());
  EXPECT_EQ(emit_results_json(back), text);
  EXPECT_EQ(aggregate(back), aggregate(runs));
}

TEST(Report, FormatNames) {
  EXPECT_EQ(parse_report_format("md"), ReportFormat::kMarkdown);
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::kCsv);
  EXPECT_THROW(parse_report_format("xml"), InvalidArgument);
  EXPECT_THROW(parse_report("x", ReportFormat::kMarkdown), InvalidArgument);
}

}  // namespace
}  // namespace wsvgae
