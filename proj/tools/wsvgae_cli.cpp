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

// wsvgae: train and benchmark VGAE encoders with and without hidden-layer
// weight sharing.
//
//   wsvgae run --dataset cora --runs 10 --out cora_ws.json
//   wsvgae run --dataset cora --no-ws --runs 10 --out cora_nows.json
//   wsvgae compare cora_ws.json cora_nows.json --format md
//   wsvgae gridsearch --dataset cora --lr-grid 0.005,0.01,0.05
//   wsvgae gen-sbm --blocks 500,500 --p-in 0.02 --p-out 0.002 --out data/sbm1k

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wsvgae/error.hpp"
#include "wsvgae/harness.hpp"

namespace {

using namespace wsvgae;

// Flags that map one-to-one onto config keys. Values are kept as text and
// applied through ExperimentConfig::set, so the file and the flags share one
// parser.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool features = false, ws = true;
  CLI::Option* features_opt = nullptr;
  CLI::Option* ws_opt = nullptr;
  std::vector<std::string> sets;

  void add(CLI::App& app, const std::string& key, const std::string& help) {
    options[key] = app.add_option("--" + key, values[key], help);
  }

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key = value file; flags override it")
        ->check(CLI::ExistingFile);
    add(app, "dataset", "registry name, or 'sbm' to generate from --sbm-* keys");
    add(app, "data-root", "dataset registry root");
    features_opt = app.add_flag("--features,!--no-features", features, "use node features");
    add(app, "model", "vgae or deep-vgae");
    ws_opt = app.add_flag("--ws,!--no-ws", ws, "share hidden weights across towers");
    add(app, "runs", "seeded runs");
    add(app, "seed", "first seed");
    add(app, "lr", "Adam learning rate");
    add(app, "lr-grid", "comma-separated rates; selects lr by validation AUC");
    add(app, "iterations", "training iterations");
    add(app, "d", "latent dimension");
    add(app, "dh", "hidden width(s), comma-separated");
    add(app, "mask-val", "fraction of edges held out for validation");
    add(app, "mask-test", "fraction of edges held out for testing");
    add(app, "fastgae-threshold", "subgraph decoding above this many nodes");
    add(app, "tasks", "link, community or link,community");
    app.add_option("--set", sets, "any config key as key=value (repeatable)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    if (!config_file.empty()) c = load_config_file(config_file);
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
      c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) c.set(key, values.at(key));
    }
    if (features_opt->count() > 0) c.use_features = features;
    if (ws_opt->count() > 0) c.ws = ws;
    c.validate();
    return c;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::uint64_t> grid_seed_list(const ExperimentConfig& c) {
  std::vector<std::uint64_t> seeds;
  for (Index j = 0; j < c.grid_seeds; ++j) seeds.push_back(c.seed + static_cast<std::uint64_t>(j));
  return seeds;
}

void print_grid(const GridSearchResult& g, std::ostream& out) {
  out << "lr\tmean_val_auc\tstatus\n";
  for (const GridPoint& p : g.points) {
    out << p.lr << '\t';
    if (p.excluded) {
      out << "-\texcluded: " << p.reason << '\n';
    } else {
      out << std::fixed << std::setprecision(4) << p.mean_validation_auc << std::defaultfloat
          << '\t' << (p.lr == g.best_lr ? "best" : "") << '\n';
    }
  }
}

std::string describe(const RunResult& r) {
  std::ostringstream s;
  s << "seed " << r.seed << " ws=" << (r.config.ws ? "true" : "false");
  for (const auto& [name, value] : r.metrics) s << ' ' << name << '=' << std::setprecision(4) << value;
  s << " train_s=" << std::setprecision(3) << r.train_seconds;
  return s.str();
}

int cmd_run(const ConfigFlags& flags, bool paired, const std::string& out,
            const std::string& format_text) {
  const ReportFormat format = parse_report_format(format_text);
  ExperimentConfig c = flags.resolve();
  const Dataset ds = load_dataset(c);
  std::cerr << "dataset " << c.dataset << ": n=" << ds.graph.n() << " m=" << ds.graph.m() << "\n";
  if (!c.lr_grid.empty()) {
    const GridSearchResult g = grid_search_lr(c, ds, grid_seed_list(c));
    print_grid(g, std::cerr);
    c.lr = g.best_lr;
  }
  std::vector<RunResult> results;
  std::vector<bool> sides = {c.ws};
  if (paired) sides = {true, false};
  for (bool ws : sides) {
    ExperimentConfig side = c;
    side.ws = ws;
    for (Index j = 0; j < side.runs; ++j) {
      results.push_back(run_single(side, ds, side.seed + static_cast<std::uint64_t>(j)));
      std::cerr << describe(results.back()) << "\n";
    }
  }
  if (!out.empty()) write_text(out, emit_results_json(results));
  if (c.runs >= 2) std::cout << emit_report(aggregate(results), format);
  return 0;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& out,
                const std::string& format_text) {
  const ReportFormat format = parse_report_format(format_text);
  std::vector<RunResult> all;
  for (const std::string& f : files) {
    for (RunResult& r : parse_results_json(read_text(f))) all.push_back(std::move(r));
  }
  const AggregateReport report = aggregate(all);
  if (report.verdicts.empty()) {
    std::cerr << "compare: no ws/no-ws pair among the inputs\n";
  }
  write_text(out, emit_report(report, format));
  return 0;
}

int cmd_gridsearch(const ConfigFlags& flags) {
  const ExperimentConfig c = flags.resolve();
  if (c.lr_grid.empty()) throw InvalidArgument("gridsearch: --lr-grid is required");
  const GridSearchResult g = grid_search_lr(c, load_dataset(c), grid_seed_list(c));
  print_grid(g, std::cout);
  return 0;
}

int cmd_gen_sbm(const std::vector<Index>& blocks, double p_in, double p_out, std::uint64_t seed,
                const std::string& out, const std::string& name) {
  const SbmGraph sbm = sbm_generate(blocks, p_in, p_out, seed);
  Dataset ds;
  ds.name = name;
  ds.graph = sbm.graph;
  ds.labels = sbm.labels;
  write_registry_dataset(out, ds);
  std::cerr << "wrote " << out << ": n=" << ds.graph.n() << " m=" << ds.graph.m() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VGAE training and benchmarking with optional hidden-layer weight sharing"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  bool paired = false;
  std::string run_out, run_format = "md";
  CLI::App* run = app.add_subcommand("run", "train and evaluate over seeded runs");
  run_flags.attach(*run);
  run->add_flag("--paired", paired, "run both ws and no-ws on the same seeds");
  run->add_option("--out", run_out, "per-run results file (json)");
  run->add_option("--format", run_format, "report format: md, csv or json");

  std::vector<std::string> files;
  std::string cmp_out, cmp_format = "md";
  CLI::App* compare = app.add_subcommand("compare", "aggregate result files into a verdict table");
  compare->add_option("files", files, "results files written by run --out")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--out", cmp_out, "write the report here instead of stdout");
  compare->add_option("--format", cmp_format, "md, csv or json");

  ConfigFlags grid_flags;
  CLI::App* grid = app.add_subcommand("gridsearch", "mean validation AUC per learning rate");
  grid_flags.attach(*grid);

  std::vector<Index> blocks;
  double p_in = 0.0, p_out = 0.0;
  std::uint64_t sbm_seed = 0;
  std::string sbm_out, sbm_name = "sbm";
  CLI::App* gen = app.add_subcommand("gen-sbm", "write a planted-partition graph as a dataset");
  gen->add_option("--blocks", blocks, "block sizes")->required()->delimiter(',');
  gen->add_option("--p-in", p_in, "within-block edge probability")->required();
  gen->add_option("--p-out", p_out, "between-block edge probability")->required();
  gen->add_option("--seed", sbm_seed, "generator seed");
  gen->add_option("--out", sbm_out, "dataset directory")->required();
  gen->add_option("--name", sbm_name, "dataset name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags, paired, run_out, run_format);
    if (*compare) return cmd_compare(files, cmp_out, cmp_format);
    if (*grid) return cmd_gridsearch(grid_flags);
    if (*gen) return cmd_gen_sbm(blocks, p_in, p_out, sbm_seed, sbm_out, sbm_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
