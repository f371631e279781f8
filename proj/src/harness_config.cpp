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
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "wsvgae/error.hpp"
#include "wsvgae/harness.hpp"

namespace wsvgae {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string canonical_key(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("config: bad value '" + std::string(text) + "' for " +
                          std::string(key));
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InvalidArgument("config: bad boolean '" + std::string(text) + "' for " +
                        std::string(key));
}

std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("dataset: cannot open " + file.string());
  std::map<std::string, std::string> entries;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("manifest: expected 'key = value'", line_no);
    }
    entries[canonical_key(body.substr(0, eq))] = std::string(trim(body.substr(eq + 1)));
  }
  return entries;
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("dataset: cannot open " + file.string());
  return in;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kVgae ? "vgae" : "deep-vgae";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "vgae") return ModelKind::kVgae;
  if (text == "deep-vgae" || text == "deep") return ModelKind::kDeepVgae;
  throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

std::vector<Index> ExperimentConfig::hidden_dims() const {
  const std::size_t layers = model == ModelKind::kVgae ? 1 : 2;
  if (dh.size() == layers) return dh;
  if (dh.size() == 1) return std::vector<Index>(layers, dh.front());
  throw InvalidArgument("config: dh needs 1 or " + std::to_string(layers) +
                        " entries for " + std::string(to_string(model)));
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("config: ") + what);
  };
  require(!dataset.empty(), "dataset is empty");
  require(d >= 1, "d must be >= 1");
  require(!dh.empty(), "dh is empty");
  for (Index h : dh) require(h >= 1, "dh entries must be >= 1");
  (void)hidden_dims();
  require(iterations >= 1, "iterations must be >= 1");
  require(std::isfinite(lr) && lr > 0.0, "lr must be positive");
  for (double g : lr_grid) require(std::isfinite(g) && g > 0.0, "lr-grid entries must be positive");
  require(grid_seeds >= 1, "grid-seeds must be >= 1");
  require(runs >= 1, "runs must be >= 1");
  require(mask_val >= 0.0 && mask_test >= 0.0 && mask_val + mask_test < 1.0,
          "mask fractions must be >= 0 and sum to < 1");
  require(link_prediction || community_detection, "no task selected");
  require(fastgae.sample_size >= 1, "fastgae-nodes must be >= 1");
  require(fastgae.node_threshold >= 0, "fastgae-threshold must be >= 0");
  require(std::isfinite(fastgae.alpha) && fastgae.alpha >= 0.0, "fastgae-alpha must be >= 0");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  require(std::isfinite(kl_scale), "kl-scale must be finite");
  require(kmeans_restarts >= 1 && kmeans_max_iter >= 1, "kmeans settings must be >= 1");
  if (dataset == "sbm") {
    require(sbm_blocks.size() >= 2, "sbm-blocks needs at least 2 blocks");
    require(sbm_p_in >= 0.0 && sbm_p_in <= 1.0 && sbm_p_out >= 0.0 && sbm_p_out <= 1.0,
            "sbm probabilities must be in [0, 1]");
  }
}

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
  const std::string key = canonical_key(raw_key);
  const std::string_view value = trim(raw_value);
  auto index = [&] { return parse_number<Index>(key, value); };
  auto real = [&] { return parse_number<double>(key, value); };
  auto flag = [&] { return parse_bool(key, value); };

  if (key == "dataset") {
    dataset = value;
  } else if (key == "data-root") {
    data_root = value;
  } else if (key == "features") {
    use_features = flag();
  } else if (key == "model") {
    model = parse_model_kind(value);
  } else if (key == "ws") {
    ws = flag();
  } else if (key == "d") {
    d = index();
  } else if (key == "dh") {
    dh.clear();
    for (auto item : split_list(value)) dh.push_back(parse_number<Index>(key, item));
  } else if (key == "iterations") {
    iterations = index();
  } else if (key == "lr") {
    lr = real();
  } else if (key == "lr-grid") {
    lr_grid.clear();
    for (auto item : split_list(value)) lr_grid.push_back(parse_number<double>(key, item));
  } else if (key == "grid-seeds") {
    grid_seeds = index();
  } else if (key == "runs") {
    runs = index();
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "mask-val") {
    mask_val = real();
  } else if (key == "mask-test") {
    mask_test = real();
  } else if (key == "fastgae") {
    fastgae.enabled = flag();
  } else if (key == "fastgae-threshold") {
    fastgae.node_threshold = index();
  } else if (key == "fastgae-nodes") {
    fastgae.sample_size = index();
  } else if (key == "fastgae-alpha") {
    fastgae.alpha = real();
  } else if (key == "tasks") {
    link_prediction = false;
    community_detection = false;
    for (auto item : split_list(value)) {
      if (item == "link") {
        link_prediction = true;
      } else if (item == "community") {
        community_detection = true;
      } else {
        throw InvalidArgument("config: unknown task '" + std::string(item) + "'");
      }
    }
  } else if (key == "dropout") {
    dropout = real();
  } else if (key == "kl-scale") {
    kl_scale = real();
  } else if (key == "self-loops") {
    self_loops = flag();
  } else if (key == "kmeans-restarts") {
    kmeans_restarts = index();
  } else if (key == "kmeans-max-iter") {
    kmeans_max_iter = index();
  } else if (key == "sbm-blocks") {
    sbm_blocks.clear();
    for (auto item : split_list(value)) sbm_blocks.push_back(parse_number<Index>(key, item));
  } else if (key == "sbm-p-in") {
    sbm_p_in = real();
  } else if (key == "sbm-p-out") {
    sbm_p_out = real();
  } else if (key == "sbm-seed") {
    sbm_seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

std::string ExperimentConfig::to_text() const {
  std::string tasks;
  if (link_prediction) tasks = "link";
  if (community_detection) tasks += tasks.empty() ? "community" : ",community";

  std::ostringstream out;
  auto line = [&](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto yes = [](bool b) { return std::string(b ? "true" : "false"); };
  line("dataset", dataset);
  line("data-root", data_root);
  line("features", yes(use_features));
  line("model", std::string(to_string(model)));
  line("ws", yes(ws));
  line("d", std::to_string(d));
  line("dh", join(dh));
  line("iterations", std::to_string(iterations));
  line("lr", fmt(lr));
  line("lr-grid", join(lr_grid));
  line("grid-seeds", std::to_string(grid_seeds));
  line("runs", std::to_string(runs));
  line("seed", std::to_string(seed));
  line("mask-val", fmt(mask_val));
  line("mask-test", fmt(mask_test));
  line("fastgae", yes(fastgae.enabled));
  line("fastgae-threshold", std::to_string(fastgae.node_threshold));
  line("fastgae-nodes", std::to_string(fastgae.sample_size));
  line("fastgae-alpha", fmt(fastgae.alpha));
  line("tasks", tasks);
  line("dropout", fmt(dropout));
  line("kl-scale", fmt(kl_scale));
  line("self-loops", yes(self_loops));
  line("kmeans-restarts", std::to_string(kmeans_restarts));
  line("kmeans-max-iter", std::to_string(kmeans_max_iter));
  line("sbm-blocks", join(sbm_blocks));
  line("sbm-p-in", fmt(sbm_p_in));
  line("sbm-p-out", fmt(sbm_p_out));
  line("sbm-seed", std::to_string(sbm_seed));
  return out.str();
}

std::uint64_t ExperimentConfig::experiment_hash() const {
  ExperimentConfig c = *this;
  c.ws = true;
  c.seed = 0;
  c.runs = 1;
  return fnv1a(c.to_text());
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::int64_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("config: expected 'key = value'", line_no);
    try {
      base.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

Dataset load_registry_dataset(const std::filesystem::path& dir) {
  const auto manifest = read_manifest(dir / "manifest.txt");
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = manifest.find(key);
    return it == manifest.end() ? nullptr : &it->second;
  };

  const std::string* edges = get("edges");
  if (edges == nullptr) throw InvalidArgument("dataset: manifest has no 'edges' entry");
  EdgeListFormat format = EdgeListFormat::kTsvPairs;
  if (const std::string* f = get("format")) {
    if (*f == "tsv-weighted") {
      format = EdgeListFormat::kTsvWeighted;
    } else if (*f != "tsv-pairs") {
      throw InvalidArgument("dataset: unknown edge format '" + *f + "'");
    }
  }

  Dataset ds;
  const std::string* name = get("name");
  ds.name = name != nullptr ? *name : dir.filename().string();
  auto edge_in = open_or_throw(dir / *edges);
  LoadedGraph loaded = load_edge_list(edge_in, format);
  ds.graph = std::move(loaded.graph);

  if (const std::string* features = get("features")) {
    Index dim = 0;
    if (const std::string* hint = get("feature-dim")) dim = parse_number<Index>("feature-dim", *hint);
    auto in = open_or_throw(dir / *features);
    ds.features = load_features(in, loaded.original_ids, dim);
  }
  if (const std::string* labels = get("labels")) {
    auto in = open_or_throw(dir / *labels);
    ds.labels = load_labels(in, loaded.original_ids);
  }
  return ds;
}

bool registry_has(const std::filesystem::path& root, std::string_view name) {
  return std::filesystem::is_regular_file(root / std::string(name) / "manifest.txt");
}

Dataset load_dataset(const ExperimentConfig& config) {
  if (config.dataset == "sbm") {
    SbmGraph g = sbm_generate(config.sbm_blocks, config.sbm_p_in, config.sbm_p_out,
                              config.sbm_seed);
    return Dataset{"sbm", std::move(g.graph), std::nullopt, std::move(g.labels)};
  }
  const std::filesystem::path dir = std::filesystem::path(config.data_root) / config.dataset;
  if (!registry_has(config.data_root, config.dataset)) {
    throw InvalidArgument("dataset '" + config.dataset + "' not found under " +
                          std::filesystem::path(config.data_root).string());
  }
  return load_registry_dataset(dir);
}

void write_registry_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* file) {
    std::ofstream out(dir / file);
    if (!out) throw InvalidArgument("dataset: cannot write " + (dir / file).string());
    return out;
  };

  const SparseGraph& g = dataset.graph;
  // Nodes exist on load only through their edges.
  for (Index i = 0; i < g.n(); ++i) {
    if (g.degree(i) == 0) {
      throw InvalidArgument("dataset: node " + std::to_string(i) +
                            " is isolated and cannot be written as an edge list");
    }
  }
  {
    auto out = open("edges.txt");
    const auto edges = g.edges();
    const auto weights = g.edge_weights();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      out << edges[e].first << '\t' << edges[e].second;
      if (g.weighted()) out << '\t' << fmt(weights[e]);
      out << '\n';
    }
  }
  auto manifest = open("manifest.txt");
  manifest << "name = " << dataset.name << '\n';
  manifest << "edges = edges.txt\n";
  manifest << "format = " << (g.weighted() ? "tsv-weighted" : "tsv-pairs") << '\n';
  if (dataset.labels) {
    auto out = open("labels.txt");
    const auto& labels = dataset.labels->labels();
    for (Index i = 0; i < g.n(); ++i) out << i << '\t' << labels[i] << '\n';
    manifest << "labels = labels.txt\n";
  }
  if (dataset.features && !dataset.features->is_identity()) {
    auto out = open("features.txt");
    const DenseMatrix& x = dataset.features->values();
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < x.cols(); ++j) {
        if (x(i, j) != 0.0) out << i << '\t' << j << '\t' << fmt(x(i, j)) << '\n';
      }
    }
    manifest << "features = features.txt\n";
    manifest << "feature-dim = " << x.cols() << '\n';
  }
}

}  // namespace wsvgae
