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
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wsvgae/error.hpp"
#include "wsvgae/graph.hpp"

namespace wsvgae {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

bool is_comment_or_blank(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens.front().starts_with('#');
}

std::int64_t parse_id(std::string_view tok, std::int64_t line_no,
                      const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
    throw ParseError(std::string("expected a nonnegative integer ") + what +
                         ", got '" + std::string(tok) + "'",
                     line_no);
  }
  return value;
}

double parse_double(std::string_view tok, std::int64_t line_no,
                    const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw ParseError(std::string("expected a finite number for ") + what +
                         ", got '" + std::string(tok) + "'",
                     line_no);
  }
  return value;
}

std::unordered_map<std::int64_t, Index> index_of(
    std::span<const std::int64_t> original_ids) {
  std::unordered_map<std::int64_t, Index> out;
  out.reserve(original_ids.size());
  for (std::size_t i = 0; i < original_ids.size(); ++i) {
    out.emplace(original_ids[i], static_cast<Index>(i));
  }
  return out;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in, EdgeListFormat format) {
  LoadedGraph out;
  std::unordered_map<std::int64_t, Index> dense;
  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = dense.emplace(id, static_cast<Index>(dense.size()));
    if (inserted) out.original_ids.push_back(id);
    return it->second;
  };

  std::vector<NodePair> edges;
  std::vector<double> weights;
  const bool weighted = format == EdgeListFormat::kTsvWeighted;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (is_comment_or_blank(tokens)) continue;
    const bool shape_ok = weighted ? (tokens.size() == 2 || tokens.size() == 3)
                                   : tokens.size() == 2;
    if (!shape_ok) {
      throw ParseError(weighted ? "expected 'u v [w]'" : "expected 'u v'",
                       line_no);
    }
    const std::int64_t u = parse_id(tokens[0], line_no, "node id");
    const std::int64_t v = parse_id(tokens[1], line_no, "node id");
    double w = 1.0;
    if (tokens.size() == 3) {
      w = parse_double(tokens[2], line_no, "edge weight");
      if (w < 0.0) throw ParseError("negative edge weight", line_no);
    }
    edges.push_back({intern(u), intern(v)});
    if (weighted) weights.push_back(w);
  }
  out.graph = SparseGraph::from_edges(static_cast<Index>(out.original_ids.size()),
                                      edges, weights);
  if (out.graph.m() == 0) throw ParseError("empty graph: no edges", 0);
  return out;
}

CommunityLabels load_labels(std::istream& in,
                            std::span<const std::int64_t> original_ids) {
  const auto dense = index_of(original_ids);
  std::vector<std::int64_t> raw(original_ids.size(), -1);
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (is_comment_or_blank(tokens)) continue;
    if (tokens.size() != 2) throw ParseError("expected 'node_id label_id'", line_no);
    const std::int64_t node = parse_id(tokens[0], line_no, "node id");
    const std::int64_t label = parse_id(tokens[1], line_no, "label id");
    const auto it = dense.find(node);
    // Labels for nodes absent from the edge list are ignored.
    if (it == dense.end()) continue;
    raw[it->second] = label;
  }
  std::vector<std::int64_t> distinct;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) {
      throw ParseError("node " + std::to_string(original_ids[i]) +
                           " has no label",
                       0);
    }
    distinct.push_back(raw[i]);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<Index> labels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    labels[i] = std::lower_bound(distinct.begin(), distinct.end(), raw[i]) -
                distinct.begin();
  }
  return CommunityLabels(std::move(labels));
}

FeatureMatrix load_features(std::istream& in,
                            std::span<const std::int64_t> original_ids,
                            Index dim_hint) {
  const auto dense = index_of(original_ids);
  struct Triplet {
    Index row;
    std::int64_t col;
    double value;
  };
  std::vector<Triplet> triplets;
  std::int64_t max_dim = -1;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (is_comment_or_blank(tokens)) continue;
    if (tokens.size() != 3) throw ParseError("expected 'node_id dim value'", line_no);
    const std::int64_t node = parse_id(tokens[0], line_no, "node id");
    const std::int64_t dim = parse_id(tokens[1], line_no, "feature dim");
    const double value = parse_double(tokens[2], line_no, "feature value");
    if (dim_hint > 0 && dim >= dim_hint) {
      throw ParseError("feature dim " + std::to_string(dim) +
                           " exceeds declared dimension",
                       line_no);
    }
    const auto it = dense.find(node);
    if (it == dense.end()) continue;
    triplets.push_back({it->second, dim, value});
    max_dim = std::max(max_dim, dim);
  }
  const Index f = dim_hint > 0 ? dim_hint : static_cast<Index>(max_dim + 1);
  if (f <= 0) throw ParseError("feature file has no entries", 0);
  DenseMatrix values = DenseMatrix::Zero(static_cast<Index>(original_ids.size()), f);
  for (const auto& t : triplets) values(t.row, t.col) = t.value;
  return FeatureMatrix::dense(std::move(values));
}

}  // namespace wsvgae
