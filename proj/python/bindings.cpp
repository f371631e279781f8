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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <utility>
#include <string>
#include <vector>

#include "wsvgae/error.hpp"
#include "wsvgae/graph.hpp"
#include "wsvgae/harness.hpp"
#include "wsvgae/metrics.hpp"
#include "wsvgae/model.hpp"

namespace py = pybind11;
using namespace wsvgae;

namespace {

using Pair = std::pair<Index, Index>;

std::vector<Pair> to_pairs(const std::vector<NodePair>& edges) {
  std::vector<Pair> out;
  out.reserve(edges.size());
  for (const NodePair& e : edges) out.emplace_back(e.first, e.second);
  return out;
}

std::vector<NodePair> from_pairs(const std::vector<Pair>& edges) {
  std::vector<NodePair> out;
  out.reserve(edges.size());
  for (const auto& [i, j] : edges) out.push_back({i, j});
  return out;
}

ExperimentConfig config_from(const std::map<std::string, std::string>& settings) {
  ExperimentConfig c;
  for (const auto& [key, value] : settings) c.set(key, value);
  c.validate();
  return c;
}

py::dict run_result(const RunResult& r) {
  py::dict out;
  out["seed"] = r.seed;
  out["metrics"] = r.metrics;
  out["validation_auc"] = r.validation_auc;
  out["train_seconds"] = r.train_seconds;
  out["final_loss"] = r.final_loss;
  out["lr"] = r.lr;
  out["used_fastgae"] = r.used_fastgae;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "VGAE training and evaluation with optional hidden-layer weight sharing";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NonFiniteError>(m, "NonFiniteError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("roc_auc",
        [](std::vector<double> scores, std::vector<int> labels) {
          return roc_auc(ScoredPairs{std::move(scores), std::move(labels)});
        },
        py::arg("scores"), py::arg("labels"));
  m.def("average_precision",
        [](std::vector<double> scores, std::vector<int> labels) {
          return average_precision(ScoredPairs{std::move(scores), std::move(labels)});
        },
        py::arg("scores"), py::arg("labels"),
        "Tied scores are ranked by position (stable order).");
  m.def("ami",
        [](const std::vector<Index>& a, const std::vector<Index>& b) { return ami(a, b); },
        py::arg("a"), py::arg("b"));
  m.def("ari",
        [](const std::vector<Index>& a, const std::vector<Index>& b) { return ari(a, b); },
        py::arg("a"), py::arg("b"));

  m.def("sbm",
        [](const std::vector<Index>& blocks, double p_in, double p_out, std::uint64_t seed) {
          const SbmGraph g = sbm_generate(blocks, p_in, p_out, seed);
          return py::make_tuple(to_pairs(g.graph.edges()), g.labels.labels());
        },
        py::arg("blocks"), py::arg("p_in"), py::arg("p_out"), py::arg("seed") = 0,
        "Returns (edges, labels) with edges as (i, j) pairs, i < j.");
  m.def("normalized_adjacency",
        [](Index n, const std::vector<Pair>& edges) {
          const std::vector<NodePair> e = from_pairs(edges);
          return DenseMatrix(normalize(SparseGraph::from_edges(n, e)).matrix().to_dense());
        },
        py::arg("n"), py::arg("edges"));
  m.def("param_count",
        [](Index input_dim, const std::vector<Index>& hidden, Index latent, bool ws) {
          RngStream rng(0);
          return param_count(EncoderParams::init(input_dim, hidden, latent, ws, rng));
        },
        py::arg("input_dim"), py::arg("hidden"), py::arg("latent"), py::arg("ws"));

  m.def("config_text",
        [](const std::map<std::string, std::string>& settings) {
          return config_from(settings).to_text();
        },
        py::arg("settings") = std::map<std::string, std::string>{},
        "Canonical config text for the given key/value overrides.");
  m.def("run",
        [](const std::map<std::string, std::string>& settings, std::uint64_t seed) {
          const ExperimentConfig c = config_from(settings);
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run_single(c, seed);
          }
          return run_result(r);
        },
        py::arg("settings"), py::arg("seed") = 0,
        "One seeded run; settings use the config-file keys.");
}
