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

// Report and results-file serialization.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"
#include "wsvgae/error.hpp"
#include "wsvgae/harness.hpp"

namespace wsvgae {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kReportFormat = "wsvgae-report";
constexpr const char* kResultsFormat = "wsvgae-results";
constexpr int kVersion = 1;

constexpr std::string_view kCsvHeader =
    "dataset,features,model,ws,runs,experiment_hash,metric,mean,std";
constexpr std::string_view kTrainSecondsMetric = "train_seconds";

std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016" PRIx64, v);
  return buf.data();
}

std::uint64_t parse_hex64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("report: bad hash '" + std::string(s) + "'", 0);
  }
  return v;
}

double parse_double(std::string_view s, std::int64_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("report: bad number '" + std::string(s) + "'", line);
  }
  return v;
}

Json summary_json(const MetricSummary& s) { return Json{{"mean", s.mean}, {"std", s.std}}; }

MetricSummary summary_from(const Json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

Json key_json(const CellKey& k) {
  return Json{{"dataset", k.dataset},
              {"features", k.features},
              {"model", std::string(to_string(k.model))},
              {"ws", k.ws}};
}

CellKey key_from(const Json& j) {
  return {j.at("dataset").get<std::string>(), j.at("features").get<bool>(),
          parse_model_kind(j.at("model").get<std::string>()), j.at("ws").get<bool>()};
}

Json report_json(const AggregateReport& r) {
  Json cells = Json::array();
  for (const AggregateCell& c : r.cells) {
    Json j = key_json(c.key);
    j["runs"] = c.runs;
    j["experiment_hash"] = hex64(c.experiment_hash);
    Json metrics = Json::object();
    for (const auto& [name, s] : c.metrics) metrics[name] = summary_json(s);
    j["metrics"] = std::move(metrics);
    j["train_seconds"] = summary_json(c.train_seconds);
    cells.push_back(std::move(j));
  }
  Json verdicts = Json::array();
  for (const PairedVerdict& p : r.verdicts) {
    Json j = key_json(p.ws_cell);
    Json metrics = Json::array();
    for (const MetricVerdict& v : p.metrics) {
      metrics.push_back(Json{{"metric", v.metric},
                             {"mean_ws", v.mean_ws},
                             {"mean_nows", v.mean_nows},
                             {"std_ws", v.std_ws},
                             {"std_nows", v.std_nows},
                             {"verdict", std::string(to_string(v.verdict))},
                             {"reverse", std::string(to_string(v.reverse))}});
    }
    j["metrics"] = std::move(metrics);
    verdicts.push_back(std::move(j));
  }
  return Json{{"format", kReportFormat},  {"version", kVersion},
              {"rng_algorithm", r.rng_algorithm}, {"commit", r.commit},
              {"cells", std::move(cells)}, {"verdicts", std::move(verdicts)}};
}

AggregateReport report_from(const Json& j) {
  if (j.at("format") != kReportFormat || j.at("version") != kVersion) {
    throw ParseError("report: unsupported format", 0);
  }
  AggregateReport r;
  r.rng_algorithm = j.at("rng_algorithm").get<std::string>();
  r.commit = j.at("commit").get<std::string>();
  for (const Json& c : j.at("cells")) {
    AggregateCell cell;
    cell.key = key_from(c);
    cell.runs = c.at("runs").get<Index>();
    cell.experiment_hash = parse_hex64(c.at("experiment_hash").get<std::string>());
    for (const auto& [name, s] : c.at("metrics").items()) cell.metrics[name] = summary_from(s);
    cell.train_seconds = summary_from(c.at("train_seconds"));
    r.cells.push_back(std::move(cell));
  }
  for (const Json& p : j.at("verdicts")) {
    PairedVerdict pv;
    pv.ws_cell = key_from(p);
    for (const Json& m : p.at("metrics")) {
      MetricVerdict v;
      v.metric = m.at("metric").get<std::string>();
      v.mean_ws = m.at("mean_ws").get<double>();
      v.mean_nows = m.at("mean_nows").get<double>();
      v.std_ws = m.at("std_ws").get<double>();
      v.std_nows = m.at("std_nows").get<double>();
      v.verdict = parse_verdict(m.at("verdict").get<std::string>());
      v.reverse = parse_verdict(m.at("reverse").get<std::string>());
      pv.metrics.push_back(std::move(v));
    }
    r.verdicts.push_back(std::move(pv));
  }
  return r;
}

// Minimal RFC 4180 quoting.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(std::string_view line, std::int64_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError("report: unterminated quote", line_no);
  return fields;
}

std::string emit_csv(const AggregateReport& r) {
  std::ostringstream out;
  out << "# " << kReportFormat << ' ' << kVersion << '\n';
  out << "# rng_algorithm=" << r.rng_algorithm << '\n';
  out << "# commit=" << r.commit << '\n';
  out << kCsvHeader << '\n';
  for (const AggregateCell& c : r.cells) {
    const std::string prefix = csv_field(c.key.dataset) + ',' +
                               (c.key.features ? "true" : "false") + ',' +
                               std::string(to_string(c.key.model)) + ',' +
                               (c.key.ws ? "true" : "false") + ',' + std::to_string(c.runs) +
                               ',' + hex64(c.experiment_hash) + ',';
    for (const auto& [name, s] : c.metrics) {
      out << prefix << csv_field(name) << ',' << fmt(s.mean) << ',' << fmt(s.std) << '\n';
    }
    out << prefix << kTrainSecondsMetric << ',' << fmt(c.train_seconds.mean) << ','
        << fmt(c.train_seconds.std) << '\n';
  }
  return out.str();
}

AggregateReport parse_csv(std::string_view text) {
  AggregateReport r;
  std::istringstream in{std::string(text)};
  std::string line;
  std::int64_t line_no = 0;
  bool header_seen = false;
  auto as_bool = [&](const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ParseError("report: bad boolean '" + s + "'", line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = std::string_view(line).substr(1);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = body.substr(body.find_first_not_of(' '), eq - 1);
      const std::string value(body.substr(eq + 1));
      if (key == "rng_algorithm") r.rng_algorithm = value;
      if (key == "commit") r.commit = value;
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError("report: unexpected csv header", line_no);
      header_seen = true;
      continue;
    }
    const auto f = csv_split(line, line_no);
    if (f.size() != 9) throw ParseError("report: expected 9 csv fields", line_no);
    const CellKey key{f[0], as_bool(f[1]), parse_model_kind(f[2]), as_bool(f[3])};
    if (r.cells.empty() || r.cells.back().key != key) {
      AggregateCell cell;
      cell.key = key;
      Index runs = 0;
      const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), runs);
      if (ec != std::errc() || ptr != f[4].data() + f[4].size()) {
        throw ParseError("report: bad run count", line_no);
      }
      cell.runs = runs;
      cell.experiment_hash = parse_hex64(f[5]);
      r.cells.push_back(std::move(cell));
    }
    const MetricSummary s{parse_double(f[7], line_no), parse_double(f[8], line_no)};
    if (f[6] == kTrainSecondsMetric) {
      r.cells.back().train_seconds = s;
    } else {
      r.cells.back().metrics[f[6]] = s;
    }
  }
  if (!header_seen) throw ParseError("report: missing csv header", 0);
  r.verdicts = pair_verdicts(r.cells);
  return r;
}

std::string model_label(const CellKey& k) {
  std::string out = k.model == ModelKind::kVgae ? "VGAE" : "Deep VGAE";
  return out + (k.ws ? " - WS" : " - No WS");
}

std::string metric_label(const std::string& name) {
  std::string out;
  for (char c : name) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string emit_markdown(const AggregateReport& r) {
  // Column order: the four standard metrics first, then anything else.
  std::vector<std::string> columns;
  for (const char* m : {"auc", "ap", "ami", "ari"}) {
    for (const AggregateCell& c : r.cells) {
      if (c.metrics.count(m) != 0) {
        columns.emplace_back(m);
        break;
      }
    }
  }
  for (const AggregateCell& c : r.cells) {
    for (const auto& [name, s] : c.metrics) {
      if (std::find(columns.begin(), columns.end(), name) == columns.end()) {
        columns.push_back(name);
      }
    }
  }

  std::ostringstream out;
  out << "| Dataset | Features | Model | Runs |";
  for (const auto& m : columns) out << ' ' << metric_label(m) << " (in %) |";
  out << "\n|---|---|---|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << '\n';
  for (const AggregateCell& c : r.cells) {
    out << "| " << c.key.dataset << " | " << (c.key.features ? "yes" : "no") << " | "
        << model_label(c.key) << " | " << c.runs << " |";
    for (const auto& m : columns) {
      const auto it = c.metrics.find(m);
      out << ' '
          << (it == c.metrics.end() ? std::string("-")
                                    : format_mean_std(100.0 * it->second.mean,
                                                      100.0 * it->second.std))
          << " |";
    }
    out << '\n';
  }

  if (!r.verdicts.empty()) {
    out << "\n| Dataset | Features | Model | Metric | WS | No WS | Verdict | Reverse |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const PairedVerdict& p : r.verdicts) {
      for (const MetricVerdict& v : p.metrics) {
        out << "| " << p.ws_cell.dataset << " | " << (p.ws_cell.features ? "yes" : "no")
            << " | " << (p.ws_cell.model == ModelKind::kVgae ? "VGAE" : "Deep VGAE") << " | "
            << metric_label(v.metric) << " | "
            << format_mean_std(100.0 * v.mean_ws, 100.0 * v.std_ws) << " | "
            << format_mean_std(100.0 * v.mean_nows, 100.0 * v.std_nows) << " | "
            << to_string(v.verdict) << " | " << to_string(v.reverse) << " |\n";
      }
    }
  }
  out << "\nrng: " << r.rng_algorithm << ", commit: " << r.commit << '\n';
  return out.str();
}

Json run_json(const RunResult& r) {
  Json config = Json::object();
  std::istringstream lines(r.config.to_text());
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    config[line.substr(0, eq)] = line.substr(eq + 3);
  }
  Json metrics = Json::object();
  for (const auto& [name, v] : r.metrics) metrics[name] = v;
  return Json{{"config", std::move(config)},
              {"seed", r.seed},
              {"metrics", std::move(metrics)},
              {"validation_auc", r.validation_auc ? Json(*r.validation_auc) : Json(nullptr)},
              {"seconds", r.seconds},
              {"train_seconds", r.train_seconds},
              {"final_loss", r.final_loss},
              {"lr", r.lr},
              {"used_fastgae", r.used_fastgae}};
}

RunResult run_from(const Json& j) {
  RunResult r;
  for (const auto& [key, value] : j.at("config").items()) {
    r.config.set(key, value.get<std::string>());
  }
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [name, v] : j.at("metrics").items()) r.metrics[name] = v.get<double>();
  if (!j.at("validation_auc").is_null()) r.validation_auc = j.at("validation_auc").get<double>();
  r.seconds = j.at("seconds").get<double>();
  r.train_seconds = j.at("train_seconds").get<double>();
  r.final_loss = j.at("final_loss").get<double>();
  r.lr = j.at("lr").get<double>();
  r.used_fastgae = j.at("used_fastgae").get<bool>();
  return r;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what(), 0);
  }
}

}  // namespace

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kMarkdown:
      return "markdown";
  }
  return "json";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  if (text == "markdown" || text == "md") return ReportFormat::kMarkdown;
  throw InvalidArgument("unknown report format '" + std::string(text) + "'");
}

std::string format_mean_std(double mean, double std) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f \xC2\xB1 %.2f", mean, std);
  return buf.data();
}

std::string emit_report(const AggregateReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv:
      return emit_csv(report);
    case ReportFormat::kJson:
      return report_json(report).dump(2) + "\n";
    case ReportFormat::kMarkdown:
      return emit_markdown(report);
  }
  return {};
}

AggregateReport parse_report(std::string_view text, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv:
      return parse_csv(text);
    case ReportFormat::kJson:
      try {
        return report_from(parse_json(text));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what(), 0);
      }
    case ReportFormat::kMarkdown:
      break;
  }
  throw InvalidArgument("markdown reports cannot be parsed back");
}

std::string emit_results_json(std::span<const RunResult> runs) {
  Json list = Json::array();
  for (const RunResult& r : runs) list.push_back(run_json(r));
  return Json{{"format", kResultsFormat}, {"version", kVersion}, {"runs", std::move(list)}}
             .dump(2) +
         "\n";
}

std::vector<RunResult> parse_results_json(std::string_view text) {
  const Json j = parse_json(text);
  try {
    if (j.at("format") != kResultsFormat || j.at("version") != kVersion) {
      throw ParseError("results: unsupported format", 0);
    }
    std::vector<RunResult> runs;
    for (const Json& r : j.at("runs")) runs.push_back(run_from(r));
    return runs;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("results: ") + e.what(), 0);
  }
}

}  // namespace wsvgae
