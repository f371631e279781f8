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

// Checkpoint layout (text, one record per line):
//
//   wsvgae-checkpoint 1
//   ws <0|1>
//   dims <input> <hidden...> <latent>
//   tensor <name> <rows> <cols>
//   <cols values>            (rows lines)
//   ...
//   end
//
// Tensors appear in EncoderParams::tensors() order.

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wsvgae/error.hpp"
#include "wsvgae/model.hpp"

namespace wsvgae {
namespace {

constexpr const char* kMagic = "wsvgae-checkpoint";
constexpr int kVersion = 1;

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& tok, std::int64_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError("checkpoint: bad number '" + tok + "'", line);
  }
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const EncoderParams& params) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "ws " << (params.ws() ? 1 : 0) << '\n';
  out << "dims";
  for (Index d : params.dims()) out << ' ' << d;
  out << '\n';
  for (const auto& t : params.tensors()) {
    const DenseMatrix& m = *t.value;
    out << "tensor " << t.name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j > 0) out << ' ';
        out << format_double(m(i, j));
      }
      out << '\n';
    }
  }
  out << "end\n";
}

EncoderParams load_checkpoint(std::istream& in) {
  std::string line;
  std::int64_t line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError("checkpoint: unexpected end", line_no);
    ++line_no;
    return std::istringstream(line);
  };

  {
    auto s = next_line();
    std::string magic;
    int version = 0;
    if (!(s >> magic >> version) || magic != kMagic || version != kVersion) {
      throw ParseError("checkpoint: bad header", line_no);
    }
  }
  bool ws = false;
  {
    auto s = next_line();
    std::string key;
    int flag = -1;
    if (!(s >> key >> flag) || key != "ws" || (flag != 0 && flag != 1)) {
      throw ParseError("checkpoint: expected 'ws <0|1>'", line_no);
    }
    ws = flag == 1;
  }
  std::vector<Index> dims;
  {
    auto s = next_line();
    std::string key;
    s >> key;
    if (key != "dims") throw ParseError("checkpoint: expected 'dims'", line_no);
    for (Index d; s >> d;) dims.push_back(d);
    if (dims.size() < 3) throw ParseError("checkpoint: need at least 3 dims", line_no);
  }

  // Build the layout with throwaway values, then overwrite every tensor.
  RngStream scratch(0);
  std::vector<Index> hidden(dims.begin() + 1, dims.end() - 1);
  EncoderParams params =
      EncoderParams::init(dims.front(), hidden, dims.back(), ws, scratch);
  for (auto& t : params.tensors()) {
    auto s = next_line();
    std::string key, name;
    Index rows = 0, cols = 0;
    if (!(s >> key >> name >> rows >> cols) || key != "tensor") {
      throw ParseError("checkpoint: expected 'tensor <name> <rows> <cols>'", line_no);
    }
    if (name != t.name || rows != t.value->rows() || cols != t.value->cols()) {
      throw ParseError("checkpoint: tensor " + name + " does not match layout (expected " +
                           t.name + ")",
                       line_no);
    }
    for (Index i = 0; i < rows; ++i) {
      auto row = next_line();
      std::string tok;
      for (Index j = 0; j < cols; ++j) {
        if (!(row >> tok)) throw ParseError("checkpoint: short row", line_no);
        (*t.value)(i, j) = parse_double(tok, line_no);
      }
    }
  }
  {
    auto s = next_line();
    std::string key;
    if (!(s >> key) || key != "end") throw ParseError("checkpoint: expected 'end'", line_no);
  }
  return params;
}

}  // namespace wsvgae
