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

#include "wsvgae/ndmath.hpp"

#include <cmath>
#include <limits>

#include "wsvgae/error.hpp"

namespace wsvgae {
namespace {

// splitmix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      out(i, col_indices[k]) = values[k];
    }
  }
  return out;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::derive_seed(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag, folded into the seed.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return mix64(mix64(seed) ^ h);
}

RngStream RngStream::derive(std::uint64_t seed, std::string_view tag) {
  return RngStream(derive_seed(seed, tag));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_index: bound must be positive");
  // Rejection on the top of the range keeps the draw unbiased.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b) {
  if (b.rows() != a.n) {
    throw InvalidArgument("spmm: operator is " + std::to_string(a.n) + "x" +
                          std::to_string(a.n) + " but operand has " +
                          std::to_string(b.rows()) + " rows");
  }
  DenseMatrix out = DenseMatrix::Zero(a.n, b.cols());
  for (Index i = 0; i < a.n; ++i) {
    auto row = out.row(i);
    for (Index k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      row.noalias() += a.values[k] * b.row(a.col_indices[k]);
    }
  }
  return out;
}

DenseMatrix relu(const DenseMatrix& x) { return x.cwiseMax(0.0); }

DenseMatrix relu_backward(const DenseMatrix& x, const DenseMatrix& upstream) {
  if (x.rows() != upstream.rows() || x.cols() != upstream.cols()) {
    throw InvalidArgument("relu_backward: shape mismatch");
  }
  return (x.array() > 0.0).select(upstream, 0.0);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

DenseMatrix sigmoid(const DenseMatrix& x) {
  return x.unaryExpr([](double v) { return sigmoid(v); });
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

DenseMatrix glorot_init(Index rows, Index cols, RngStream& rng) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidArgument("glorot_init: dimensions must be positive");
  }
  const double range = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < out.size(); ++i) {
    out.data()[i] = range * (2.0 * rng.uniform() - 1.0);
  }
  return out;
}

DenseMatrix gaussian_sample(Index rows, Index cols, RngStream& rng) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidArgument("gaussian_sample: dimensions must be positive");
  }
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < out.size(); ++i) out.data()[i] = rng.normal();
  return out;
}

std::vector<double> finite_diff_grad(const ScalarFunction& fn,
                                     std::span<const double> point, double h) {
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = fn(x);
    x[i] = saved - h;
    const double down = fn(x);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

bool all_finite(const DenseMatrix& m) { return m.array().isFinite().all(); }

}  // namespace wsvgae
