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

// Small numeric toolbox used by the encoder: dense matrices, a CSR operator,
// activations, initializers and a reproducible random stream.

#ifndef WSVGAE_NDMATH_HPP_
#define WSVGAE_NDMATH_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsvgae {

using Index = std::int64_t;

/// Row-major, 64-bit dense matrix. Carries activations, weights and
/// embeddings.
using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square sparse matrix in compressed sparse row form.
struct CsrMatrix {
  Index n = 0;
  std::vector<Index> row_offsets;  // n + 1 entries
  std::vector<Index> col_indices;  // sorted within each row
  std::vector<double> values;

  Index nnz() const { return static_cast<Index>(col_indices.size()); }
  /// Dense copy; only meant for small n (tests, debugging).
  DenseMatrix to_dense() const;
};

/// Deterministic random stream. The engine is mt19937_64; every derived
/// distribution is implemented here so the draw sequence depends only on
/// (seed, algorithm id) and not on the standard library vendor.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithmId = "mt19937_64/polar-v1";

  explicit RngStream(std::uint64_t seed);

  /// Independent stream for a named purpose, e.g. derive(seed, "split").
  static RngStream derive(std::uint64_t seed, std::string_view tag);
  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

  std::uint64_t seed() const { return seed_; }
  std::string_view algorithm_id() const { return kAlgorithmId; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal (Marsaglia polar method, cached pair).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Sparse (n x n) times dense (n x c).
DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b);

DenseMatrix relu(const DenseMatrix& x);
/// Passes `upstream` where x > 0; zero elsewhere (subgradient 0 at 0).
DenseMatrix relu_backward(const DenseMatrix& x, const DenseMatrix& upstream);

/// Logistic function, stable for any finite input.
double sigmoid(double x);
DenseMatrix sigmoid(const DenseMatrix& x);
/// log(1 + exp(x)) without overflow.
double softplus(double x);

/// Glorot/Xavier uniform on [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
DenseMatrix glorot_init(Index rows, Index cols, RngStream& rng);
/// i.i.d. standard normal draws, filled in row-major order.
DenseMatrix gaussian_sample(Index rows, Index cols, RngStream& rng);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central-difference gradient estimate of `fn` at `point`.
std::vector<double> finite_diff_grad(const ScalarFunction& fn,
                                     std::span<const double> point, double h);

/// True when every entry is finite.
bool all_finite(const DenseMatrix& m);

}  // namespace wsvgae

#endif  // WSVGAE_NDMATH_HPP_
