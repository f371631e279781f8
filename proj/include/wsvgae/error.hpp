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

#ifndef WSVGAE_ERROR_HPP_
#define WSVGAE_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wsvgae {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition: bad shapes, out-of-range fractions, unknown ids.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

/// A NaN or infinity surfaced in a loss or gradient. `iteration()` is the
/// optimizer step at which it was detected, or -1 outside training.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::int64_t iteration = -1)
      : Error(iteration >= 0
                  ? what + " (iteration " + std::to_string(iteration) + ")"
                  : what),
        iteration_(iteration) {}

  std::int64_t iteration() const { return iteration_; }

  /// Same error with `context` prepended to the message.
  NonFiniteError with_context(const std::string& context) const {
    return NonFiniteError(Raw{}, context + ": " + what(), iteration_);
  }

 private:
  struct Raw {};
  NonFiniteError(Raw, const std::string& what, std::int64_t iteration)
      : Error(what), iteration_(iteration) {}

  std::int64_t iteration_;
};

}  // namespace wsvgae

#endif  // WSVGAE_ERROR_HPP_
