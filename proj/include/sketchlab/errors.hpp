// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sketchlab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: out-of-range indices, mismatched dimensions, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents. `line()` is 1-based, 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::int64_t line() const noexcept { return line_; }

 private:
  std::int64_t line_;
};

/// A dense factorization failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Allocation of auxiliary buffers failed.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations. Carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best, int iterations,
                   double residual)
      : Error(what), best_(std::move(best)), iterations_(iterations), residual_(residual) {}

  const std::vector<double>& best_iterate() const noexcept { return best_; }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<double> best_;
  int iterations_;
  double residual_;
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw InputError(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

}  // namespace detail

}  // namespace sketchlab
