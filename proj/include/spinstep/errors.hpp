// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinstep {

/// Base class of every error raised by the library. Carries optional
/// context (step index, seed index) that callers up the stack attach while
/// the exception propagates.
class Error : public std::exception {
 public:
  explicit Error(std::string message);

  const char* what() const noexcept override { return full_.c_str(); }
  const std::string& message() const noexcept { return message_; }

  std::optional<std::size_t> step() const noexcept { return step_; }
  std::optional<std::size_t> seed_index() const noexcept { return seed_index_; }

  void set_step(std::size_t step);
  void set_seed_index(std::size_t seed);

 private:
  void rebuild();

  std::string message_;
  std::string full_;
  std::optional<std::size_t> step_;
  std::optional<std::size_t> seed_index_;
};

/// A precondition of an operation was violated by its arguments.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// ||s_n + s_{n+1}|| (or another vector headed for the sphere) fell below
/// the degenerate-norm threshold. The step is too large for this state.
class DegenerateMidpoint : public Error {
 public:
  explicit DegenerateMidpoint(double norm);
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

/// The implicit solve did not reach its tolerance.
class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, std::vector<double> residual_history);

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept {
    return history_.empty() ? 0.0 : history_.back();
  }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  int iterations_;
  std::vector<double> history_;
};

/// Two point vortices came close enough for the log interaction to blow up.
class CollisionSingularity : public Error {
 public:
  CollisionSingularity(std::size_t i, std::size_t j, double gap);
};

/// Configuration file or override could not be turned into a valid run.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, std::string message, std::optional<int> line = {});

  const std::string& field() const noexcept { return field_; }
  std::optional<int> line() const noexcept { return line_; }

 private:
  std::string field_;
  std::optional<int> line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinstep
