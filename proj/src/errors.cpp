// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/errors.hpp"

#include <cstdio>

namespace spinstep {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

Error::Error(std::string message) : message_(std::move(message)) { rebuild(); }

void Error::set_step(std::size_t step) {
  step_ = step;
  rebuild();
}

void Error::set_seed_index(std::size_t seed) {
  seed_index_ = seed;
  rebuild();
}

void Error::rebuild() {
  full_.clear();
  if (seed_index_) full_ += "seed " + std::to_string(*seed_index_) + ": ";
  if (step_) full_ += "step " + std::to_string(*step_) + ": ";
  full_ += message_;
}

DegenerateMidpoint::DegenerateMidpoint(double norm)
    : Error("degenerate midpoint: norm " + sci(norm) +
            " below threshold (reduce the time step)"),
      norm_(norm) {}

NoConvergence::NoConvergence(int iterations, std::vector<double> residual_history)
    : Error([&] {
        std::string msg = "fixed-point iteration did not converge after " +
                          std::to_string(iterations) + " iterations";
        if (!residual_history.empty()) {
          msg += " (last residual " + sci(residual_history.back()) + "; history";
          // The tail is what matters when diagnosing a stall or divergence.
          const std::size_t n = residual_history.size();
          const std::size_t from = n > 8 ? n - 8 : 0;
          if (from > 0) msg += " ...";
          for (std::size_t k = from; k < n; ++k) msg += " " + sci(residual_history[k]);
          msg += ")";
        }
        return msg;
      }()),
      iterations_(iterations),
      history_(std::move(residual_history)) {}

CollisionSingularity::CollisionSingularity(std::size_t i, std::size_t j, double gap)
    : Error("vortex collision between " + std::to_string(i) + " and " +
            std::to_string(j) + ": 2 - 2 s_i.s_j = " + sci(gap)) {}

ConfigError::ConfigError(std::string field, std::string message, std::optional<int> line)
    : Error([&] {
        std::string msg = "config";
        if (line) msg += " line " + std::to_string(*line);
        if (!field.empty()) msg += " [" + field + "]";
        return msg + ": " + message;
      }()),
      field_(std::move(field)),
      line_(line) {}

}  // namespace spinstep
