// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinstep/analysis.hpp"

namespace spinstep {

struct SuiteInfo {
  std::string name;
  std::string description;
};

/// Certificate battery in execution order.
const std::vector<SuiteInfo>& verification_suites();

struct VerifyOptions {
  std::vector<std::string> suites;  // empty: every suite
  std::uint64_t seed = 20260101;
  StepOptions step;
};

/// Runs the selected suites. Each suite seeds its own generator from
/// (seed, suite name) so filtering does not change the remaining results.
/// Unknown suite names throw InvalidArgument.
VerificationReport run_verification(const VerifyOptions& opts);

/// The initial condition used by the perturbed-top experiments:
/// (0, 0.7248, -0.6889) scaled to unit length.
SpinConfiguration perturbed_top_initial_state();

}  // namespace spinstep
