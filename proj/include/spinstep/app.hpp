// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinstep/analysis.hpp"
#include "spinstep/config.hpp"
#include "spinstep/verify.hpp"

namespace spinstep {

struct AppOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<OutputFormat> format;
  std::optional<double> tolerance;
  std::optional<int> max_iterations;
};

/// Loads a config file or a named preset (exactly one) and applies the
/// command-line overrides.
RunConfig resolve_config(const std::string& config_path, const std::string& preset,
                         const AppOverrides& overrides);

struct RunOutcome {
  std::vector<std::string> files;
  std::string summary;
};

/// One trajectory file per (method, initial state) plus a metadata sidecar.
RunOutcome run_simulation(const RunConfig& config);

/// Section points, the final states (resumable) and a metadata sidecar.
RunOutcome run_section(const RunConfig& config);

struct VerifyOutcome {
  VerificationReport report;
  std::vector<std::string> files;
  std::string summary;
};

/// Runs the certificate battery; writes verify_report.txt/.json into
/// out_dir unless it is empty.
VerifyOutcome run_verify(const VerifyOptions& options, const std::string& out_dir);

std::string version();

}  // namespace spinstep
