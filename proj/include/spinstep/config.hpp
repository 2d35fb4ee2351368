// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "spinstep/integrators.hpp"

namespace spinstep {

enum class OutputFormat { Csv, Jsonl };

enum class InitialKind { Explicit, Random, Lattice, Named };

struct InitialSpec {
  InitialKind kind = InitialKind::Named;
  std::string spins;  // explicit: states separated by ';', 3N numbers each
  std::string name = "fig2";
  int count = 1;
  double t0 = 0.0;
  bool normalize = true;
};

struct SectionSpec {
  int steps_per_period = 20;
  long periods = 500;
  std::string resume_from;  // state file written by an earlier section run
};

/// Everything a `run` or `section` invocation needs. The text form is an
/// INI-style file; see docs/config.md.
struct RunConfig {
  std::string source;
  std::string system = "perturbed_top";
  std::map<std::string, std::string> system_params;
  std::vector<Method> methods{Method::SphericalMidpoint};
  double dt = 0.5;
  long steps = 1000;
  int reference_substeps = 10;
  std::vector<std::string> observers{"energy", "energy_error", "length", "iterations"};
  SolverOptions solver;
  InitialSpec initial;
  SectionSpec section;
  std::string out_dir = "out";
  std::string prefix = "run";
  OutputFormat format = OutputFormat::Csv;
  bool svg = false;
  std::uint64_t seed = 1;
};

/// Parses and validates a config. Throws ConfigError carrying the line
/// number and section.key of the offending entry where one exists. Unknown
/// sections and keys are errors.
RunConfig parse_config(std::string_view text, const std::string& source);
RunConfig load_config(const std::string& path);

/// Re-checks the cross-field invariants (after command-line overrides).
void validate_config(const RunConfig& config);

/// Canonical text form with every default filled in. parse_config of the
/// result reproduces the config.
std::string to_ini(const RunConfig& config);

/// Builds the initial states; every state is validated against the system.
std::vector<SpinConfiguration> resolve_initial_states(const RunConfig& config,
                                                      const SpinSystem& system);

std::string_view format_name(OutputFormat f);

struct PresetInfo {
  std::string name;
  std::string description;
  std::string text;
};

const std::vector<PresetInfo>& presets();
const PresetInfo& find_preset(std::string_view name);

/// Named initial states usable as `[initial] kind = named`.
std::vector<SpinMatrix> named_initial_states(std::string_view name);

}  // namespace spinstep
