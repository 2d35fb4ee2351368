// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the C interface of libspinstep.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinstep/spinstep.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(spinstep_status status) {
  switch (status) {
    case SPINSTEP_OK:
      return kExitOk;
    case SPINSTEP_ERR_INVALID_ARGUMENT:
    case SPINSTEP_ERR_CONFIG:
    case SPINSTEP_ERR_IO:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

int report_failure(spinstep_status status) {
  std::fprintf(stderr, "spinstep: error: %s\n", spinstep_last_error());
  const long step = spinstep_last_error_step();
  if (status == SPINSTEP_ERR_NO_CONVERGENCE && step >= 0) {
    std::fprintf(stderr, "spinstep: solver failed at step %ld\n", step);
  }
  return exit_code_for(status);
}

// Prints and frees a library-owned string.
void emit(char* text, std::FILE* stream = stdout) {
  if (!text) return;
  std::fputs(text, stream);
  spinstep_string_free(text);
}

struct RunFlags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::optional<double> tolerance;
  std::optional<int> max_iter;

  spinstep_overrides overrides() const {
    spinstep_overrides o{};
    o.has_seed = seed.has_value();
    o.seed = seed.value_or(0);
    o.out_dir = out.empty() ? nullptr : out.c_str();
    o.format = format.empty() ? nullptr : format.c_str();
    o.has_tolerance = tolerance.has_value();
    o.tolerance = tolerance.value_or(0.0);
    o.has_max_iterations = max_iter.has_value();
    o.max_iterations = max_iter.value_or(0);
    return o;
  }
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  auto* config = cmd->add_option("--config", f.config, "config file (INI)");
  auto* preset = cmd->add_option("--preset", f.preset, "named preset (see `presets list`)");
  config->excludes(preset);
  cmd->add_option("--seed", f.seed, "random seed for random initial states");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "trajectory format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--tolerance", f.tolerance, "fixed-point tolerance (max-norm)");
  cmd->add_option("--max-iter", f.max_iter, "fixed-point iteration cap");
}

using RunFn = spinstep_status (*)(const char*, const char*, const spinstep_overrides*, char**);

int run_config_verb(RunFn fn, const RunFlags& f) {
  const spinstep_overrides o = f.overrides();
  char* summary = nullptr;
  const spinstep_status status = fn(f.config.empty() ? nullptr : f.config.c_str(),
                                    f.preset.empty() ? nullptr : f.preset.c_str(), &o, &summary);
  if (status != SPINSTEP_OK) return report_failure(status);
  emit(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinstep: structure-preserving integrators for classical spin systems"};
  app.set_version_flag("--version", "spinstep " + std::string(spinstep_version()));
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "integrate a configured system and write trajectories");
  add_run_flags(run, run_flags);

  RunFlags section_flags;
  auto* section =
      app.add_subcommand("section", "one-period map of a forced system (Poincare section)");
  add_run_flags(section, section_flags);

  std::vector<std::string> suites;
  std::uint64_t verify_seed = 20260101;
  std::string verify_out = "out";
  bool list_suites = false;
  auto* verify = app.add_subcommand("verify", "run the numerical certificate battery");
  verify->add_option("--suite", suites, "suite name (repeatable, or comma-separated)")
      ->delimiter(',');
  verify->add_option("--seed", verify_seed, "base seed of the random probes");
  verify->add_option("--out", verify_out, "directory for verify_report.txt/.json");
  verify->add_flag("--list", list_suites, "list suites and exit");

  auto* presets = app.add_subcommand("presets", "bundled configurations");
  presets->require_subcommand(1);
  auto* presets_list = presets->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* presets_show = presets->add_subcommand("show", "print a preset config");
  presets_show->add_option("name", show_name, "preset name")->required();

  auto* systems = app.add_subcommand("systems", "list the system catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return run_config_verb(spinstep_run, run_flags);
  if (section->parsed()) return run_config_verb(spinstep_section, section_flags);

  if (verify->parsed()) {
    char* text = nullptr;
    if (list_suites) {
      const spinstep_status status = spinstep_list_suites(&text);
      if (status != SPINSTEP_OK) return report_failure(status);
      emit(text);
      return kExitOk;
    }
    std::string joined;
    for (const auto& s : suites) joined += (joined.empty() ? "" : ",") + s;
    int all_passed = 0;
    const spinstep_status status =
        spinstep_verify(joined.c_str(), verify_seed, verify_out.empty() ? nullptr : verify_out.c_str(),
                        &text, &all_passed);
    if (status != SPINSTEP_OK) return report_failure(status);
    emit(text);
    return all_passed ? kExitOk : kExitVerificationFailed;
  }

  char* text = nullptr;
  spinstep_status status = SPINSTEP_OK;
  if (presets_list->parsed()) {
    status = spinstep_list_presets(&text);
  } else if (presets_show->parsed()) {
    status = spinstep_preset_text(show_name.c_str(), &text);
  } else if (systems->parsed()) {
    status = spinstep_list_systems(&text);
  }
  if (status != SPINSTEP_OK) return report_failure(status);
  emit(text);
  return kExitOk;
}
