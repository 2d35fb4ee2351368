// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/spinstep.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <string>

#include "spinstep/analysis.hpp"
#include "spinstep/app.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/systems.hpp"
#include "text_util.hpp"

struct spinstep_system {
  spinstep::SpinSystem system;
};

struct spinstep_trajectory {
  std::shared_ptr<const spinstep::SpinSystem> system;
  spinstep::TrajectoryRecord record;
};

namespace {

struct LastError {
  std::string message;
  long step = -1;
  long line = -1;
};

thread_local LastError g_last_error;

spinstep_status fail(spinstep_status status, const std::string& message, long step = -1,
                     long line = -1) {
  g_last_error = {message, step, line};
  return status;
}

spinstep_status map_exception() {
  using namespace spinstep;
  try {
    throw;
  } catch (const Error& e) {
    const long step = e.step() ? static_cast<long>(*e.step()) : -1;
    spinstep_status status = SPINSTEP_ERR_INTERNAL;
    long line = -1;
    if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
      status = SPINSTEP_ERR_CONFIG;
      if (c->line()) line = *c->line();
    } else if (dynamic_cast<const NoConvergence*>(&e)) {
      status = SPINSTEP_ERR_NO_CONVERGENCE;
    } else if (dynamic_cast<const DegenerateMidpoint*>(&e)) {
      status = SPINSTEP_ERR_DEGENERATE_MIDPOINT;
    } else if (dynamic_cast<const CollisionSingularity*>(&e)) {
      status = SPINSTEP_ERR_COLLISION;
    } else if (dynamic_cast<const IoError*>(&e)) {
      status = SPINSTEP_ERR_IO;
    } else if (dynamic_cast<const InvalidArgument*>(&e)) {
      status = SPINSTEP_ERR_INVALID_ARGUMENT;
    }
    return fail(status, e.what(), step, line);
  } catch (const std::bad_alloc&) {
    return fail(SPINSTEP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPINSTEP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SPINSTEP_ERR_INTERNAL, "unknown error");
  }
}

template <class F>
spinstep_status guarded(F&& f) {
  g_last_error = {};
  try {
    f();
    return SPINSTEP_OK;
  } catch (...) {
    return map_exception();
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

spinstep::SpinMatrix read_spins(const double* spins, size_t n_spins) {
  if (!spins || n_spins == 0) throw spinstep::InvalidArgument("spins must be a non-empty array");
  spinstep::SpinMatrix s(3, static_cast<Eigen::Index>(n_spins));
  std::copy(spins, spins + 3 * n_spins, s.data());
  return s;
}

spinstep::StepOptions read_options(const spinstep_solver_options* o) {
  spinstep::StepOptions opts;
  if (o) {
    opts.solver.tolerance = o->tolerance;
    opts.solver.max_iterations = o->max_iterations;
    opts.reference_substeps = o->reference_substeps;
  }
  opts.solver.validate();
  if (opts.reference_substeps < 1) throw spinstep::InvalidArgument("reference_substeps must be >= 1");
  return opts;
}

std::map<std::string, std::string> read_params(const char* params) {
  std::map<std::string, std::string> out;
  if (!params) return out;
  for (auto entry : spinstep::text::split(params, ';')) {
    entry = spinstep::text::trim(entry);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) {
      throw spinstep::InvalidArgument("parameter '" + std::string(entry) + "' is not key=value");
    }
    out[std::string(spinstep::text::trim(entry.substr(0, eq)))] =
        std::string(spinstep::text::trim(entry.substr(eq + 1)));
  }
  return out;
}

spinstep::AppOverrides read_overrides(const spinstep_overrides* o) {
  spinstep::AppOverrides out;
  if (!o) return out;
  if (o->has_seed) out.seed = o->seed;
  if (o->out_dir) out.out_dir = o->out_dir;
  if (o->format) {
    const std::string f = o->format;
    if (f == "csv") {
      out.format = spinstep::OutputFormat::Csv;
    } else if (f == "jsonl") {
      out.format = spinstep::OutputFormat::Jsonl;
    } else {
      throw spinstep::ConfigError("--format", "expected csv or jsonl, got '" + f + "'");
    }
  }
  if (o->has_tolerance) out.tolerance = o->tolerance;
  if (o->has_max_iterations) out.max_iterations = o->max_iterations;
  return out;
}

std::string str_or_empty(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* spinstep_version(void) {
  static const std::string v = spinstep::version();
  return v.c_str();
}

const char* spinstep_last_error(void) { return g_last_error.message.c_str(); }
long spinstep_last_error_step(void) { return g_last_error.step; }
long spinstep_last_error_line(void) { return g_last_error.line; }

void spinstep_string_free(char* s) { std::free(s); }

spinstep_status spinstep_system_create(const char* name, const char* params,
                                       spinstep_system** out) {
  return guarded([&] {
    if (!name || !out) throw spinstep::InvalidArgument("name and out must not be NULL");
    *out = nullptr;
    *out = new spinstep_system{spinstep::make_system(name, read_params(params))};
  });
}

void spinstep_system_destroy(spinstep_system* system) { delete system; }

size_t spinstep_system_spin_count(const spinstep_system* system) {
  if (!system || !system->system.spin_count()) return 0;
  return static_cast<size_t>(*system->system.spin_count());
}

spinstep_status spinstep_system_energy(const spinstep_system* system, const double* spins,
                                       size_t n_spins, double t, double* out) {
  return guarded([&] {
    if (!system || !out) throw spinstep::InvalidArgument("system and out must not be NULL");
    const spinstep::SpinMatrix s = read_spins(spins, n_spins);
    system->system.require_spin_count(s.cols());
    *out = system->system.energy(s, t);
  });
}

spinstep_status spinstep_step(const spinstep_system* system, const char* method,
                              const double* spins, size_t n_spins, double t, double dt,
                              const spinstep_solver_options* options, double* out_spins,
                              int* out_iterations) {
  return guarded([&] {
    if (!system || !method || !out_spins) {
      throw spinstep::InvalidArgument("system, method and out_spins must not be NULL");
    }
    const spinstep::Method m = spinstep::parse_method(method);
    const spinstep::SpinConfiguration s(read_spins(spins, n_spins), t);
    system->system.require_spin_count(s.size());
    const auto r = spinstep::step(m, system->system, s, dt, read_options(options));
    std::copy(r.next.spins().data(), r.next.spins().data() + 3 * n_spins, out_spins);
    if (out_iterations) *out_iterations = r.iterations;
  });
}

spinstep_status spinstep_integrate(const spinstep_system* system, const char* method,
                                   const double* spins, size_t n_spins, double t0, double dt,
                                   long num_steps, const spinstep_solver_options* options,
                                   spinstep_trajectory** out) {
  return guarded([&] {
    if (!system || !method || !out) {
      throw spinstep::InvalidArgument("system, method and out must not be NULL");
    }
    *out = nullptr;
    const spinstep::Method m = spinstep::parse_method(method);
    const spinstep::SpinConfiguration s(read_spins(spins, n_spins), t0);
    auto sys = std::make_shared<const spinstep::SpinSystem>(system->system);
    auto record = spinstep::integrate_trajectory(*sys, m, s, dt, num_steps,
                                                 {spinstep::observers::iterations()},
                                                 read_options(options));
    *out = new spinstep_trajectory{std::move(sys), std::move(record)};
  });
}

void spinstep_trajectory_destroy(spinstep_trajectory* trajectory) { delete trajectory; }

size_t spinstep_trajectory_length(const spinstep_trajectory* trajectory) {
  return trajectory ? trajectory->record.size() : 0;
}

size_t spinstep_trajectory_spin_count(const spinstep_trajectory* trajectory) {
  if (!trajectory || trajectory->record.states.empty()) return 0;
  return static_cast<size_t>(trajectory->record.states.front().size());
}

spinstep_status spinstep_trajectory_state(const spinstep_trajectory* trajectory, size_t index,
                                          double* out_spins, double* out_t) {
  return guarded([&] {
    if (!trajectory) throw spinstep::InvalidArgument("trajectory must not be NULL");
    if (index >= trajectory->record.size()) throw spinstep::InvalidArgument("index out of range");
    const auto& s = trajectory->record.states[index];
    if (out_spins) std::copy(s.spins().data(), s.spins().data() + 3 * s.size(), out_spins);
    if (out_t) *out_t = s.time();
  });
}

spinstep_status spinstep_trajectory_iterations(const spinstep_trajectory* trajectory,
                                               size_t index, int* out) {
  return guarded([&] {
    if (!trajectory || !out) throw spinstep::InvalidArgument("trajectory and out must not be NULL");
    if (index >= trajectory->record.size()) throw spinstep::InvalidArgument("index out of range");
    *out = static_cast<int>(trajectory->record.observable("iterations")[index]);
  });
}

spinstep_status spinstep_trajectory_max_energy_error(const spinstep_trajectory* trajectory,
                                                     double* out) {
  return guarded([&] {
    if (!trajectory || !out) throw spinstep::InvalidArgument("trajectory and out must not be NULL");
    const auto err = spinstep::energy_error_series(*trajectory->system, trajectory->record);
    *out = *std::max_element(err.begin(), err.end());
  });
}

spinstep_status spinstep_run(const char* config_path, const char* preset,
                             const spinstep_overrides* overrides, char** summary) {
  return guarded([&] {
    const auto config =
        spinstep::resolve_config(str_or_empty(config_path), str_or_empty(preset),
                                 read_overrides(overrides));
    const auto outcome = spinstep::run_simulation(config);
    if (summary) *summary = dup_string(outcome.summary);
  });
}

spinstep_status spinstep_section(const char* config_path, const char* preset,
                                 const spinstep_overrides* overrides, char** summary) {
  return guarded([&] {
    const auto config =
        spinstep::resolve_config(str_or_empty(config_path), str_or_empty(preset),
                                 read_overrides(overrides));
    const auto outcome = spinstep::run_section(config);
    if (summary) *summary = dup_string(outcome.summary);
  });
}

spinstep_status spinstep_verify(const char* suites, uint64_t seed, const char* out_dir,
                                char** report, int* all_passed) {
  return guarded([&] {
    spinstep::VerifyOptions opts;
    opts.seed = seed;
    if (suites) {
      for (auto name : spinstep::text::split(suites, ',')) {
        name = spinstep::text::trim(name);
        if (!name.empty()) opts.suites.emplace_back(name);
      }
    }
    const auto outcome = spinstep::run_verify(opts, str_or_empty(out_dir));
    if (report) *report = dup_string(outcome.summary);
    if (all_passed) *all_passed = outcome.report.all_passed() ? 1 : 0;
  });
}

spinstep_status spinstep_list_presets(char** out) {
  return guarded([&] {
    if (!out) throw spinstep::InvalidArgument("out must not be NULL");
    std::string text;
    for (const auto& p : spinstep::presets()) text += p.name + "\t" + p.description + "\n";
    *out = dup_string(text);
  });
}

spinstep_status spinstep_list_suites(char** out) {
  return guarded([&] {
    if (!out) throw spinstep::InvalidArgument("out must not be NULL");
    std::string text;
    for (const auto& s : spinstep::verification_suites()) {
      text += s.name + "\t" + s.description + "\n";
    }
    *out = dup_string(text);
  });
}

spinstep_status spinstep_list_systems(char** out) {
  return guarded([&] {
    if (!out) throw spinstep::InvalidArgument("out must not be NULL");
    std::string text;
    for (const auto& name : spinstep::catalog_names()) {
      std::string params;
      try {
        params = spinstep::make_system(name, {}).parameters();
      } catch (const spinstep::Error&) {
        params = "(parameters required)";
      }
      text += name + "\t" + params + "\n";
    }
    *out = dup_string(text);
  });
}

spinstep_status spinstep_preset_text(const char* name, char** out) {
  return guarded([&] {
    if (!name || !out) throw spinstep::InvalidArgument("name and out must not be NULL");
    *out = dup_string(spinstep::find_preset(name).text);
  });
}

}  // extern "C"
