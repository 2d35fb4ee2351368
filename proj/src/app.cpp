// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/output.hpp"
#include "spinstep/systems.hpp"
#include "text_util.hpp"

namespace spinstep {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string version() { return SPINSTEP_VERSION_STRING; }

RunConfig resolve_config(const std::string& config_path, const std::string& preset,
                         const AppOverrides& o) {
  if (!config_path.empty() && !preset.empty()) {
    throw ConfigError("", "give either --config or --preset, not both");
  }
  RunConfig c;
  if (!config_path.empty()) {
    c = load_config(config_path);
  } else if (!preset.empty()) {
    c = parse_config(find_preset(preset).text, "preset:" + preset);
  } else {
    throw ConfigError("", "a --config file or a --preset is required");
  }
  if (o.seed) c.seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.format) c.format = *o.format;
  if (o.tolerance) c.solver.tolerance = *o.tolerance;
  if (o.max_iterations) c.solver.max_iterations = *o.max_iterations;
  validate_config(c);
  return c;
}

namespace {

struct IterationStats {
  long total = 0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

IterationStats iteration_stats(std::vector<double> its) {
  IterationStats s;
  if (its.empty()) return s;
  for (double v : its) s.total += static_cast<long>(v);
  s.mean = static_cast<double>(s.total) / static_cast<double>(its.size());
  std::sort(its.begin(), its.end());
  const std::size_t n = its.size();
  s.median = n % 2 ? its[n / 2] : 0.5 * (its[n / 2 - 1] + its[n / 2]);
  s.max = its.back();
  return s;
}

ordered_json base_metadata(const RunConfig& c, const SpinSystem& sys, const std::string& command) {
  ordered_json meta;
  meta["tool"] = "spinstep";
  meta["version"] = version();
  meta["command"] = command;
  meta["source"] = c.source;
  meta["seed"] = c.seed;
  meta["system"] = {{"name", sys.name()}, {"parameters", sys.parameters()}};
  meta["config"] = to_ini(c);
  return meta;
}

std::string path_in(const RunConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

}  // namespace

RunOutcome run_simulation(const RunConfig& c) {
  const SpinSystem sys = make_system(c.system, c.system_params);
  const auto initial = resolve_initial_states(c, sys);
  std::vector<Observer> obs;
  for (const auto& name : c.observers) {
    auto more = observers::by_name(name, sys);
    obs.insert(obs.end(), more.begin(), more.end());
  }
  // Iteration statistics go into the metadata even when not requested as
  // a column.
  const bool has_iterations = std::any_of(obs.begin(), obs.end(),
                                          [](const Observer& o) { return o.name == "iterations"; });
  if (!has_iterations) obs.push_back(observers::iterations());

  StepOptions opts;
  opts.solver = c.solver;
  opts.reference_substeps = c.reference_substeps;

  RunOutcome outcome;
  ordered_json meta = base_metadata(c, sys, "run");
  meta["runs"] = ordered_json::array();
  std::vector<Series> energy_series;
  std::vector<std::vector<Vec3>> sphere_groups;
  const std::string ext = c.format == OutputFormat::Csv ? ".csv" : ".jsonl";

  for (Method m : c.methods) {
    for (std::size_t k = 0; k < initial.size(); ++k) {
      TrajectoryRecord traj = integrate_trajectory(sys, m, initial[k], c.dt, c.steps, obs, opts);
      const auto stats = iteration_stats(
          std::vector<double>(traj.observable("iterations").begin() + 1,
                              traj.observable("iterations").end()));
      if (!has_iterations) {
        traj.observables.erase(std::remove_if(traj.observables.begin(), traj.observables.end(),
                                              [](auto& kv) { return kv.first == "iterations"; }),
                               traj.observables.end());
      }
      std::string stem = c.prefix + "_" + std::string(method_name(m));
      if (initial.size() > 1) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "_o%02zu", k);
        stem += buf;
      }
      const std::string file = path_in(c, stem + ext);
      atomic_write(file, c.format == OutputFormat::Csv ? trajectory_csv(traj) : trajectory_jsonl(traj));
      outcome.files.push_back(file);

      double max_len = 0.0;
      for (const auto& s : traj.states) max_len = std::max(max_len, s.max_norm_deviation());
      ordered_json run;
      run["method"] = method_name(m);
      run["initial_index"] = k;
      run["file"] = fs::path(file).filename().string();
      run["steps"] = c.steps;
      run["iterations"] = {{"total", stats.total},
                           {"mean", stats.mean},
                           {"median", stats.median},
                           {"max", stats.max}};
      run["max_length_deviation"] = max_len;
      std::ostringstream line;
      line << method_name(m) << " initial " << k << ": " << c.steps << " steps, iterations mean "
           << text::g17(stats.mean).substr(0, 6) << " max " << stats.max << ", max |len-1| "
           << max_len;
      if (!sys.time_dependent()) {
        const auto err = energy_error_series(sys, traj);
        const double max_err = *std::max_element(err.begin(), err.end());
        run["max_energy_error"] = max_err;
        line << ", max |H-H0| " << max_err;
        if (c.svg) {
          std::string label = std::string(method_name(m));
          if (initial.size() > 1) label += " #" + std::to_string(k);
          energy_series.push_back({label, traj.times, err});
        }
      }
      meta["runs"].push_back(run);
      outcome.summary += line.str() + " -> " + file + "\n";

      if (c.svg) {
        for (Eigen::Index i = 0; i < initial[k].size(); ++i) {
          std::vector<Vec3> pts;
          pts.reserve(traj.size());
          for (const auto& s : traj.states) pts.push_back(s.spin(i));
          sphere_groups.push_back(std::move(pts));
        }
      }
    }
  }

  if (c.svg) {
    const std::string sphere = path_in(c, c.prefix + "_sphere.svg");
    atomic_write(sphere, svg_sphere_scatter(sphere_groups, Vec3(1.0, 0.6, 0.5),
                                            sys.name() + " " + sys.parameters()));
    outcome.files.push_back(sphere);
    if (!energy_series.empty()) {
      const std::string energy = path_in(c, c.prefix + "_energy.svg");
      atomic_write(energy, svg_line_plot(energy_series, "energy error, dt=" + text::g17(c.dt),
                                         "time", "|H(s_n) - H(s_0)|"));
      outcome.files.push_back(energy);
    }
  }
  meta["outputs"] = ordered_json::array();
  for (const auto& f : outcome.files) meta["outputs"].push_back(fs::path(f).filename().string());
  const std::string meta_file = path_in(c, c.prefix + ".meta.json");
  atomic_write(meta_file, meta.dump(2) + "\n");
  outcome.files.push_back(meta_file);
  return outcome;
}

RunOutcome run_section(const RunConfig& c) {
  const SpinSystem sys = make_system(c.system, c.system_params);
  if (!sys.period()) {
    throw ConfigError("system.name", "section needs a periodically forced system (forced_top)");
  }
  std::vector<SpinConfiguration> seeds;
  long first_period = 1;
  if (!c.section.resume_from.empty()) {
    seeds = read_state_file(c.section.resume_from);
    if (seeds.empty()) throw ConfigError("section.resume_from", "state file has no states");
    for (const auto& s : seeds) sys.require_spin_count(s.size());
    first_period = std::lround(seeds.front().time() / *sys.period()) + 1;
  } else {
    seeds = resolve_initial_states(c, sys);
  }

  SectionOptions so;
  so.steps_per_period = c.section.steps_per_period;
  so.periods = c.section.periods;
  so.first_period = first_period;
  so.step.solver = c.solver;
  so.step.reference_substeps = c.reference_substeps;
  const Method method = c.methods.front();
  const SectionCloud cloud = poincare_section(sys, method, seeds, so);

  RunOutcome outcome;
  const std::string ext = c.format == OutputFormat::Csv ? ".csv" : ".jsonl";
  const std::string points = path_in(c, c.prefix + "_section" + ext);
  atomic_write(points, c.format == OutputFormat::Csv ? section_csv(cloud) : section_jsonl(cloud));
  outcome.files.push_back(points);
  const std::string finals = path_in(c, c.prefix + "_final.csv");
  atomic_write(finals, state_file_csv(cloud.final_states));
  outcome.files.push_back(finals);

  double max_len = 0.0;
  for (const auto& p : cloud.points) max_len = std::max(max_len, p.state.max_norm_deviation());

  if (c.svg) {
    std::vector<std::vector<Vec3>> groups(seeds.size());
    for (const auto& p : cloud.points) groups[p.seed].push_back(p.state.spin(0));
    const std::string svg = path_in(c, c.prefix + "_section.svg");
    atomic_write(svg, svg_sphere_scatter(groups, Vec3(1.0, 0.35, 0.45),
                                         "one-period map, " + sys.parameters() + ", k=" +
                                             std::to_string(so.steps_per_period)));
    outcome.files.push_back(svg);
  }

  ordered_json meta = base_metadata(c, sys, "section");
  meta["method"] = method_name(method);
  meta["steps_per_period"] = so.steps_per_period;
  meta["dt"] = *sys.period() / so.steps_per_period;
  meta["periods"] = so.periods;
  meta["first_period"] = so.first_period;
  meta["seeds"] = seeds.size();
  meta["points"] = cloud.points.size();
  meta["max_length_deviation"] = max_len;
  meta["outputs"] = ordered_json::array();
  for (const auto& f : outcome.files) meta["outputs"].push_back(fs::path(f).filename().string());
  const std::string meta_file = path_in(c, c.prefix + "_section.meta.json");
  atomic_write(meta_file, meta.dump(2) + "\n");
  outcome.files.push_back(meta_file);

  std::ostringstream line;
  line << "section: " << seeds.size() << " seeds x " << so.periods << " periods (k="
       << so.steps_per_period << ") -> " << cloud.points.size() << " points, max |len-1| "
       << max_len << "\n";
  outcome.summary = line.str();
  return outcome;
}

VerifyOutcome run_verify(const VerifyOptions& options, const std::string& out_dir) {
  VerifyOutcome outcome{run_verification(options), {}, {}};
  outcome.summary = outcome.report.to_text();
  if (!out_dir.empty()) {
    const std::string txt = (fs::path(out_dir) / "verify_report.txt").string();
    const std::string json = (fs::path(out_dir) / "verify_report.json").string();
    atomic_write(txt, outcome.summary);
    atomic_write(json, outcome.report.to_json());
    outcome.files = {txt, json};
  }
  return outcome;
}

}  // namespace spinstep
