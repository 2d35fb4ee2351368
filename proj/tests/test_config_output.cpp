// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "spinstep/app.hpp"
#include "spinstep/config.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/output.hpp"
#include "spinstep/systems.hpp"

namespace spinstep {
namespace {

namespace fs = std::filesystem;

constexpr const char* kMinimal =
    "; minimal\n"
    "[run]\n"
    "method = spherical, classical\n"
    "dt = 0.25\n"
    "steps = 12\n"
    "\n"
    "[system]\n"
    "name = spinning_top\n"
    "inertia = 1, 2, 3\n"
    "\n"
    "[initial]\n"
    "kind = explicit\n"
    "spins = 0, 0.6, 0.8; 1, 0, 0\n";

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spinstep_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text, "test.ini");
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("", "");
}

TEST(Config, ParsesMinimalFile) {
  const RunConfig c = parse_config(kMinimal, "test.ini");
  ASSERT_EQ(c.methods.size(), 2u);
  EXPECT_EQ(c.methods[0], Method::SphericalMidpoint);
  EXPECT_EQ(c.methods[1], Method::ClassicalMidpoint);
  EXPECT_DOUBLE_EQ(c.dt, 0.25);
  EXPECT_EQ(c.steps, 12);
  EXPECT_EQ(c.system, "spinning_top");
  EXPECT_EQ(c.system_params.at("inertia"), "1, 2, 3");
  EXPECT_EQ(c.initial.kind, InitialKind::Explicit);
  // Untouched sections keep their defaults.
  EXPECT_DOUBLE_EQ(c.solver.tolerance, 1e-12);
  EXPECT_EQ(c.solver.max_iterations, 100);
  EXPECT_EQ(c.format, OutputFormat::Csv);

  const auto states = resolve_initial_states(c, make_system(c.system, c.system_params));
  ASSERT_EQ(states.size(), 2u);
  EXPECT_EQ(states[0].spin(0), Vec3(0, 0.6, 0.8));
}

TEST(Config, UnknownKeyReportsLineAndField) {
  const ConfigError e = config_error(std::string(kMinimal) + "bogus = 3\n");
  EXPECT_EQ(e.field(), "initial.bogus");
  ASSERT_TRUE(e.line());
  EXPECT_EQ(*e.line(), 14);
}

TEST(Config, UnknownSectionIsRejected) {
  const ConfigError e = config_error(std::string(kMinimal) + "[plots]\nwidth = 3\n");
  EXPECT_EQ(e.field(), "plots");
  EXPECT_EQ(e.line(), 14);
}

TEST(Config, ZeroStepsIsRejectedWithLine) {
  std::string text = kMinimal;
  text.replace(text.find("steps = 12"), 10, "steps = 0");
  const ConfigError e = config_error(text);
  EXPECT_EQ(e.field(), "run.steps");
  EXPECT_EQ(e.line(), 5);
  EXPECT_NE(std::string(e.what()).find("config line 5 [run.steps]"), std::string::npos);
}

TEST(Config, MalformedValuesAreRejected) {
  EXPECT_EQ(config_error("[run]\ndt = fast\n").field(), "run.dt");
  EXPECT_EQ(config_error("[run]\ndt = 0\n").field(), "run.dt");
  EXPECT_EQ(config_error("[run]\nmethod = leapfrog\n").field(), "run.method");
  EXPECT_EQ(config_error("[output]\nformat = xml\n").field(), "output.format");
  EXPECT_EQ(config_error("[solver]\ntolerance = -1\n").field(), "solver.tolerance");
  EXPECT_EQ(config_error("[system]\nname = rigid_body\n").field(), "system.name");
  EXPECT_EQ(config_error("[system]\nname = perturbed_top\nepsilon = 1\n").field(),
            "system.epsilon");
}

TEST(Config, InitialStateMustMatchSystem) {
  const std::string text =
      "[system]\nname = heisenberg_chain\nn = 3\n[initial]\nkind = explicit\nspins = 0,0,1\n";
  EXPECT_THROW(parse_config(text, "x"), ConfigError);
}

TEST(Config, ExplicitStatesAreNormalizedUnlessDisabled) {
  const std::string text = "[initial]\nkind = explicit\nspins = 0, 0.7248, -0.6889\n";
  const RunConfig c = parse_config(text, "x");
  const auto s = resolve_initial_states(c, perturbed_top());
  EXPECT_NEAR(s[0].spin(0).norm(), 1.0, 1e-15);
  EXPECT_THROW(parse_config(text + "normalize = false\n", "x"), ConfigError);
}

TEST(Config, RandomStatesFollowTheSeed) {
  const std::string text = "[initial]\nkind = random\ncount = 3\n[run]\nseed = ";
  const SpinSystem sys = perturbed_top();
  const auto a = resolve_initial_states(parse_config(text + "5\n", "x"), sys);
  const auto b = resolve_initial_states(parse_config(text + "5\n", "x"), sys);
  const auto c = resolve_initial_states(parse_config(text + "6\n", "x"), sys);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].spins(), b[k].spins());
  EXPECT_NE(a[0].spins(), c[0].spins());
}

TEST(Config, CanonicalTextRoundTrips) {
  const RunConfig c = parse_config(kMinimal, "test.ini");
  const std::string once = to_ini(c);
  const RunConfig again = parse_config(once, "roundtrip");
  EXPECT_EQ(to_ini(again), once);
  EXPECT_EQ(again.methods, c.methods);
  EXPECT_EQ(again.dt, c.dt);
  EXPECT_EQ(again.system_params, c.system_params);
}

TEST(Config, TimeStepSurvivesRoundTripExactly) {
  RunConfig c;
  c.dt = std::nextafter(0.1, 1.0);
  EXPECT_EQ(parse_config(to_ini(c), "x").dt, c.dt);
}

TEST(Presets, AllParseAndValidate) {
  ASSERT_EQ(presets().size(), 4u);
  for (const auto& p : presets()) {
    SCOPED_TRACE(p.name);
    EXPECT_FALSE(p.description.empty());
    const RunConfig c = parse_config(p.text, "preset:" + p.name);
    EXPECT_NO_THROW(validate_config(c));
  }
  EXPECT_THROW(find_preset("fig9"), ConfigError);
}

TEST(Presets, BundledSettings) {
  const RunConfig fig2 = parse_config(find_preset("fig2").text, "fig2");
  EXPECT_DOUBLE_EQ(fig2.dt, 0.5);
  EXPECT_EQ(fig2.system, "perturbed_top");
  const RunConfig fig3 = parse_config(find_preset("fig3").text, "fig3");
  EXPECT_EQ(fig3.methods.size(), 2u);
  const RunConfig fig4 = parse_config(find_preset("fig4").text, "fig4");
  EXPECT_EQ(fig4.system, "forced_top");
  EXPECT_EQ(fig4.section.steps_per_period, 20);
  EXPECT_EQ(fig4.section.periods, 500);
  EXPECT_EQ(resolve_initial_states(fig4, make_system(fig4.system, fig4.system_params)).size(),
            20u);
}

TEST(ResolveConfig, OverridesApplyAndRevalidate) {
  AppOverrides o;
  o.seed = 99;
  o.out_dir = "/tmp/elsewhere";
  o.format = OutputFormat::Jsonl;
  o.tolerance = 1e-10;
  o.max_iterations = 7;
  const RunConfig c = resolve_config("", "fig2", o);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.out_dir, "/tmp/elsewhere");
  EXPECT_EQ(c.format, OutputFormat::Jsonl);
  EXPECT_DOUBLE_EQ(c.solver.tolerance, 1e-10);
  EXPECT_EQ(c.solver.max_iterations, 7);

  AppOverrides bad;
  bad.max_iterations = 0;
  EXPECT_THROW(resolve_config("", "fig2", bad), ConfigError);
  EXPECT_THROW(resolve_config("", "", {}), ConfigError);
  EXPECT_THROW(resolve_config("a.ini", "fig2", {}), ConfigError);
}

TEST(ResolveConfig, MissingFileIsAnIoError) {
  EXPECT_THROW(resolve_config("/nonexistent/spinstep.ini", "", {}), IoError);
}

TrajectoryRecord small_trajectory() {
  SpinMatrix s(3, 2);
  s.col(0) = Vec3(0, 0.6, 0.8);
  s.col(1) = Vec3(1, 0, 0);
  return integrate_trajectory(heisenberg_chain({2, 1.0, Boundary::Open}),
                              Method::SphericalMidpoint, SpinConfiguration(s), 0.1, 3,
                              {observers::energy(), observers::iterations()});
}

TEST(Output, TrajectoryCsvLayoutAndPrecision) {
  const TrajectoryRecord traj = small_trajectory();
  std::istringstream in(trajectory_csv(traj));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,t,s1x,s1y,s1z,s2x,s2y,s2z,energy,iterations");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(std::strtod(cell.c_str(), nullptr));
    ASSERT_EQ(cells.size(), 10u);
    EXPECT_EQ(cells[0], rows);
    // Every spin component reads back bit for bit.
    const SpinMatrix& s = traj.states[rows].spins();
    for (int j = 0; j < 6; ++j) EXPECT_EQ(cells[2 + j], s.data()[j]);
    EXPECT_EQ(cells[8], traj.observable("energy")[rows]);
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Output, TrajectoryJsonlMatchesCsvFields) {
  const TrajectoryRecord traj = small_trajectory();
  std::istringstream in(trajectory_jsonl(traj));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("step").get<int>(), rows);
    EXPECT_EQ(j.at("t").get<double>(), traj.times[rows]);
    EXPECT_EQ(j.at("s2x").get<double>(), traj.states[rows].spin(1).x());
    EXPECT_TRUE(j.contains("iterations"));
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Output, SectionCsvHeader) {
  SectionCloud cloud;
  cloud.seeds.emplace_back(SpinMatrix(Vec3::UnitZ()));
  cloud.points.push_back({0, 1, SpinConfiguration(SpinMatrix(Vec3::UnitX()))});
  const std::string csv = section_csv(cloud);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seed,period,s1,s2,s3");
  EXPECT_NE(csv.find("\n0,1,1,0,0\n"), std::string::npos);
}

TEST(Output, StateFileRoundTrips) {
  const fs::path dir = scratch_dir("state");
  std::vector<SpinConfiguration> states;
  states.emplace_back(SpinMatrix(Vec3(0.6, 0.0, -0.8)), 12.566370614359172);
  states.emplace_back(SpinMatrix(Vec3(1.0, 2.0, 2.0) / 3.0), 12.566370614359172);
  const fs::path file = dir / "final.csv";
  atomic_write(file.string(), state_file_csv(states));
  const auto back = read_state_file(file.string());
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back[k].spins(), states[k].spins());
    EXPECT_EQ(back[k].time(), states[k].time());
  }
}

TEST(Output, StateFileErrorsAreIoErrors) {
  const fs::path dir = scratch_dir("state_bad");
  EXPECT_THROW(read_state_file((dir / "missing.csv").string()), IoError);
  atomic_write((dir / "bad.csv").string(), "a,b,c\n1,2,3\n");
  EXPECT_THROW(read_state_file((dir / "bad.csv").string()), IoError);
}

TEST(Output, AtomicWriteCreatesDirectoriesAndLeavesNoTemporary) {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "a" / "b" / "out.txt";
  atomic_write(file.string(), "first");
  atomic_write(file.string(), "second");
  EXPECT_EQ(slurp(file), "second");
  EXPECT_FALSE(fs::exists(file.string() + ".tmp"));
}

TEST(Output, SvgDocuments) {
  const std::string sphere =
      svg_sphere_scatter({{Vec3::UnitX(), Vec3::UnitZ()}, {-Vec3::UnitZ()}}, Vec3(1, 1, 1), "t");
  EXPECT_EQ(sphere.rfind("<svg", 0), 0u);
  EXPECT_NE(sphere.find("</svg>"), std::string::npos);
  const std::string plot = svg_line_plot({{"a", {0, 1, 2}, {1e-16, 2e-15, 1e-15}}}, "t", "x", "y");
  EXPECT_NE(plot.find("<polyline"), std::string::npos);
}

TEST(App, RunWritesTrajectoriesAndMetadata) {
  const fs::path dir = scratch_dir("run");
  RunConfig c = parse_config(kMinimal, "test.ini");
  c.out_dir = dir.string();
  c.prefix = "mini";
  c.svg = true;
  const RunOutcome out = run_simulation(c);
  EXPECT_TRUE(fs::exists(dir / "mini_spherical_o00.csv"));
  EXPECT_TRUE(fs::exists(dir / "mini_classical_o01.csv"));
  EXPECT_TRUE(fs::exists(dir / "mini_sphere.svg"));
  const auto meta = nlohmann::json::parse(slurp(dir / "mini.meta.json"));
  EXPECT_EQ(meta.at("seed").get<std::uint64_t>(), c.seed);
  EXPECT_EQ(meta.at("runs").size(), 4u);
  // The stored config reproduces the run.
  EXPECT_EQ(to_ini(parse_config(meta.at("config").get<std::string>(), "meta")), to_ini(c));
  for (const auto& f : out.files) EXPECT_TRUE(fs::exists(f)) << f;
}

}  // namespace
}  // namespace spinstep
