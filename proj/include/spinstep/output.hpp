// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "spinstep/analysis.hpp"
#include "spinstep/config.hpp"
#include "spinstep/integrators.hpp"

namespace spinstep {

/// Writes to a temporary sibling and renames it over `path`.
void atomic_write(const std::string& path, const std::string& content);

/// step, t, s1x, s1y, s1z, ..., then one column per observable.
std::string trajectory_csv(const TrajectoryRecord& traj);
/// One JSON object per state with the same fields as the CSV.
std::string trajectory_jsonl(const TrajectoryRecord& traj);

/// seed, period, s1, s2, s3 (single-spin sections; multi-spin sections
/// continue with s2x... as in the trajectory layout).
std::string section_csv(const SectionCloud& cloud);
std::string section_jsonl(const SectionCloud& cloud);

/// seed, t, s1x, s1y, s1z, ...: the state a section run can resume from.
std::string state_file_csv(const std::vector<SpinConfiguration>& states);
std::vector<SpinConfiguration> read_state_file(const std::string& path);

/// Orthographic scatter of unit vectors seen from `view` (front hemisphere
/// dark, back hemisphere faint), one colour per group.
std::string svg_sphere_scatter(const std::vector<std::vector<Vec3>>& groups, const Vec3& view,
                               const std::string& title);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot of one or more series sharing the axes.
std::string svg_line_plot(const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

}  // namespace spinstep
