// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinstep/errors.hpp"
#include "text_util.hpp"

namespace spinstep {

namespace fs = std::filesystem;

void atomic_write(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

namespace {

std::vector<std::string> spin_columns(Eigen::Index n) {
  std::vector<std::string> cols;
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (const char* axis : {"x", "y", "z"}) cols.push_back("s" + std::to_string(i) + axis);
  }
  return cols;
}

// JSON numbers for finite values; null otherwise.
std::string json_number(double x) { return std::isfinite(x) ? text::g17(x) : "null"; }

}  // namespace

std::string trajectory_csv(const TrajectoryRecord& traj) {
  std::string out = "step,t";
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  for (const auto& c : spin_columns(n)) out += "," + c;
  for (const auto& [name, series] : traj.observables) out += "," + name;
  out += "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += std::to_string(k) + "," + text::g17(traj.times[k]);
    const SpinMatrix& s = traj.states[k].spins();
    for (Eigen::Index j = 0; j < s.size(); ++j) out += "," + text::g17(s.data()[j]);
    for (const auto& [name, series] : traj.observables) out += "," + text::g17(series[k]);
    out += "\n";
  }
  return out;
}

std::string trajectory_jsonl(const TrajectoryRecord& traj) {
  std::string out;
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  const auto cols = spin_columns(n);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += "{\"step\":" + std::to_string(k) + ",\"t\":" + json_number(traj.times[k]);
    const SpinMatrix& s = traj.states[k].spins();
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      out += ",\"" + cols[static_cast<std::size_t>(j)] + "\":" + json_number(s.data()[j]);
    }
    for (const auto& [name, series] : traj.observables) {
      out += ",\"" + name + "\":" + json_number(series[k]);
    }
    out += "}\n";
  }
  return out;
}

namespace {

std::vector<std::string> section_spin_columns(const SectionCloud& cloud) {
  const Eigen::Index n = cloud.seeds.empty() ? 1 : cloud.seeds.front().size();
  if (n == 1) return {"s1", "s2", "s3"};
  return spin_columns(n);
}

}  // namespace

std::string section_csv(const SectionCloud& cloud) {
  std::string out = "seed,period";
  for (const auto& c : section_spin_columns(cloud)) out += "," + c;
  out += "\n";
  for (const auto& p : cloud.points) {
    out += std::to_string(p.seed) + "," + std::to_string(p.period);
    const SpinMatrix& s = p.state.spins();
    for (Eigen::Index j = 0; j < s.size(); ++j) out += "," + text::g17(s.data()[j]);
    out += "\n";
  }
  return out;
}

std::string section_jsonl(const SectionCloud& cloud) {
  std::string out;
  const auto cols = section_spin_columns(cloud);
  for (const auto& p : cloud.points) {
    out += "{\"seed\":" + std::to_string(p.seed) + ",\"period\":" + std::to_string(p.period);
    const SpinMatrix& s = p.state.spins();
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      out += ",\"" + cols[static_cast<std::size_t>(j)] + "\":" + json_number(s.data()[j]);
    }
    out += "}\n";
  }
  return out;
}

std::string state_file_csv(const std::vector<SpinConfiguration>& states) {
  std::string out = "seed,t";
  const Eigen::Index n = states.empty() ? 0 : states.front().size();
  for (const auto& c : spin_columns(n)) out += "," + c;
  out += "\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    out += std::to_string(k) + "," + text::g17(states[k].time());
    const SpinMatrix& s = states[k].spins();
    for (Eigen::Index j = 0; j < s.size(); ++j) out += "," + text::g17(s.data()[j]);
    out += "\n";
  }
  return out;
}

std::vector<SpinConfiguration> read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("state file '" + path + "' is empty");
  const auto header = text::split(line, ',');
  if (header.size() < 5 || header[0] != "seed" || header[1] != "t" || (header.size() - 2) % 3 != 0) {
    throw IoError("state file '" + path + "' has an unexpected header");
  }
  const Eigen::Index n = static_cast<Eigen::Index>((header.size() - 2) / 3);
  std::vector<SpinConfiguration> states;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != header.size()) {
      throw IoError(path + ":" + std::to_string(line_no) + ": wrong number of fields");
    }
    auto t = text::to_double(fields[1]);
    SpinMatrix s(3, n);
    for (Eigen::Index j = 0; j < 3 * n; ++j) {
      auto v = text::to_double(fields[static_cast<std::size_t>(j + 2)]);
      if (!v || !t) throw IoError(path + ":" + std::to_string(line_no) + ": not a number");
      s.data()[j] = *v;
    }
    states.emplace_back(std::move(s), *t);
  }
  return states;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string f3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string svg_sphere_scatter(const std::vector<std::vector<Vec3>>& groups, const Vec3& view,
                               const std::string& title) {
  const double size = 480.0, c = size / 2.0, r = size / 2.0 - 20.0;
  const Vec3 w = view.normalized();
  // Screen basis: e1 horizontal, e2 vertical (towards +z where possible).
  Vec3 up = std::abs(w.z()) < 0.95 ? Vec3::UnitZ() : Vec3::UnitY();
  const Vec3 e1 = up.cross(w).normalized();
  const Vec3 e2 = w.cross(e1);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20
      << "\" viewBox=\"0 0 " << size << " " << size + 20 << "\">\n"
      << "<title>" << xml_escape(title) << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<circle cx=\"" << c << "\" cy=\"" << c + 20 << "\" r=\"" << r
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n"
      << "<text x=\"8\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(title)
      << "</text>\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const char* colour = kPalette[g % std::size(kPalette)];
    out << "<g fill=\"" << colour << "\">\n";
    for (const Vec3& p : groups[g]) {
      const double depth = p.dot(w);
      const double x = c + r * p.dot(e1);
      const double y = c + 20 - r * p.dot(e2);
      out << "<circle cx=\"" << f3(x) << "\" cy=\"" << f3(y) << "\" r=\"1.1\""
          << (depth < 0 ? " fill-opacity=\"0.15\"" : "") << "/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_line_plot(const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label) {
  const double width = 640.0, height = 400.0;
  const double left = 70.0, right = 20.0, top = 30.0, bottom = 50.0;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if (first) {
        xmin = xmax = s.x[k];
        ymin = ymax = s.y[k];
        first = false;
      }
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + pw * (x - xmin) / (xmax - xmin); };
  auto sy = [&](double y) { return top + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<title>" << xml_escape(title) << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n"
      << "<text x=\"" << left << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(title) << "</text>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n"
      << "<text x=\"14\" y=\"" << top + ph / 2 << "\" font-family=\"sans-serif\" font-size=\"12\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 14 " << top + ph / 2 << ")\">"
      << xml_escape(y_label) << "</text>\n";
  char tick[64];
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    std::snprintf(tick, sizeof tick, "%.3g", xv);
    out << "<text x=\"" << f3(sx(xv)) << "\" y=\"" << top + ph + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << tick
        << "</text>\n";
    std::snprintf(tick, sizeof tick, "%.3g", yv);
    out << "<text x=\"" << left - 4 << "\" y=\"" << f3(sy(yv) + 3)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << tick
        << "</text>\n";
  }
  for (std::size_t g = 0; g < series.size(); ++g) {
    const auto& s = series[g];
    const char* colour = kPalette[g % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    // Thin long series to at most ~2000 vertices.
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
    for (std::size_t k = 0; k < s.x.size(); k += stride) {
      if (!std::isfinite(s.y[k])) continue;
      out << f3(sx(s.x[k])) << "," << f3(sy(s.y[k])) << " ";
    }
    out << "\"/>\n"
        << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 + 14 * static_cast<double>(g)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colour << "\">"
        << xml_escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace spinstep
