// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spinstep/analysis.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/systems.hpp"
#include "text_util.hpp"

namespace spinstep {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& preset_sources();
}

namespace {

namespace pt = boost::property_tree;

// Line number of every "section.key" (and of every "[section]" header),
// for diagnostics. The property tree itself does not keep positions.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) {
    std::string section;
    int line = 0;
    for (auto raw : text::split(text, '\n')) {
      ++line;
      auto l = text::trim(raw);
      if (l.empty() || l.front() == ';' || l.front() == '#') continue;
      if (l.front() == '[') {
        section = std::string(text::trim(l.substr(1, l.find(']') - 1)));
        lines_.emplace(section, line);
        continue;
      }
      const auto eq = l.find('=');
      if (eq == std::string_view::npos) continue;
      lines_.emplace(section + "." + std::string(text::trim(l.substr(0, eq))), line);
    }
  }

  std::optional<int> find(const std::string& key) const {
    auto it = lines_.find(key);
    if (it == lines_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const pt::ptree& tree, const LineIndex& lines) : tree_(tree), lines_(lines) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(key, msg, lines_.find(key));
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    const std::string full = section + "." + key;
    seen_.insert(full);
    auto child = tree_.get_child_optional(pt::ptree::path_type(full, '.'));
    if (!child) return std::nullopt;
    return std::string(text::trim(child->data()));
  }

  void string(const std::string& section, const std::string& key, std::string& out) {
    if (auto v = raw(section, key)) {
      if (v->empty()) fail(section + "." + key, "value must not be empty");
      out = *v;
    }
  }

  void number(const std::string& section, const std::string& key, double& out) {
    if (auto v = raw(section, key)) {
      auto d = text::to_double(*v);
      if (!d || !std::isfinite(*d)) fail(section + "." + key, "expected a number, got '" + *v + "'");
      out = *d;
    }
  }

  template <class Int>
  void integer(const std::string& section, const std::string& key, Int& out) {
    if (auto v = raw(section, key)) {
      auto d = text::to_integer(*v);
      if (!d) fail(section + "." + key, "expected an integer, got '" + *v + "'");
      out = static_cast<Int>(*d);
    }
  }

  void boolean(const std::string& section, const std::string& key, bool& out) {
    if (auto v = raw(section, key)) {
      if (*v == "true" || *v == "yes" || *v == "1") {
        out = true;
      } else if (*v == "false" || *v == "no" || *v == "0") {
        out = false;
      } else {
        fail(section + "." + key, "expected true or false, got '" + *v + "'");
      }
    }
  }

  std::vector<std::string> list(const std::string& section, const std::string& key) {
    std::vector<std::string> out;
    if (auto v = raw(section, key)) {
      for (auto item : text::split(*v, ',')) {
        if (item.empty()) fail(section + "." + key, "empty list item");
        out.emplace_back(item);
      }
    }
    return out;
  }

  /// Every entry of a section not consumed by the typed readers.
  std::map<std::string, std::string> rest(const std::string& section) {
    std::map<std::string, std::string> out;
    if (auto child = tree_.get_child_optional(section)) {
      for (const auto& [key, node] : *child) {
        if (!seen_.count(section + "." + key)) {
          out.emplace(key, std::string(text::trim(node.data())));
          seen_.insert(section + "." + key);
        }
      }
    }
    return out;
  }

  void reject_unknown() const {
    static const std::set<std::string> sections{"run", "system", "initial", "solver", "output",
                                                "section"};
    for (const auto& [name, node] : tree_) {
      if (node.empty() && !node.data().empty()) fail("." + name, "entry outside of a section");
      if (!sections.count(name)) fail(name, "unknown section [" + name + "]");
      for (const auto& [key, value] : node) {
        if (!seen_.count(name + "." + key)) fail(name + "." + key, "unknown key");
      }
    }
  }

 private:
  const pt::ptree& tree_;
  const LineIndex& lines_;
  std::set<std::string> seen_;
};

std::string_view initial_kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::Explicit: return "explicit";
    case InitialKind::Random: return "random";
    case InitialKind::Lattice: return "lattice";
    case InitialKind::Named: return "named";
  }
  return "named";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

std::string_view format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "jsonl"; }

std::vector<SpinMatrix> named_initial_states(std::string_view name) {
  if (name == "fig2") return {SpinMatrix(Vec3(0.0, 0.7248, -0.6889))};
  if (name == "fig1") {
    // Thirteen single-spin states spread over the sphere; each lies on its
    // own periodic orbit of the perturbed top.
    const SpinMatrix lattice = fibonacci_sphere(13);
    std::vector<SpinMatrix> out;
    for (Eigen::Index i = 0; i < lattice.cols(); ++i) out.emplace_back(lattice.col(i));
    return out;
  }
  if (name == "north") return {SpinMatrix(Vec3(0.0, 0.0, 1.0))};
  throw InvalidArgument("unknown named initial state '" + std::string(name) +
                        "' (known: fig1, fig2, north)");
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  pt::ptree tree;
  {
    std::istringstream in{std::string(text)};
    try {
      pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("", e.message(), static_cast<int>(e.line()));
    }
  }
  const LineIndex lines(text);
  Reader r(tree, lines);
  RunConfig c;
  c.source = source;

  // [run]
  if (auto m = r.list("run", "method"); !m.empty()) {
    c.methods.clear();
    for (const auto& name : m) {
      try {
        c.methods.push_back(parse_method(name));
      } catch (const InvalidArgument& e) {
        r.fail("run.method", e.message());
      }
    }
  }
  r.number("run", "dt", c.dt);
  r.integer("run", "steps", c.steps);
  r.integer("run", "reference_substeps", c.reference_substeps);
  if (auto o = r.raw("run", "observers")) c.observers = r.list("run", "observers");
  if (auto s = r.raw("run", "seed")) {
    auto v = text::to_integer(*s);
    if (!v || *v < 0) r.fail("run.seed", "expected a non-negative integer");
    c.seed = static_cast<std::uint64_t>(*v);
  }

  // [system]
  r.string("system", "name", c.system);
  c.system_params = r.rest("system");

  // [initial]
  if (auto k = r.raw("initial", "kind")) {
    if (*k == "explicit") {
      c.initial.kind = InitialKind::Explicit;
    } else if (*k == "random") {
      c.initial.kind = InitialKind::Random;
    } else if (*k == "lattice") {
      c.initial.kind = InitialKind::Lattice;
    } else if (*k == "named") {
      c.initial.kind = InitialKind::Named;
    } else {
      r.fail("initial.kind", "expected explicit, random, lattice or named");
    }
  }
  r.string("initial", "spins", c.initial.spins);
  r.string("initial", "name", c.initial.name);
  r.integer("initial", "count", c.initial.count);
  r.number("initial", "t0", c.initial.t0);
  r.boolean("initial", "normalize", c.initial.normalize);

  // [solver]
  r.number("solver", "tolerance", c.solver.tolerance);
  r.integer("solver", "max_iterations", c.solver.max_iterations);

  // [output]
  r.string("output", "dir", c.out_dir);
  r.string("output", "prefix", c.prefix);
  if (auto f = r.raw("output", "format")) {
    if (*f == "csv") {
      c.format = OutputFormat::Csv;
    } else if (*f == "jsonl") {
      c.format = OutputFormat::Jsonl;
    } else {
      r.fail("output.format", "expected csv or jsonl");
    }
  }
  r.boolean("output", "svg", c.svg);

  // [section]
  r.integer("section", "steps_per_period", c.section.steps_per_period);
  r.integer("section", "periods", c.section.periods);
  if (auto v = r.raw("section", "resume_from")) c.section.resume_from = *v;

  r.reject_unknown();

  // Field-level checks that need the line index.
  auto check = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) r.fail(key, msg);
  };
  check(c.steps >= 1, "run.steps", "steps must be >= 1");
  check(c.dt != 0.0, "run.dt", "dt must be nonzero");
  check(c.reference_substeps >= 1, "run.reference_substeps", "must be >= 1");
  check(c.solver.tolerance > 0.0, "solver.tolerance", "tolerance must be positive");
  check(c.solver.max_iterations >= 1, "solver.max_iterations", "must be >= 1");
  check(c.initial.count >= 1, "initial.count", "count must be >= 1");
  check(c.section.steps_per_period >= 1, "section.steps_per_period", "must be >= 1");
  check(c.section.periods >= 1, "section.periods", "must be >= 1");
  std::optional<SpinSystem> sys;
  try {
    sys.emplace(make_system(c.system, c.system_params));
  } catch (const Error& e) {
    std::string key = "system.name";
    for (const auto& [param, value] : c.system_params) {
      if (e.message().find("." + param) != std::string::npos ||
          e.message().find("'" + param + "'") != std::string::npos) {
        key = "system." + param;
      }
    }
    r.fail(key, e.message());
  }
  try {
    for (const auto& o : c.observers) observers::by_name(o, *sys);
  } catch (const Error& e) {
    r.fail("run.observers", e.message());
  }
  try {
    resolve_initial_states(c, *sys);
  } catch (const Error& e) {
    const char* key = c.initial.kind == InitialKind::Explicit ? "initial.spins"
                      : c.initial.kind == InitialKind::Named  ? "initial.name"
                                                              : "initial.count";
    r.fail(key, e.message());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void validate_config(const RunConfig& c) {
  if (c.steps < 1) throw ConfigError("run.steps", "steps must be >= 1");
  if (c.dt == 0.0 || !std::isfinite(c.dt)) throw ConfigError("run.dt", "dt must be nonzero");
  if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance", "tolerance must be positive");
  if (c.solver.max_iterations < 1) throw ConfigError("solver.max_iterations", "must be >= 1");
  if (c.methods.empty()) throw ConfigError("run.method", "at least one method is required");
  try {
    const SpinSystem sys = make_system(c.system, c.system_params);
    resolve_initial_states(c, sys);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("system", e.message());
  }
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream out;
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(method_name(m));
  out << "[run]\n"
      << "method = " << join(methods) << "\n"
      << "dt = " << text::g17(c.dt) << "\n"
      << "steps = " << c.steps << "\n"
      << "reference_substeps = " << c.reference_substeps << "\n"
      << "observers = " << join(c.observers) << "\n"
      << "seed = " << c.seed << "\n\n";
  out << "[system]\nname = " << c.system << "\n";
  for (const auto& [k, v] : c.system_params) out << k << " = " << v << "\n";
  out << "\n[initial]\n"
      << "kind = " << initial_kind_name(c.initial.kind) << "\n";
  if (!c.initial.spins.empty()) out << "spins = " << c.initial.spins << "\n";
  out << "name = " << c.initial.name << "\n"
      << "count = " << c.initial.count << "\n"
      << "t0 = " << text::g17(c.initial.t0) << "\n"
      << "normalize = " << (c.initial.normalize ? "true" : "false") << "\n\n";
  out << "[solver]\n"
      << "tolerance = " << text::g17(c.solver.tolerance) << "\n"
      << "max_iterations = " << c.solver.max_iterations << "\n\n";
  out << "[output]\n"
      << "dir = " << c.out_dir << "\n"
      << "prefix = " << c.prefix << "\n"
      << "format = " << format_name(c.format) << "\n"
      << "svg = " << (c.svg ? "true" : "false") << "\n\n";
  out << "[section]\n"
      << "steps_per_period = " << c.section.steps_per_period << "\n"
      << "periods = " << c.section.periods << "\n";
  if (!c.section.resume_from.empty()) out << "resume_from = " << c.section.resume_from << "\n";
  return out.str();
}

std::vector<SpinConfiguration> resolve_initial_states(const RunConfig& c, const SpinSystem& system) {
  const InitialSpec& init = c.initial;
  const Eigen::Index n = system.spin_count().value_or(1);
  std::vector<SpinMatrix> raw;
  switch (init.kind) {
    case InitialKind::Explicit: {
      if (init.spins.empty()) throw InvalidArgument("initial spins are required for kind = explicit");
      for (auto state : text::split(init.spins, ';')) {
        if (state.empty()) continue;
        auto values = text::to_double_list(state);
        if (!values || values->empty() || values->size() % 3 != 0) {
          throw InvalidArgument("initial spins must be groups of 3 numbers");
        }
        SpinMatrix m(3, static_cast<Eigen::Index>(values->size() / 3));
        std::copy(values->begin(), values->end(), m.data());
        raw.push_back(std::move(m));
      }
      break;
    }
    case InitialKind::Random: {
      Rng rng(c.seed);
      for (int k = 0; k < init.count; ++k) raw.push_back(random_spins(n, rng));
      break;
    }
    case InitialKind::Lattice: {
      if (n == 1) {
        const SpinMatrix lattice = fibonacci_sphere(init.count);
        for (Eigen::Index i = 0; i < lattice.cols(); ++i) raw.emplace_back(lattice.col(i));
      } else {
        if (init.count != 1) throw InvalidArgument("lattice initial state for N > 1 spins needs count = 1");
        raw.push_back(fibonacci_sphere(n));
      }
      break;
    }
    case InitialKind::Named: raw = named_initial_states(init.name); break;
  }
  if (raw.empty()) throw InvalidArgument("no initial states");
  std::vector<SpinConfiguration> out;
  for (auto& m : raw) {
    if (m.cols() != n) {
      throw InvalidArgument("initial state has " + std::to_string(m.cols()) + " spins; system '" +
                            system.name() + "' expects " + std::to_string(n));
    }
    out.emplace_back(init.normalize ? normalize_columns(m) : m, init.t0);
  }
  return out;
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> all = [] {
    std::vector<PresetInfo> out;
    for (const auto& [name, body] : detail::preset_sources()) {
      PresetInfo p{std::string(name), "", std::string(body)};
      // The first comment line is the description.
      for (auto line : text::split(body, '\n')) {
        if (!line.empty() && (line.front() == ';' || line.front() == '#')) {
          p.description = std::string(text::trim(line.substr(1)));
          break;
        }
      }
      out.push_back(std::move(p));
    }
    return out;
  }();
  return all;
}

const PresetInfo& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

}  // namespace spinstep
