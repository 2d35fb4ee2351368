// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinstep/errors.hpp"
#include "text_util.hpp"

namespace spinstep {

namespace {

std::string fmt_vec(const std::array<double, 3>& v) {
  return "(" + text::shortest(v[0]) + ", " + text::shortest(v[1]) + ", " + text::shortest(v[2]) + ")";
}

}  // namespace

void MomentsOfInertia::validate() const {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("moments of inertia must be positive");
  }
}

void ChainSpec::validate() const {
  if (n < 2) throw InvalidArgument("chain needs at least 2 spins");
  if (!std::isfinite(coupling)) throw InvalidArgument("chain coupling must be finite");
}

void VortexSpec::validate() const {
  if (strengths.empty()) throw InvalidArgument("point vortices need at least one strength");
  for (double g : strengths) {
    if (g == 0.0 || !std::isfinite(g)) throw InvalidArgument("vortex strengths must be nonzero");
  }
}

SpinSystem spinning_top(const MomentsOfInertia& inertia) {
  inertia.validate();
  const Vec3 inv(1.0 / inertia.values[0], 1.0 / inertia.values[1], 1.0 / inertia.values[2]);
  SpinSystem::Definition d;
  d.name = "spinning_top";
  d.parameters = "I=" + fmt_vec(inertia.values);
  d.spin_count = 1;
  d.energy_is_quadratic_invariant = true;
  d.energy = [inv](const SpinMatrix& s, double) {
    return 0.5 * s.col(0).cwiseAbs2().dot(inv);
  };
  d.gradient = [inv](const SpinMatrix& s, double) -> SpinMatrix {
    return s.col(0).cwiseProduct(inv);
  };
  return SpinSystem(std::move(d));
}

SpinSystem perturbed_top() {
  const Vec3 inv(1.0, 0.5, 0.25);
  SpinSystem::Definition d;
  d.name = "perturbed_top";
  d.parameters = "I=(1, 2, 4)";
  d.spin_count = 1;
  d.energy = [inv](const SpinMatrix& s, double) {
    const Vec3 x = s.col(0);
    const Vec3 terms = x.cwiseAbs2() + (2.0 / 3.0) * x.cwiseAbs2().cwiseProduct(x);
    return 0.5 * terms.dot(inv);
  };
  d.gradient = [inv](const SpinMatrix& s, double) -> SpinMatrix {
    const Vec3 x = s.col(0);
    return (x + x.cwiseAbs2()).cwiseProduct(inv);
  };
  return SpinSystem(std::move(d));
}

SpinSystem forced_top(double epsilon) {
  if (!std::isfinite(epsilon)) throw InvalidArgument("forcing amplitude must be finite");
  const Vec3 inv(1.0, 0.75, 0.5);
  SpinSystem::Definition d;
  d.name = "forced_top";
  d.parameters = "I=(1, 4/3, 2) epsilon=" + text::shortest(epsilon);
  d.spin_count = 1;
  d.time_dependent = true;
  d.period = 2.0 * std::numbers::pi;
  d.energy = [inv, epsilon](const SpinMatrix& s, double t) {
    return 0.5 * s.col(0).cwiseAbs2().dot(inv) + epsilon * std::sin(t) * s(2, 0);
  };
  d.gradient = [inv, epsilon](const SpinMatrix& s, double t) -> SpinMatrix {
    Vec3 g = s.col(0).cwiseProduct(inv);
    g[2] += epsilon * std::sin(t);
    return g;
  };
  return SpinSystem(std::move(d));
}

SpinSystem heisenberg_chain(const ChainSpec& spec) {
  spec.validate();
  const Eigen::Index n = spec.n;
  const double j = spec.coupling;
  const bool periodic = spec.boundary == Boundary::Periodic;
  SpinSystem::Definition d;
  d.name = "heisenberg_chain";
  d.parameters = "N=" + std::to_string(n) + " J=" + text::shortest(j) +
                 (periodic ? " periodic" : " open");
  d.spin_count = n;
  d.linear_integrals.push_back({"total_spin", Eigen::VectorXd::Ones(n)});
  // Bonds (i, i+1); the wrap-around bond only for periodic chains. A
  // periodic chain of two spins has the bond counted twice, as the sum says.
  const Eigen::Index bonds = periodic ? n : n - 1;
  d.energy = [n, j, bonds](const SpinMatrix& s, double) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < bonds; ++i) sum += s.col(i).dot(s.col((i + 1) % n));
    return -j * sum;
  };
  d.gradient = [n, j, bonds](const SpinMatrix& s, double) -> SpinMatrix {
    SpinMatrix g = SpinMatrix::Zero(3, n);
    for (Eigen::Index i = 0; i < bonds; ++i) {
      const Eigen::Index k = (i + 1) % n;
      g.col(i) -= j * s.col(k);
      g.col(k) -= j * s.col(i);
    }
    return g;
  };
  return SpinSystem(std::move(d));
}

SpinSystem point_vortices(const VortexSpec& spec) {
  spec.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(spec.strengths.size());
  const Eigen::VectorXd gamma =
      Eigen::Map<const Eigen::VectorXd>(spec.strengths.data(), n);
  const double c = 1.0 / (4.0 * std::numbers::pi);
  SpinSystem::Definition d;
  d.name = "point_vortices";
  d.parameters = "N=" + std::to_string(n) + " strengths=";
  for (Eigen::Index i = 0; i < n; ++i) d.parameters += (i ? "," : "") + text::shortest(gamma[i]);
  d.spin_count = n;
  d.field_weights = gamma.cwiseInverse();
  d.linear_integrals.push_back({"vorticity_moment", gamma});

  auto gap = [](const SpinMatrix& s, Eigen::Index i, Eigen::Index k) {
    const double g = 2.0 - 2.0 * s.col(i).dot(s.col(k));
    if (!(g >= kVortexCollisionThreshold)) {
      throw CollisionSingularity(static_cast<std::size_t>(i), static_cast<std::size_t>(k), g);
    }
    return g;
  };
  d.energy = [n, gamma, c, gap](const SpinMatrix& s, double) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = i + 1; k < n; ++k) sum += gamma[i] * gamma[k] * std::log(gap(s, i, k));
    }
    return -c * sum;
  };
  d.gradient = [n, gamma, c, gap](const SpinMatrix& s, double) -> SpinMatrix {
    SpinMatrix g = SpinMatrix::Zero(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = i + 1; k < n; ++k) {
        const double w = 2.0 * c * gamma[i] * gamma[k] / gap(s, i, k);
        g.col(i) += w * s.col(k);
        g.col(k) += w * s.col(i);
      }
    }
    return g;
  };
  return SpinSystem(std::move(d));
}

SpinSystem constant_system(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("constant system needs at least one spin");
  SpinSystem::Definition d;
  d.name = "constant";
  d.parameters = "N=" + std::to_string(n);
  d.spin_count = n;
  d.energy_is_quadratic_invariant = true;
  d.linear_integrals.push_back({"total_spin", Eigen::VectorXd::Ones(n)});
  d.energy = [](const SpinMatrix&, double) { return 0.0; };
  d.gradient = [](const SpinMatrix& s, double) -> SpinMatrix {
    return SpinMatrix::Zero(3, s.cols());
  };
  return SpinSystem(std::move(d));
}

SpinSystem linear_field(const Vec3& b) {
  SpinSystem::Definition d;
  d.name = "linear_field";
  d.parameters = "B=" + fmt_vec({b[0], b[1], b[2]});
  d.spin_count = 1;
  d.energy = [b](const SpinMatrix& s, double) { return s.col(0).dot(b); };
  d.gradient = [b](const SpinMatrix&, double) -> SpinMatrix { return b; };
  return SpinSystem(std::move(d));
}

SpinSystem single_spin_quadratic(const Mat3& a) {
  const Mat3 sym = 0.5 * (a + a.transpose());
  SpinSystem::Definition d;
  d.name = "quadratic";
  d.parameters = "A=[";
  for (int k = 0; k < 9; ++k) d.parameters += (k ? "," : "") + text::shortest(sym(k / 3, k % 3));
  d.parameters += "]";
  d.spin_count = 1;
  d.energy_is_quadratic_invariant = true;
  d.energy = [sym](const SpinMatrix& s, double) {
    const Vec3 x = s.col(0);
    return 0.5 * x.dot(sym * x);
  };
  d.gradient = [sym](const SpinMatrix& s, double) -> SpinMatrix { return sym * s.col(0); };
  return SpinSystem(std::move(d));
}

SpinSystem transformed(const SpinSystem& system, const Mat3& rotation) {
  const double det = rotation.determinant();
  if ((rotation.transpose() * rotation - Mat3::Identity()).lpNorm<Eigen::Infinity>() > 1e-12) {
    throw InvalidArgument("transformation matrix is not orthogonal");
  }
  SpinSystem::Definition d = system.definition();
  d.name = system.name() + "_transformed";
  const auto energy = d.energy;
  const auto gradient = d.gradient;
  d.energy = [energy, rotation, det](const SpinMatrix& s, double t) {
    return det * energy(rotation.transpose() * s, t);
  };
  d.gradient = [gradient, rotation, det](const SpinMatrix& s, double t) -> SpinMatrix {
    return det * rotation * gradient(rotation.transpose() * s, t);
  };
  return SpinSystem(std::move(d));
}

double gradient_check(const SpinSystem& system, const SpinMatrix& s, double t, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const SpinMatrix grad = system.gradient(s, t);
  double err = 0.0;
  SpinMatrix probe = s;
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    for (int a = 0; a < 3; ++a) {
      const double x = s(a, i);
      probe(a, i) = x + h;
      const double up = system.energy(probe, t);
      probe(a, i) = x - h;
      const double down = system.energy(probe, t);
      probe(a, i) = x;
      err = std::max(err, std::abs((up - down) / (2.0 * h) - grad(a, i)));
    }
  }
  return err;
}

namespace {

class ParamReader {
 public:
  ParamReader(const std::string& system, const std::map<std::string, std::string>& params)
      : system_(system), params_(params) {}

  std::optional<std::string> take(const std::string& key) {
    auto it = params_.find(key);
    if (it == params_.end()) return std::nullopt;
    used_.push_back(key);
    return it->second;
  }

  double number(const std::string& key, double fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    auto v = text::to_double(*raw);
    if (!v) throw InvalidArgument(system_ + "." + key + ": expected a number, got '" + *raw + "'");
    return *v;
  }

  long long integer(const std::string& key, long long fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    auto v = text::to_integer(*raw);
    if (!v) throw InvalidArgument(system_ + "." + key + ": expected an integer, got '" + *raw + "'");
    return *v;
  }

  std::optional<std::vector<double>> list(const std::string& key, std::size_t expected = 0) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    auto v = text::to_double_list(*raw);
    if (!v || (expected && v->size() != expected)) {
      throw InvalidArgument(system_ + "." + key + ": expected " +
                            (expected ? std::to_string(expected) + " " : std::string()) +
                            "comma-separated numbers");
    }
    return v;
  }

  void finish() const {
    for (const auto& [key, value] : params_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw InvalidArgument("unknown parameter '" + key + "' for system " + system_);
      }
    }
  }

 private:
  std::string system_;
  const std::map<std::string, std::string>& params_;
  std::vector<std::string> used_;
};

}  // namespace

std::vector<std::string> catalog_names() {
  return {"spinning_top", "perturbed_top", "forced_top", "heisenberg_chain",
          "point_vortices", "constant", "linear_field", "quadratic"};
}

SpinSystem make_system(const std::string& name, const std::map<std::string, std::string>& params) {
  ParamReader p(name, params);
  auto finish = [&](SpinSystem s) {
    p.finish();
    return s;
  };
  if (name == "spinning_top") {
    auto i = p.list("inertia", 3).value_or(std::vector<double>{1.0, 2.0, 4.0});
    return finish(spinning_top({{i[0], i[1], i[2]}}));
  }
  if (name == "perturbed_top") return finish(perturbed_top());
  if (name == "forced_top") return finish(forced_top(p.number("epsilon", 0.07)));
  if (name == "heisenberg_chain") {
    ChainSpec spec;
    spec.n = p.integer("n", 100);
    spec.coupling = p.number("coupling", 1.0);
    const std::string boundary = p.take("boundary").value_or("periodic");
    if (boundary == "periodic") {
      spec.boundary = Boundary::Periodic;
    } else if (boundary == "open") {
      spec.boundary = Boundary::Open;
    } else {
      throw InvalidArgument("heisenberg_chain.boundary must be periodic or open");
    }
    return finish(heisenberg_chain(spec));
  }
  if (name == "point_vortices") {
    VortexSpec spec;
    if (auto s = p.list("strengths")) {
      spec.strengths = *s;
    } else {
      spec.strengths.assign(static_cast<std::size_t>(p.integer("n", 8)), 1.0);
    }
    return finish(point_vortices(spec));
  }
  if (name == "constant") return finish(constant_system(p.integer("n", 1)));
  if (name == "linear_field") {
    auto b = p.list("field", 3).value_or(std::vector<double>{0.0, 0.0, 1.0});
    return finish(linear_field(Vec3(b[0], b[1], b[2])));
  }
  if (name == "quadratic") {
    auto m = p.list("matrix", 9);
    if (!m) throw InvalidArgument("quadratic.matrix is required (9 numbers, row-major)");
    Mat3 a;
    for (int k = 0; k < 9; ++k) a(k / 3, k % 3) = (*m)[k];
    return finish(single_spin_quadratic(a));
  }
  throw InvalidArgument("unknown system '" + name + "'");
}

}  // namespace spinstep
