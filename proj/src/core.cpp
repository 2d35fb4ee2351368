// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/core.hpp"

#include <cmath>

#include "spinstep/errors.hpp"

namespace spinstep {

SpinConfiguration::SpinConfiguration(SpinMatrix spins, double time, double norm_tolerance)
    : spins_(std::move(spins)), time_(time) {
  if (spins_.cols() < 1) throw InvalidArgument("configuration needs at least one spin");
  if (!spins_.allFinite()) throw InvalidArgument("configuration has non-finite components");
  for (Eigen::Index i = 0; i < spins_.cols(); ++i) {
    const double dev = std::abs(spins_.col(i).norm() - 1.0);
    if (dev > norm_tolerance) {
      throw InvalidArgument("spin " + std::to_string(i) + " is not unit length (deviation " +
                            std::to_string(dev) + ")");
    }
  }
}

SpinConfiguration SpinConfiguration::unchecked(SpinMatrix spins, double time) {
  SpinConfiguration c;
  c.spins_ = std::move(spins);
  c.time_ = time;
  return c;
}

double SpinConfiguration::max_norm_deviation() const {
  return spinstep::max_norm_deviation(spins_);
}

SpinSystem::SpinSystem(Definition def) : def_(std::move(def)) {
  if (!def_.energy || !def_.gradient) {
    throw InvalidArgument("spin system '" + def_.name + "' needs energy and gradient");
  }
  if (def_.spin_count && def_.field_weights.size() > 0 &&
      def_.field_weights.size() != *def_.spin_count) {
    throw InvalidArgument("field weights do not match spin count");
  }
}

SpinMatrix SpinSystem::field_gradient(const SpinMatrix& s, double t) const {
  SpinMatrix g = def_.gradient(s, t);
  if (def_.field_weights.size() > 0) {
    for (Eigen::Index i = 0; i < g.cols(); ++i) g.col(i) *= def_.field_weights[i];
  }
  return g;
}

double SpinSystem::field_weight(Eigen::Index i) const {
  return def_.field_weights.size() > 0 ? def_.field_weights[i] : 1.0;
}

Eigen::VectorXd SpinSystem::symplectic_weights(Eigen::Index n) const {
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = 1.0 / field_weight(i);
  return w;
}

void SpinSystem::require_spin_count(Eigen::Index n) const {
  if (n < 1) throw InvalidArgument("configuration needs at least one spin");
  if (def_.spin_count && *def_.spin_count != n) {
    throw InvalidArgument("system '" + def_.name + "' expects " +
                          std::to_string(*def_.spin_count) + " spins, got " +
                          std::to_string(n));
  }
}

Vec3 normalize_to_sphere(const Vec3& v, double threshold) {
  const double n = v.norm();
  if (!(n >= threshold)) throw DegenerateMidpoint(n);
  return v / n;
}

SpinMatrix normalize_columns(const SpinMatrix& s, double threshold) {
  SpinMatrix out(3, s.cols());
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    out.col(i) = normalize_to_sphere(s.col(i), threshold);
  }
  return out;
}

SpinMatrix spin_vector_field(const SpinSystem& system, const SpinMatrix& s, double t) {
  const SpinMatrix grad = system.field_gradient(s, t);
  SpinMatrix f(3, s.cols());
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    f.col(i) = s.col(i).cross(grad.col(i));
  }
  return f;
}

SpinMatrix normalized_vector_field(const SpinSystem& system, const SpinMatrix& s, double t) {
  return spin_vector_field(system, normalize_columns(s), t);
}

Vec3 tangent_project(const Vec3& s, const Vec3& u) { return u - u.dot(s) * s; }

SpinMatrix tangent_project(const SpinMatrix& s, const SpinMatrix& u) {
  SpinMatrix out(3, s.cols());
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    out.col(i) = tangent_project(Vec3(s.col(i)), Vec3(u.col(i)));
  }
  return out;
}

double area_form(const Vec3& s, const Vec3& u, const Vec3& v) { return s.dot(u.cross(v)); }

double total_area_form(const SpinMatrix& s, const SpinMatrix& u, const SpinMatrix& v,
                       const Eigen::VectorXd& weights) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    const double w = weights.size() > 0 ? weights[i] : 1.0;
    sum += w * area_form(s.col(i), u.col(i), v.col(i));
  }
  return sum;
}

double max_norm_deviation(const SpinMatrix& s) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    dev = std::max(dev, std::abs(s.col(i).norm() - 1.0));
  }
  return dev;
}

}  // namespace spinstep
