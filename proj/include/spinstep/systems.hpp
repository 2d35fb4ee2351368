// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spinstep/core.hpp"

namespace spinstep {

struct MomentsOfInertia {
  std::array<double, 3> values{1.0, 1.0, 1.0};
  void validate() const;
};

enum class Boundary { Periodic, Open };

struct ChainSpec {
  Eigen::Index n = 100;
  double coupling = 1.0;
  Boundary boundary = Boundary::Periodic;
  void validate() const;
};

struct VortexSpec {
  std::vector<double> strengths;
  void validate() const;
};

inline constexpr double kVortexCollisionThreshold = 1e-12;

/// H = sum_j s_j^2 / (2 I_j). H is a homogeneous quadratic invariant.
SpinSystem spinning_top(const MomentsOfInertia& inertia);

/// H = 1/2 sum_j (s_j^2 + (2/3) s_j^3) / I_j with I = (1, 2, 4).
SpinSystem perturbed_top();

/// H = 1/2 sum_j s_j^2 / I_j + epsilon sin(t) s_3 with I = (1, 4/3, 2);
/// period 2 pi.
SpinSystem forced_top(double epsilon);

/// H = -J sum_i s_i . s_{i+1}; total spin is a linear integral.
SpinSystem heisenberg_chain(const ChainSpec& spec);

/// H = -(1/4 pi) sum_{i<j} G_i G_j ln(2 - 2 s_i . s_j). The vortex dynamics
/// s_i' = (1/G_i) s_i x grad_i H are obtained through field weights 1/G_i.
/// Evaluating at a near-collision throws CollisionSingularity.
SpinSystem point_vortices(const VortexSpec& spec);

/// H = 0 on n spins.
SpinSystem constant_system(Eigen::Index n = 1);

/// H = s . b on a single spin; the exact flow rotates s about b at rate |b|.
SpinSystem linear_field(const Vec3& b);

/// H = 1/2 s^T A s (A symmetrized) on a single spin.
SpinSystem single_spin_quadratic(const Mat3& a);

/// Image of `system` under an orthogonal map R of every spin:
/// H'(x) = det(R) H(R^T x). Its spin field satisfies f'(R s) = R f(s), which
/// is the form of equivariance a one-step map can be tested against for
/// reflections as well as rotations.
SpinSystem transformed(const SpinSystem& system, const Mat3& rotation);

/// Max componentwise difference between the analytic ambient gradient and
/// central differences of H with step h.
double gradient_check(const SpinSystem& system, const SpinMatrix& s, double t, double h);

/// Builds a catalog system from a name and a string-valued parameter block
/// (the CLI config format). Unknown parameters are rejected.
SpinSystem make_system(const std::string& name, const std::map<std::string, std::string>& params);

/// Names accepted by make_system.
std::vector<std::string> catalog_names();

}  // namespace spinstep
