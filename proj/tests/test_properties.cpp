// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized structural checks, one instance per seed.

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include "spinstep/analysis.hpp"
#include "spinstep/integrators.hpp"
#include "spinstep/systems.hpp"

namespace spinstep {
namespace {

class Seeded : public ::testing::TestWithParam<int> {
 protected:
  Rng rng{static_cast<std::uint64_t>(1000 + GetParam())};

  Mat3 random_symmetric() {
    Mat3 a;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
    }
    return 0.5 * (a + a.transpose());
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

double max_norm(const SpinMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST_P(Seeded, SphericalStepStaysOnSphere) {
  const SpinSystem chain = heisenberg_chain({5, uniform(-1.5, 1.5), Boundary::Periodic});
  SpinConfiguration s(random_spins(5, rng));
  for (int k = 0; k < 20; ++k) {
    s = spherical_midpoint_step(chain, s, 0.2).next;
    ASSERT_LT(s.max_norm_deviation(), 1e-11) << "step " << k;
  }
}

TEST_P(Seeded, ClassicalOnGMatchesSpherical) {
  const SpinSystem sys = single_spin_quadratic(random_symmetric());
  const SpinConfiguration s(random_spins(1, rng));
  const double dt = uniform(0.05, 0.4);
  const auto a = spherical_midpoint_step(sys, s, dt);
  const auto b = classical_midpoint_on_g_step(sys, s, dt);
  EXPECT_LT(max_norm(a.next.spins() - b.next.spins()), 1e-15);
}

// The classical midpoint rule keeps every quadratic invariant of the flow;
// for a quadratic Hamiltonian that includes |s|^2 and H itself.
TEST_P(Seeded, ClassicalMidpointKeepsQuadraticInvariants) {
  const Mat3 a = random_symmetric();
  const SpinSystem sys = single_spin_quadratic(a);
  SpinConfiguration s(random_spins(1, rng));
  const Vec3 x0 = s.spin(0);
  const double h0 = 0.5 * x0.dot(a * x0);
  for (int k = 0; k < 25; ++k) s = classical_midpoint_step(sys, s, 0.3).next;
  const Vec3 x = s.spin(0);
  EXPECT_NEAR(x.squaredNorm(), 1.0, 1e-11);
  EXPECT_NEAR(0.5 * x.dot(a * x), h0, 1e-11);
}

TEST_P(Seeded, TotalSpinOfChainIsConserved) {
  const SpinSystem chain = heisenberg_chain({4, uniform(0.5, 1.5), Boundary::Open});
  SpinConfiguration s(random_spins(4, rng));
  const Vec3 m0 = s.spins().rowwise().sum();
  for (int k = 0; k < 30; ++k) s = spherical_midpoint_step(chain, s, 0.25).next;
  EXPECT_LT((Vec3(s.spins().rowwise().sum()) - m0).lpNorm<Eigen::Infinity>(), 1e-11);
}

TEST_P(Seeded, BackwardStepUndoesForwardStep) {
  const SpinSystem sys = single_spin_quadratic(random_symmetric());
  const SpinConfiguration s(random_spins(1, rng));
  const double dt = uniform(0.05, 0.5);
  for (Method m : {Method::SphericalMidpoint, Method::ClassicalMidpoint}) {
    const auto fwd = step(m, sys, s, dt);
    const auto back = step(m, sys, fwd.next, -dt);
    EXPECT_LT(max_norm(back.next.spins() - s.spins()), 1e-11) << method_name(m);
  }
}

TEST_P(Seeded, StepCommutesWithRotations) {
  const SpinSystem sys = perturbed_top();
  const SpinConfiguration s(random_spins(1, rng));
  const Mat3 r = random_orthogonal(rng, true);
  const SpinSystem moved = transformed(sys, r);
  const auto lhs = spherical_midpoint_step(moved, SpinConfiguration(r * s.spins()), 0.3);
  const auto rhs = spherical_midpoint_step(sys, s, 0.3);
  EXPECT_LT(max_norm(lhs.next.spins() - r * rhs.next.spins()), 1e-11);
}

// A constant field B: the exact map is a rotation about B, and the step is
// a rotation about B by a shorter angle. Either way the component along B
// is untouched.
TEST_P(Seeded, LinearFieldKeepsComponentAlongField) {
  const Vec3 b = random_unit_vector(rng) * uniform(0.2, 2.0);
  const SpinSystem sys = linear_field(b);
  const SpinConfiguration s(random_spins(1, rng));
  const auto next = spherical_midpoint_step(sys, s, 0.4).next;
  EXPECT_NEAR(next.spin(0).dot(b), s.spin(0).dot(b), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Range(0, 16));

}  // namespace
}  // namespace spinstep
