// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "spinstep/analysis.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/integrators.hpp"
#include "spinstep/systems.hpp"

namespace spinstep {
namespace {

constexpr double kPi = std::numbers::pi;

SpinMatrix one(const Vec3& v) { return SpinMatrix(v); }

SpinMatrix pair(const Vec3& a, const Vec3& b) {
  SpinMatrix s(3, 2);
  s.col(0) = a;
  s.col(1) = b;
  return s;
}

TEST(SpinningTop, EnergyOnAxes) {
  const SpinSystem top = spinning_top({{1.0, 2.0, 4.0}});
  EXPECT_DOUBLE_EQ(top.energy(one(Vec3::UnitX()), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(top.energy(one(Vec3::UnitY()), 0.0), 0.25);
  EXPECT_DOUBLE_EQ(top.energy(one(Vec3::UnitZ()), 0.0), 0.125);
  EXPECT_TRUE(top.energy_is_quadratic_invariant());
  EXPECT_THROW(spinning_top({{1.0, 0.0, 2.0}}), InvalidArgument);
}

TEST(PerturbedTop, EnergyIncludesCubicTerm) {
  const SpinSystem top = perturbed_top();
  const Vec3 x(0.3, -0.4, 0.5);
  double expected = 0.0;
  const double inertia[3] = {1.0, 2.0, 4.0};
  for (int j = 0; j < 3; ++j) {
    expected += 0.5 * (x[j] * x[j] + 2.0 / 3.0 * x[j] * x[j] * x[j]) / inertia[j];
  }
  EXPECT_NEAR(top.energy(one(x), 0.0), expected, 1e-16);
  EXPECT_FALSE(top.energy_is_quadratic_invariant());
}

TEST(ForcedTop, ForcingIsPeriodicAndOnThirdAxis) {
  const SpinSystem sys = forced_top(0.07);
  ASSERT_TRUE(sys.period());
  EXPECT_DOUBLE_EQ(*sys.period(), 2.0 * kPi);
  EXPECT_TRUE(sys.time_dependent());
  const SpinMatrix s = one(Vec3::UnitZ());
  EXPECT_NEAR(sys.energy(s, kPi / 2) - sys.energy(s, 0.0), 0.07, 1e-15);
  EXPECT_NEAR(sys.energy(s, 0.0), 0.25, 1e-16);  // I3 = 2
  EXPECT_NEAR(sys.energy(one(Vec3::UnitY()), 0.0), 0.375, 1e-16);  // I2 = 4/3
}

TEST(HeisenbergChain, AlignedEnergyCountsBonds) {
  for (Eigen::Index n : {2, 3, 10}) {
    SpinMatrix s(3, n);
    for (Eigen::Index i = 0; i < n; ++i) s.col(i) = Vec3::UnitZ();
    EXPECT_DOUBLE_EQ(heisenberg_chain({n, 1.5, Boundary::Periodic}).energy(s, 0.0), -1.5 * n);
    EXPECT_DOUBLE_EQ(heisenberg_chain({n, 1.5, Boundary::Open}).energy(s, 0.0), -1.5 * (n - 1));
  }
  EXPECT_THROW(heisenberg_chain({1, 1.0, Boundary::Open}), InvalidArgument);
}

TEST(HeisenbergChain, RotationInvariantEnergy) {
  Rng rng(3);
  const SpinSystem chain = heisenberg_chain({6, 0.8, Boundary::Periodic});
  const SpinMatrix s = random_spins(6, rng);
  for (int k = 0; k < 5; ++k) {
    const Mat3 r = random_orthogonal(rng, true);
    EXPECT_NEAR(chain.energy(r * s, 0.0), chain.energy(s, 0.0), 1e-14);
  }
}

TEST(PointVortices, PairEnergyClosedForm) {
  const double g1 = 1.5, g2 = -0.5;
  const SpinSystem sys = point_vortices({{g1, g2}});
  const Vec3 a = Vec3(0.2, 0.3, 0.9).normalized();
  const Vec3 b = Vec3(-0.5, 0.1, 0.4).normalized();
  const double c = a.dot(b);
  EXPECT_NEAR(sys.energy(pair(a, b), 0.0), -g1 * g2 / (4 * kPi) * std::log(2 - 2 * c), 1e-15);
}

TEST(PointVortices, CollisionThrows) {
  const SpinSystem sys = point_vortices({{1.0, 1.0}});
  const SpinMatrix s = pair(Vec3::UnitZ(), Vec3::UnitZ());
  EXPECT_THROW(sys.energy(s, 0.0), CollisionSingularity);
  EXPECT_THROW(sys.gradient(s, 0.0), CollisionSingularity);
  EXPECT_THROW(point_vortices({{1.0, 0.0}}), InvalidArgument);
}

// Two equal vortices rotate rigidly about (s1 + s2) / |s1 + s2| at
// omega = Gamma sqrt(2 + 2c) / (4 pi (1 - c)), c = s1 . s2.
TEST(PointVortices, TwoEqualVorticesRotateRigidly) {
  const double gamma = 1.3;
  const SpinSystem sys = point_vortices({{gamma, gamma}});
  const Vec3 a = Vec3(0.3, 0.1, 0.9).normalized();
  const Vec3 b = Vec3(-0.4, 0.2, 0.8).normalized();
  const double c = a.dot(b);
  const double omega = gamma * std::sqrt(2 + 2 * c) / (4 * kPi * (1 - c));
  const Vec3 axis = (a + b).normalized();
  const double t = 2.0;
  const Eigen::AngleAxisd rot(-omega * t, axis);
  const auto ref = reference_solve(sys, pair(a, b), 0.0, t, 1e-3);
  EXPECT_LT((Vec3(ref.spin(0)) - rot * a).norm(), 1e-11);
  EXPECT_LT((Vec3(ref.spin(1)) - rot * b).norm(), 1e-11);

  // The spherical midpoint converges to the same motion at second order.
  auto error_at = [&](double dt) {
    const auto traj = integrate_trajectory(sys, Method::SphericalMidpoint,
                                           SpinConfiguration(pair(a, b)), dt,
                                           std::lround(t / dt), {}, {});
    return (Vec3(traj.states.back().spin(0)) - rot * a).norm();
  };
  const double e1 = error_at(0.1), e2 = error_at(0.05);
  EXPECT_LT(e2, 1e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(PointVortices, VorticityMomentIsLinearIntegral) {
  const SpinSystem sys = point_vortices({{1.0, -2.0, 0.5}});
  ASSERT_EQ(sys.linear_integrals().size(), 1u);
  EXPECT_EQ(sys.linear_integrals()[0].name, "vorticity_moment");
  EXPECT_DOUBLE_EQ(sys.linear_integrals()[0].weights[1], -2.0);
}

TEST(Transformed, VectorFieldCommutesWithOrthogonalMaps) {
  Rng rng(11);
  const SpinSystem base = perturbed_top();
  const SpinMatrix s = random_spins(1, rng);
  for (bool reflect : {false, true}) {
    Mat3 r = random_orthogonal(rng, false);
    if (reflect) r = -r;
    const SpinSystem moved = transformed(base, r);
    const SpinMatrix lhs = spin_vector_field(moved, r * s, 0.0);
    const SpinMatrix rhs = r * spin_vector_field(base, s, 0.0);
    EXPECT_LT((lhs - rhs).norm(), 1e-14) << "reflection=" << reflect;
  }
  EXPECT_THROW(transformed(base, 2.0 * Mat3::Identity()), InvalidArgument);
}

TEST(GradientCheck, DetectsAWrongGradient) {
  SpinSystem::Definition d = perturbed_top().definition();
  d.gradient = [](const SpinMatrix& s, double) -> SpinMatrix { return 1.01 * s; };
  const SpinSystem wrong(d);
  const SpinMatrix s = one(Vec3(0.3, 0.4, 0.5));
  EXPECT_GT(gradient_check(wrong, s, 0.0, 1e-6), 1e-2);
  EXPECT_LT(gradient_check(perturbed_top(), s, 0.0, 1e-6), 1e-8);
  EXPECT_THROW(gradient_check(wrong, s, 0.0, 0.0), InvalidArgument);
}

TEST(MakeSystem, ParsesParameters) {
  const SpinSystem top = make_system("spinning_top", {{"inertia", "2, 3, 5"}});
  EXPECT_DOUBLE_EQ(top.energy(one(Vec3::UnitZ()), 0.0), 0.1);
  const SpinSystem chain =
      make_system("heisenberg_chain", {{"n", "5"}, {"coupling", "-1"}, {"boundary", "open"}});
  EXPECT_EQ(chain.spin_count(), 5);
  EXPECT_EQ(chain.parameters(), "N=5 J=-1 open");
  EXPECT_EQ(make_system("point_vortices", {{"n", "3"}}).spin_count(), 3);
  EXPECT_EQ(make_system("point_vortices", {{"strengths", "1,2"}}).spin_count(), 2);
  EXPECT_EQ(make_system("forced_top", {{"epsilon", "0"}}).parameters(), "I=(1, 4/3, 2) epsilon=0");
  EXPECT_NO_THROW(make_system("quadratic", {{"matrix", "1,0,0,0,2,0,0,0,3"}}));
}

TEST(MakeSystem, RejectsUnknownsAndMalformedValues) {
  EXPECT_THROW(make_system("rigid_body", {}), InvalidArgument);
  EXPECT_THROW(make_system("perturbed_top", {{"epsilon", "1"}}), InvalidArgument);
  EXPECT_THROW(make_system("spinning_top", {{"inertia", "1,2"}}), InvalidArgument);
  EXPECT_THROW(make_system("heisenberg_chain", {{"n", "ten"}}), InvalidArgument);
  EXPECT_THROW(make_system("heisenberg_chain", {{"boundary", "twisted"}}), InvalidArgument);
  EXPECT_THROW(make_system("quadratic", {}), InvalidArgument);
}

TEST(MakeSystem, EveryCatalogNameConstructs) {
  for (const auto& name : catalog_names()) {
    std::map<std::string, std::string> params;
    if (name == "quadratic") params["matrix"] = "1,0,0,0,1,0,0,0,1";
    EXPECT_NO_THROW(make_system(name, params)) << name;
  }
}

}  // namespace
}  // namespace spinstep
