// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "spinstep/core.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/systems.hpp"

namespace spinstep {
namespace {

SpinMatrix one(const Vec3& v) { return SpinMatrix(v); }

TEST(SpinConfiguration, AcceptsUnitSpins) {
  SpinMatrix s(3, 2);
  s.col(0) = Vec3(1, 0, 0);
  s.col(1) = Vec3(0, 0.6, 0.8);
  const SpinConfiguration c(s, 1.5);
  EXPECT_EQ(c.size(), 2);
  EXPECT_DOUBLE_EQ(c.time(), 1.5);
  EXPECT_EQ(c.spin(1), Vec3(0, 0.6, 0.8));
  EXPECT_LT(c.max_norm_deviation(), 1e-15);
}

TEST(SpinConfiguration, RejectsNonUnitSpin) {
  EXPECT_THROW(SpinConfiguration(one(Vec3(0, 0.7248, -0.6889))), InvalidArgument);
  EXPECT_THROW(SpinConfiguration(one(Vec3(0, 0, 1.01))), InvalidArgument);
}

TEST(SpinConfiguration, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(SpinConfiguration(SpinMatrix(3, 0)), InvalidArgument);
  EXPECT_THROW(SpinConfiguration(one(Vec3(std::nan(""), 0, 1))), InvalidArgument);
}

TEST(SpinConfiguration, UncheckedKeepsOffSphereValues) {
  const auto c = SpinConfiguration::unchecked(one(Vec3(0, 0, 2)), 0.0);
  EXPECT_DOUBLE_EQ(c.max_norm_deviation(), 1.0);
}

TEST(Normalize, ProjectsToSphere) {
  const Vec3 u = normalize_to_sphere(Vec3(3, 0, 4));
  EXPECT_NEAR(u.x(), 0.6, 1e-16);
  EXPECT_NEAR(u.z(), 0.8, 1e-16);
}

TEST(Normalize, ThrowsBelowThreshold) {
  EXPECT_THROW(normalize_to_sphere(Vec3(1e-9, 0, 0)), DegenerateMidpoint);
  EXPECT_NO_THROW(normalize_to_sphere(Vec3(2e-8, 0, 0)));
  try {
    normalize_to_sphere(Vec3(0, 0, 0));
    FAIL();
  } catch (const DegenerateMidpoint& e) {
    EXPECT_EQ(e.norm(), 0.0);
  }
}

TEST(Normalize, ColumnsIndependently) {
  SpinMatrix s(3, 2);
  s.col(0) = Vec3(0, 2, 0);
  s.col(1) = Vec3(0, 0, -0.5);
  const SpinMatrix n = normalize_columns(s);
  EXPECT_EQ(Vec3(n.col(0)), Vec3(0, 1, 0));
  EXPECT_EQ(Vec3(n.col(1)), Vec3(0, 0, -1));
}

TEST(VectorField, LinearFieldIsCrossProduct) {
  const Vec3 b(0.3, -1.0, 2.0);
  const SpinSystem sys = linear_field(b);
  const Vec3 s = Vec3(1, 2, 2) / 3.0;
  const SpinMatrix f = spin_vector_field(sys, one(s), 0.0);
  const Vec3 expected(s.y() * b.z() - s.z() * b.y(), s.z() * b.x() - s.x() * b.z(),
                      s.x() * b.y() - s.y() * b.x());
  EXPECT_NEAR((Vec3(f.col(0)) - expected).norm(), 0.0, 1e-15);
}

TEST(VectorField, IsTangent) {
  const SpinSystem sys = perturbed_top();
  const Vec3 s = Vec3(0.2, -0.4, 0.7).normalized();
  const Vec3 f = spin_vector_field(sys, one(s), 0.0).col(0);
  EXPECT_NEAR(f.dot(s), 0.0, 1e-16);
}

TEST(VectorField, NormalizedFieldIsConstantAlongRays) {
  const SpinSystem sys = perturbed_top();
  const Vec3 s = Vec3(0.2, -0.4, 0.7);
  const SpinMatrix a = normalized_vector_field(sys, one(s), 0.0);
  const SpinMatrix b = normalized_vector_field(sys, one(3.7 * s), 0.0);
  EXPECT_LT((a - b).norm(), 1e-15);
  // f itself is not: the gradient of the cubic term is not homogeneous.
  const SpinMatrix fa = spin_vector_field(sys, one(s), 0.0);
  const SpinMatrix fb = spin_vector_field(sys, one(3.7 * s), 0.0);
  EXPECT_GT((fa - fb).norm(), 1e-3);
}

TEST(VectorField, FieldWeightsScaleEachSpin) {
  const SpinSystem sys = point_vortices({{2.0, -0.5}});
  SpinMatrix s(3, 2);
  s.col(0) = Vec3(1, 0, 0);
  s.col(1) = Vec3(0, 1, 0);
  const SpinMatrix grad = sys.gradient(s, 0.0);
  const SpinMatrix f = spin_vector_field(sys, s, 0.0);
  EXPECT_LT((Vec3(f.col(0)) - Vec3(s.col(0)).cross(Vec3(grad.col(0))) / 2.0).norm(), 1e-15);
  EXPECT_LT((Vec3(f.col(1)) - Vec3(s.col(1)).cross(Vec3(grad.col(1))) / -0.5).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(sys.symplectic_weights(2)[0], 2.0);
  EXPECT_DOUBLE_EQ(sys.symplectic_weights(2)[1], -0.5);
}

TEST(Geometry, TangentProjectRemovesRadialPart) {
  const Vec3 s(0, 0, 1);
  EXPECT_EQ(tangent_project(s, Vec3(1, 2, 3)), Vec3(1, 2, 0));
}

TEST(Geometry, AreaFormIsTripleProduct) {
  const Vec3 s(0, 0, 1);
  EXPECT_DOUBLE_EQ(area_form(s, Vec3(1, 0, 0), Vec3(0, 1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(area_form(s, Vec3(0, 1, 0), Vec3(1, 0, 0)), -1.0);
  Mat3 m;
  m << 0.3, 1.2, -0.7, 0.5, 0.1, 2.0, -1.0, 0.4, 0.9;
  EXPECT_NEAR(area_form(m.col(0), m.col(1), m.col(2)), m.determinant(), 1e-14);
}

TEST(Geometry, TotalAreaFormIsWeightedSum) {
  SpinMatrix s(3, 2), u(3, 2), v(3, 2);
  s << 0, 1, 0, 0, 1, 0;
  u << 1, 0, 0, 1, 0, 0;
  v << 0, 0, 1, 0, 0, 1;
  // column 0: s=(0,0,1), u=(1,0,0), v=(0,1,0): +1. column 1: s=(1,0,0),
  // u=(0,1,0), v=(0,0,1): +1.
  EXPECT_DOUBLE_EQ(total_area_form(s, u, v, Eigen::VectorXd()), 2.0);
  Eigen::VectorXd w(2);
  w << 3.0, -0.5;
  EXPECT_DOUBLE_EQ(total_area_form(s, u, v, w), 2.5);
}

TEST(Geometry, FlatRoundTrip) {
  SpinMatrix s(3, 2);
  s << 1, 4, 2, 5, 3, 6;
  const Eigen::VectorXd z = flat(s);
  ASSERT_EQ(z.size(), 6);
  EXPECT_EQ(z[0], 1);
  EXPECT_EQ(z[1], 2);
  EXPECT_EQ(z[3], 4);
  EXPECT_EQ(unflatten(z), s);
}

TEST(SpinSystem, RequireSpinCount) {
  const SpinSystem top = perturbed_top();
  EXPECT_NO_THROW(top.require_spin_count(1));
  EXPECT_THROW(top.require_spin_count(2), InvalidArgument);
  const SpinSystem free = constant_system(4);
  EXPECT_THROW(free.require_spin_count(3), InvalidArgument);
}

TEST(SpinSystem, NeedsEnergyAndGradient) {
  SpinSystem::Definition d;
  d.name = "broken";
  EXPECT_THROW(SpinSystem{d}, InvalidArgument);
}

TEST(Errors, ContextIsAppendedToMessage) {
  NoConvergence e(100, {1e-3, 1e-4, 1e-5});
  e.set_step(17);
  const std::string what = e.what();
  EXPECT_EQ(what.rfind("step 17: ", 0), 0u);
  EXPECT_NE(what.find("1.000e-05"), std::string::npos);
  EXPECT_EQ(e.residual_history().size(), 3u);
  EXPECT_DOUBLE_EQ(e.residual(), 1e-5);
}

TEST(Errors, ConfigErrorFormatsLineAndField) {
  const ConfigError e("run.steps", "steps must be >= 1", 7);
  EXPECT_EQ(std::string(e.what()), "config line 7 [run.steps]: steps must be >= 1");
  EXPECT_EQ(e.line(), 7);
}

}  // namespace
}  // namespace spinstep
