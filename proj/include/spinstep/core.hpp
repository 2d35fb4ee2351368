// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spinstep {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// N spins (or N per-spin tangent vectors) stored column-wise; column i is
/// spin i. Storage is contiguous so a SpinMatrix can be viewed as a flat
/// 3N vector without copying.
using SpinMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

inline constexpr double kDegenerateNormThreshold = 1e-8;
inline constexpr double kStateNormTolerance = 1e-9;

/// A point of (S^2)^N together with its time coordinate.
class SpinConfiguration {
 public:
  /// Validates N >= 1 and | ||s_i|| - 1 | <= norm_tolerance for every spin.
  /// Inputs are never renormalized here; use normalize_columns first when
  /// starting from approximate data.
  explicit SpinConfiguration(SpinMatrix spins, double time = 0.0,
                             double norm_tolerance = kStateNormTolerance);

  /// Wraps the output of a one-step map. Length drift is left in place so
  /// observers can measure it; see max_norm_deviation().
  static SpinConfiguration unchecked(SpinMatrix spins, double time);

  const SpinMatrix& spins() const noexcept { return spins_; }
  Vec3 spin(Eigen::Index i) const { return spins_.col(i); }
  Eigen::Index size() const noexcept { return spins_.cols(); }
  double time() const noexcept { return time_; }

  double max_norm_deviation() const;

 private:
  SpinConfiguration() = default;

  SpinMatrix spins_;
  double time_ = 0.0;
};

/// Linear first integral sum_i w_i s_i (three scalar components).
struct LinearIntegral {
  std::string name;
  Eigen::VectorXd weights;
};

using EnergyFunction = std::function<double(const SpinMatrix&, double)>;
using GradientFunction = std::function<SpinMatrix(const SpinMatrix&, double)>;

/// A Hamiltonian on (S^2)^N given by an ambient formula on (R^3)^N.
///
/// gradient() returns the ambient gradient of the energy. The vector field
/// handed to the integrators uses field_gradient(), which scales spin i's
/// block by field_weight(i); the weights default to 1 and exist for systems
/// such as point vortices whose symplectic form is a weighted sum of area
/// elements.
class SpinSystem {
 public:
  struct Definition {
    std::string name;
    std::string parameters;  // human-readable, for reports and metadata
    EnergyFunction energy;
    GradientFunction gradient;
    std::optional<Eigen::Index> spin_count;  // empty: any N >= 1
    bool time_dependent = false;
    std::optional<double> period;
    Eigen::VectorXd field_weights;  // empty: all ones
    std::vector<LinearIntegral> linear_integrals;
    bool energy_is_quadratic_invariant = false;
  };

  explicit SpinSystem(Definition def);

  const std::string& name() const noexcept { return def_.name; }
  const std::string& parameters() const noexcept { return def_.parameters; }

  double energy(const SpinMatrix& s, double t) const { return def_.energy(s, t); }
  SpinMatrix gradient(const SpinMatrix& s, double t) const { return def_.gradient(s, t); }
  SpinMatrix field_gradient(const SpinMatrix& s, double t) const;

  double field_weight(Eigen::Index i) const;
  /// Weights of the area elements in the symplectic form: 1 / field_weight.
  Eigen::VectorXd symplectic_weights(Eigen::Index n) const;

  std::optional<Eigen::Index> spin_count() const noexcept { return def_.spin_count; }
  bool time_dependent() const noexcept { return def_.time_dependent; }
  std::optional<double> period() const noexcept { return def_.period; }
  const std::vector<LinearIntegral>& linear_integrals() const noexcept {
    return def_.linear_integrals;
  }
  bool energy_is_quadratic_invariant() const noexcept {
    return def_.energy_is_quadratic_invariant;
  }

  /// Throws InvalidArgument when n is not an admissible spin count.
  void require_spin_count(Eigen::Index n) const;

  const Definition& definition() const noexcept { return def_; }

 private:
  Definition def_;
};

/// v / ||v||; throws DegenerateMidpoint when ||v|| < threshold.
Vec3 normalize_to_sphere(const Vec3& v, double threshold = kDegenerateNormThreshold);

/// Column-wise normalize_to_sphere.
SpinMatrix normalize_columns(const SpinMatrix& s, double threshold = kDegenerateNormThreshold);

/// f_i = s_i x (field gradient)_i evaluated at an arbitrary point of (R^3)^N.
SpinMatrix spin_vector_field(const SpinSystem& system, const SpinMatrix& s, double t);

/// g(s) = f(s_1/||s_1||, ..., s_N/||s_N||). Constant along rays.
SpinMatrix normalized_vector_field(const SpinSystem& system, const SpinMatrix& s, double t);

/// u - (u.s) s.
Vec3 tangent_project(const Vec3& s, const Vec3& u);
SpinMatrix tangent_project(const SpinMatrix& s, const SpinMatrix& u);

/// s . (u x v), the area element of the unit sphere at s.
double area_form(const Vec3& s, const Vec3& u, const Vec3& v);

/// sum_i w_i area_form(s_i, u_i, v_i); empty weights mean all ones.
double total_area_form(const SpinMatrix& s, const SpinMatrix& u, const SpinMatrix& v,
                       const Eigen::VectorXd& weights = {});

/// max_i | ||s_i|| - 1 |.
double max_norm_deviation(const SpinMatrix& s);

/// Flat 3N view of a spin matrix.
inline Eigen::Map<const Eigen::VectorXd> flat(const SpinMatrix& s) {
  return {s.data(), s.size()};
}
inline SpinMatrix unflatten(const Eigen::VectorXd& z) {
  return Eigen::Map<const SpinMatrix>(z.data(), 3, z.size() / 3);
}

}  // namespace spinstep
