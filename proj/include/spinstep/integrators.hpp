// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinstep/core.hpp"

namespace spinstep {

/// Control of the fixed-point solve. Convergence is declared when the
/// max-norm of the update over all 3N components drops below tolerance.
struct SolverOptions {
  double tolerance = 1e-12;
  int max_iterations = 100;

  void validate() const;
};

struct StepResult {
  SpinConfiguration next;
  int iterations = 0;
  double residual = 0.0;
};

struct FixedPointResult {
  Eigen::VectorXd solution;
  int iterations = 0;
  double residual = 0.0;
};

using FixedPointMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Picard iteration z <- map(z) from `initial`. `iterations` counts map
/// evaluations. Throws NoConvergence (with the residual history) after
/// max_iterations or as soon as the update stops being finite.
FixedPointResult fixed_point_solve(const FixedPointMap& map, const Eigen::VectorXd& initial,
                                   const SolverOptions& opts);

enum class Method {
  SphericalMidpoint,
  ClassicalMidpoint,
  /// Classical midpoint rule applied to the normalized field g. Reaches the
  /// same discrete map as SphericalMidpoint along a separate code path.
  ClassicalMidpointOnG,
  /// First-order explicit Euler on g. Only a control for order estimation.
  ExplicitEuler,
  /// Classical RK4 on g with substeps; accuracy oracle.
  Reference,
};

std::string_view method_name(Method m);
/// Accepts "spherical", "classical", "classical-g", "euler", "reference".
Method parse_method(std::string_view name);

struct StepOptions {
  SolverOptions solver;
  int reference_substeps = 10;
};

// Time-dependent fields are evaluated at t_n + dt/2 in every implicit
// step, which keeps the maps self-adjoint. The returned state has time
// t_n + dt. dt == 0 is rejected.

StepResult spherical_midpoint_step(const SpinSystem& system, const SpinConfiguration& s,
                                   double dt, const SolverOptions& opts = {});
StepResult classical_midpoint_step(const SpinSystem& system, const SpinConfiguration& s,
                                   double dt, const SolverOptions& opts = {});
StepResult classical_midpoint_on_g_step(const SpinSystem& system, const SpinConfiguration& s,
                                        double dt, const SolverOptions& opts = {});
StepResult explicit_euler_step(const SpinSystem& system, const SpinConfiguration& s, double dt);

/// Integrates from s (at t0) to t1 with RK4 on g using ceil(|t1-t0|/fine_dt)
/// equal substeps. Global error is O(fine_dt^4).
SpinConfiguration reference_solve(const SpinSystem& system, const SpinMatrix& s, double t0,
                                  double t1, double fine_dt);

StepResult step(Method method, const SpinSystem& system, const SpinConfiguration& s, double dt,
                const StepOptions& opts = {});

/// Input handed to observers after each recorded state. `step` is null for
/// the initial state.
struct ObserverContext {
  const SpinSystem& system;
  const SpinConfiguration& initial;
  const SpinConfiguration& state;
  const StepResult* step;
};

struct Observer {
  std::string name;
  std::function<double(const ObserverContext&)> evaluate;
};

namespace observers {

Observer energy();
Observer energy_error();
Observer length_deviation();
Observer iterations();
Observer residual();
/// Three observers: <name>_x, <name>_y, <name>_z.
std::vector<Observer> linear_integral(const LinearIntegral& integral);

/// Resolves one of: energy, energy_error, length, iterations, residual,
/// integrals (expands to every linear integral the system declares).
std::vector<Observer> by_name(std::string_view name, const SpinSystem& system);

}  // namespace observers

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<SpinConfiguration> states;
  /// Insertion-ordered named series, one value per state.
  std::vector<std::pair<std::string, std::vector<double>>> observables;

  std::size_t size() const noexcept { return states.size(); }
  bool has_observable(std::string_view name) const;
  const std::vector<double>& observable(std::string_view name) const;
};

/// Applies `method` num_steps times from `initial`, recording the initial
/// state and every subsequent state. Step errors propagate with the 1-based
/// index of the failing step attached.
TrajectoryRecord integrate_trajectory(const SpinSystem& system, Method method,
                                      const SpinConfiguration& initial, double dt,
                                      long num_steps, const std::vector<Observer>& observers = {},
                                      const StepOptions& opts = {});

}  // namespace spinstep
