// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spinstep/core.hpp"
#include "spinstep/integrators.hpp"

namespace spinstep {

using Rng = std::mt19937_64;

Vec3 random_unit_vector(Rng& rng);
SpinMatrix random_spins(Eigen::Index n, Rng& rng);
/// Haar-distributed rotation; with allow_reflection, det = -1 half the time.
Mat3 random_orthogonal(Rng& rng, bool allow_reflection);
/// Random tangent vector at s, projected per spin and scaled to unit
/// Frobenius norm.
SpinMatrix random_tangent(const SpinMatrix& s, Rng& rng);
/// n points spread quasi-uniformly over the sphere (Fibonacci lattice).
SpinMatrix fibonacci_sphere(Eigen::Index n);

/// One named property check. pass <=> defect <= tolerance. Lower-bound
/// requirements ("at least 100x larger") are stated as a ratio defect.
struct VerificationCheck {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string context;
};

class VerificationReport {
 public:
  explicit VerificationReport(std::uint64_t seed = 0) : seed_(seed) {}

  void add(std::string name, double defect, double tolerance, std::string context = {});
  void append(const VerificationReport& other);

  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<VerificationCheck>& checks() const noexcept { return checks_; }
  bool all_passed() const;

  std::string to_text() const;
  /// Deterministic machine-readable form (no timestamps).
  std::string to_json() const;

 private:
  std::uint64_t seed_;
  std::vector<VerificationCheck> checks_;
};

/// |H(s_n) - H(s_0)| for every recorded state. Rejects time-dependent
/// systems.
std::vector<double> energy_error_series(const SpinSystem& system, const TrajectoryRecord& traj);

/// Finite-difference pullback of the (weighted) area form through one step:
/// max over `trials` random tangent pairs (u, v) at s of
///   | omega_{phi(s)}(D phi u, D phi v) - omega_s(u, v) |,
/// where D phi u is a central difference along s_i -> normalize(s_i + e u_i).
/// dt == 0 probes the identity map.
double symplecticity_defect(const SpinSystem& system, Method method, const SpinConfiguration& s,
                            double dt, double probe_scale, int trials, std::uint64_t seed,
                            const StepOptions& opts = {});

/// max over R of || Phi'(R s) - R Phi(s) ||_max, where Phi' is the same
/// method applied to transformed(system, R).
double equivariance_defect(Method method, const SpinSystem& system, const SpinConfiguration& s,
                           double dt, const std::vector<Mat3>& rotations,
                           const StepOptions& opts = {});

/// || Phi_{-dt}(Phi_dt(s)) - s ||_max. The backward step starts from the
/// forward result's time, so a time-dependent field is evaluated at the
/// same midpoint time both ways.
double self_adjointness_defect(Method method, const SpinSystem& system,
                               const SpinConfiguration& s, double dt,
                               const StepOptions& opts = {});

struct ConvergenceStudy {
  std::vector<double> step_sizes;
  std::vector<double> errors;
  double order = 0.0;
};

/// Global error at horizon T versus reference_solve(fine step
/// reference_dt), and the least-squares slope of log error over log dt.
ConvergenceStudy convergence_order(const SpinSystem& system, Method method,
                                   const SpinConfiguration& s0, double horizon,
                                   const std::vector<double>& step_sizes,
                                   const StepOptions& opts = {}, double reference_dt = 1e-3);

/// Least-squares slope of y over x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SectionPoint {
  std::size_t seed = 0;
  long period = 0;
  SpinConfiguration state;
};

struct SectionCloud {
  std::vector<SpinConfiguration> seeds;
  std::vector<SectionPoint> points;  // ordered by seed, then period
  std::vector<SpinConfiguration> final_states;
};

struct SectionOptions {
  int steps_per_period = 20;
  long periods = 500;
  long first_period = 1;  // index given to the first sample (resumed runs)
  StepOptions step;
  std::size_t threads = 0;  // 0: thread_budget()
};

/// Integrates every seed for `periods` forcing periods with dt = period / k,
/// sampling after each k steps. Seeds run concurrently; output order does
/// not depend on the thread count. Errors carry the seed index.
SectionCloud poincare_section(const SpinSystem& system, Method method,
                              const std::vector<SpinConfiguration>& seeds,
                              const SectionOptions& opts);

/// max over n of || sum_i w_i s_i(n) - sum_i w_i s_i(0) ||_max.
double linear_integral_drift(const TrajectoryRecord& traj, const Eigen::VectorXd& weights);

/// min over n >= skip of the Euclidean distance from state n to state 0.
double recurrence_distance(const TrajectoryRecord& traj, std::size_t skip);

/// Worker threads allowed: SPINSTEP_THREADS if set and positive, otherwise
/// the hardware concurrency.
std::size_t thread_budget();

}  // namespace spinstep
