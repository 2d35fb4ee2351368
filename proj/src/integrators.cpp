// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/integrators.hpp"

#include <algorithm>
#include <cmath>

#include "spinstep/errors.hpp"

namespace spinstep {

void SolverOptions::validate() const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw InvalidArgument("solver tolerance must be positive");
  }
  if (max_iterations < 1) throw InvalidArgument("solver max_iterations must be >= 1");
}

FixedPointResult fixed_point_solve(const FixedPointMap& map, const Eigen::VectorXd& initial,
                                   const SolverOptions& opts) {
  opts.validate();
  Eigen::VectorXd z = initial;
  std::vector<double> history;
  history.reserve(16);
  for (int k = 1; k <= opts.max_iterations; ++k) {
    Eigen::VectorXd next = map(z);
    const double r = (next - z).lpNorm<Eigen::Infinity>();
    history.push_back(r);
    z = std::move(next);
    if (!std::isfinite(r)) throw NoConvergence(k, std::move(history));
    if (r < opts.tolerance) return {std::move(z), k, r};
  }
  throw NoConvergence(opts.max_iterations, std::move(history));
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::SphericalMidpoint: return "spherical";
    case Method::ClassicalMidpoint: return "classical";
    case Method::ClassicalMidpointOnG: return "classical-g";
    case Method::ExplicitEuler: return "euler";
    case Method::Reference: return "reference";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::SphericalMidpoint, Method::ClassicalMidpoint,
                   Method::ClassicalMidpointOnG, Method::ExplicitEuler, Method::Reference}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

namespace {

void check_step_args(const SpinSystem& system, const SpinConfiguration& s, double dt) {
  system.require_spin_count(s.size());
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("time step must be finite and nonzero");
}

// Solves z = s + dt * F(z) for the implicit midpoint-type rules; `field`
// maps the current iterate z to the right-hand side velocity.
template <class Field>
StepResult solve_implicit(const SpinConfiguration& s, double dt, const SolverOptions& opts,
                          Field&& field) {
  const Eigen::VectorXd s_flat = flat(s.spins());
  auto map = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const SpinMatrix zm = unflatten(z);
    return s_flat + dt * flat(field(zm));
  };
  FixedPointResult fp = fixed_point_solve(map, s_flat, opts);
  return {SpinConfiguration::unchecked(unflatten(fp.solution), s.time() + dt), fp.iterations,
          fp.residual};
}

}  // namespace

StepResult spherical_midpoint_step(const SpinSystem& system, const SpinConfiguration& s,
                                   double dt, const SolverOptions& opts) {
  check_step_args(system, s, dt);
  const double t_mid = s.time() + 0.5 * dt;
  return solve_implicit(s, dt, opts, [&](const SpinMatrix& z) {
    const SpinMatrix u = normalize_columns(s.spins() + z);
    return spin_vector_field(system, u, t_mid);
  });
}

StepResult classical_midpoint_step(const SpinSystem& system, const SpinConfiguration& s,
                                   double dt, const SolverOptions& opts) {
  check_step_args(system, s, dt);
  const double t_mid = s.time() + 0.5 * dt;
  return solve_implicit(s, dt, opts, [&](const SpinMatrix& z) {
    return spin_vector_field(system, 0.5 * (s.spins() + z), t_mid);
  });
}

StepResult classical_midpoint_on_g_step(const SpinSystem& system, const SpinConfiguration& s,
                                        double dt, const SolverOptions& opts) {
  check_step_args(system, s, dt);
  const double t_mid = s.time() + 0.5 * dt;
  return solve_implicit(s, dt, opts, [&](const SpinMatrix& z) {
    return normalized_vector_field(system, 0.5 * (s.spins() + z), t_mid);
  });
}

StepResult explicit_euler_step(const SpinSystem& system, const SpinConfiguration& s, double dt) {
  check_step_args(system, s, dt);
  SpinMatrix next = s.spins() + dt * normalized_vector_field(system, s.spins(), s.time());
  return {SpinConfiguration::unchecked(std::move(next), s.time() + dt), 1, 0.0};
}

SpinConfiguration reference_solve(const SpinSystem& system, const SpinMatrix& s, double t0,
                                  double t1, double fine_dt) {
  if (!(fine_dt > 0.0)) throw InvalidArgument("reference step must be positive");
  system.require_spin_count(s.cols());
  const double span = t1 - t0;
  const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / fine_dt - 1e-9)));
  const double h = span / static_cast<double>(n);
  SpinMatrix y = s;
  auto g = [&](const SpinMatrix& x, double t) { return normalized_vector_field(system, x, t); };
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const SpinMatrix k1 = g(y, t);
    const SpinMatrix k2 = g(y + 0.5 * h * k1, t + 0.5 * h);
    const SpinMatrix k3 = g(y + 0.5 * h * k2, t + 0.5 * h);
    const SpinMatrix k4 = g(y + h * k3, t + h);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return SpinConfiguration::unchecked(std::move(y), t1);
}

StepResult step(Method method, const SpinSystem& system, const SpinConfiguration& s, double dt,
                const StepOptions& opts) {
  switch (method) {
    case Method::SphericalMidpoint: return spherical_midpoint_step(system, s, dt, opts.solver);
    case Method::ClassicalMidpoint: return classical_midpoint_step(system, s, dt, opts.solver);
    case Method::ClassicalMidpointOnG:
      return classical_midpoint_on_g_step(system, s, dt, opts.solver);
    case Method::ExplicitEuler: return explicit_euler_step(system, s, dt);
    case Method::Reference: {
      check_step_args(system, s, dt);
      if (opts.reference_substeps < 1) throw InvalidArgument("reference_substeps must be >= 1");
      const double fine = std::abs(dt) / opts.reference_substeps;
      return {reference_solve(system, s.spins(), s.time(), s.time() + dt, fine),
              opts.reference_substeps, 0.0};
    }
  }
  throw InvalidArgument("unknown method");
}

namespace observers {

Observer energy() {
  return {"energy",
          [](const ObserverContext& c) { return c.system.energy(c.state.spins(), c.state.time()); }};
}

Observer energy_error() {
  return {"energy_error", [](const ObserverContext& c) {
            return std::abs(c.system.energy(c.state.spins(), c.state.time()) -
                            c.system.energy(c.initial.spins(), c.initial.time()));
          }};
}

Observer length_deviation() {
  return {"length_deviation",
          [](const ObserverContext& c) { return c.state.max_norm_deviation(); }};
}

Observer iterations() {
  return {"iterations", [](const ObserverContext& c) {
            return c.step ? static_cast<double>(c.step->iterations) : 0.0;
          }};
}

Observer residual() {
  return {"residual",
          [](const ObserverContext& c) { return c.step ? c.step->residual : 0.0; }};
}

std::vector<Observer> linear_integral(const LinearIntegral& integral) {
  std::vector<Observer> out;
  const char* suffix[] = {"_x", "_y", "_z"};
  for (int axis = 0; axis < 3; ++axis) {
    out.push_back({integral.name + suffix[axis],
                   [w = integral.weights, axis](const ObserverContext& c) {
                     const SpinMatrix& s = c.state.spins();
                     double sum = 0.0;
                     for (Eigen::Index i = 0; i < s.cols(); ++i) sum += w[i] * s(axis, i);
                     return sum;
                   }});
  }
  return out;
}

std::vector<Observer> by_name(std::string_view name, const SpinSystem& system) {
  if (name == "energy") return {energy()};
  if (name == "energy_error") return {energy_error()};
  if (name == "length") return {length_deviation()};
  if (name == "iterations") return {iterations()};
  if (name == "residual") return {residual()};
  if (name == "integrals") {
    std::vector<Observer> out;
    for (const auto& li : system.linear_integrals()) {
      auto obs = linear_integral(li);
      out.insert(out.end(), obs.begin(), obs.end());
    }
    return out;
  }
  throw InvalidArgument("unknown observer '" + std::string(name) + "'");
}

}  // namespace observers

bool TrajectoryRecord::has_observable(std::string_view name) const {
  return std::any_of(observables.begin(), observables.end(),
                     [&](const auto& kv) { return kv.first == name; });
}

const std::vector<double>& TrajectoryRecord::observable(std::string_view name) const {
  for (const auto& [key, series] : observables) {
    if (key == name) return series;
  }
  throw InvalidArgument("trajectory has no observable '" + std::string(name) + "'");
}

TrajectoryRecord integrate_trajectory(const SpinSystem& system, Method method,
                                      const SpinConfiguration& initial, double dt,
                                      long num_steps, const std::vector<Observer>& observers,
                                      const StepOptions& opts) {
  if (num_steps < 1) throw InvalidArgument("num_steps must be >= 1");
  system.require_spin_count(initial.size());
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("time step must be finite and nonzero");

  TrajectoryRecord rec;
  rec.times.reserve(num_steps + 1);
  rec.states.reserve(num_steps + 1);
  for (const auto& obs : observers) {
    rec.observables.emplace_back(obs.name, std::vector<double>{});
    rec.observables.back().second.reserve(num_steps + 1);
  }

  auto record = [&](const SpinConfiguration& state, const StepResult* result) {
    rec.times.push_back(state.time());
    rec.states.push_back(state);
    const ObserverContext ctx{system, initial, rec.states.back(), result};
    for (std::size_t k = 0; k < observers.size(); ++k) {
      rec.observables[k].second.push_back(observers[k].evaluate(ctx));
    }
  };

  record(initial, nullptr);
  for (long n = 1; n <= num_steps; ++n) {
    try {
      StepResult r = step(method, system, rec.states.back(), dt, opts);
      record(r.next, &r);
    } catch (Error& e) {
      e.set_step(static_cast<std::size_t>(n));
      throw;
    }
  }
  return rec;
}

}  // namespace spinstep
