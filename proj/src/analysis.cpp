// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "spinstep/errors.hpp"
#include "spinstep/systems.hpp"
#include "text_util.hpp"

namespace spinstep {

namespace {

// Draws in a fixed order; function arguments are evaluated in an
// unspecified order.
Vec3 normal_vector(std::normal_distribution<double>& normal, Rng& rng) {
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = normal(rng);
  return v;
}

}  // namespace

Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> normal;
  while (true) {
    const Vec3 v = normal_vector(normal, rng);
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
}

SpinMatrix random_spins(Eigen::Index n, Rng& rng) {
  SpinMatrix s(3, n);
  for (Eigen::Index i = 0; i < n; ++i) s.col(i) = random_unit_vector(rng);
  return s;
}

Mat3 random_orthogonal(Rng& rng, bool allow_reflection) {
  std::normal_distribution<double> normal;
  double c[4];
  for (double& x : c) x = normal(rng);
  Eigen::Quaterniond q(c[0], c[1], c[2], c[3]);
  q.normalize();
  Mat3 r = q.toRotationMatrix();
  if (allow_reflection && (rng() & 1u)) r = -r;
  return r;
}

SpinMatrix random_tangent(const SpinMatrix& s, Rng& rng) {
  std::normal_distribution<double> normal;
  SpinMatrix u(3, s.cols());
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    const Vec3 raw = normal_vector(normal, rng);
    u.col(i) = tangent_project(Vec3(s.col(i)), raw);
  }
  const double n = u.norm();
  return n > 0.0 ? SpinMatrix(u / n) : u;
}

SpinMatrix fibonacci_sphere(Eigen::Index n) {
  SpinMatrix s(3, n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    s.col(i) = Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized();
  }
  return s;
}

void VerificationReport::add(std::string name, double defect, double tolerance,
                             std::string context) {
  const bool pass = std::isfinite(defect) && defect <= tolerance;
  checks_.push_back({std::move(name), defect, tolerance, pass, std::move(context)});
}

void VerificationReport::append(const VerificationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const auto& c) { return c.pass; });
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << "spinstep verification report (seed " << seed_ << ")\n";
  std::size_t width = 0;
  for (const auto& c : checks_) width = std::max(width, c.name.size());
  for (const auto& c : checks_) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-*s defect %.3e  tol %.3e", c.pass ? "PASS" : "FAIL",
                  static_cast<int>(width), c.name.c_str(), c.defect, c.tolerance);
    out << line;
    if (!c.context.empty()) out << "  (" << c.context << ")";
    out << '\n';
  }
  const auto failed = std::count_if(checks_.begin(), checks_.end(), [](auto& c) { return !c.pass; });
  out << checks_.size() - failed << "/" << checks_.size() << " checks passed\n";
  return out.str();
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed_;
  j["all_passed"] = all_passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    // JSON has no representation for inf/nan; keep them readable as text.
    if (std::isfinite(c.defect)) {
      e["defect"] = c.defect;
    } else {
      e["defect"] = text::g17(c.defect);
    }
    e["tolerance"] = c.tolerance;
    e["context"] = c.context;
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::vector<double> energy_error_series(const SpinSystem& system, const TrajectoryRecord& traj) {
  if (system.time_dependent()) {
    throw InvalidArgument("energy error is not meaningful for time-dependent system '" +
                          system.name() + "'");
  }
  std::vector<double> out;
  if (traj.states.empty()) return out;
  out.reserve(traj.size());
  const double h0 = system.energy(traj.states.front().spins(), traj.times.front());
  for (std::size_t n = 0; n < traj.size(); ++n) {
    out.push_back(std::abs(system.energy(traj.states[n].spins(), traj.times[n]) - h0));
  }
  return out;
}

namespace {

SpinMatrix apply_step(Method method, const SpinSystem& system, const SpinMatrix& s, double t,
                      double dt, const StepOptions& opts) {
  if (dt == 0.0) return s;
  return step(method, system, SpinConfiguration::unchecked(s, t), dt, opts).next.spins();
}

SpinMatrix retract(const SpinMatrix& s, const SpinMatrix& u, double eps) {
  return normalize_columns(s + eps * u);
}

}  // namespace

double symplecticity_defect(const SpinSystem& system, Method method, const SpinConfiguration& s,
                            double dt, double probe_scale, int trials, std::uint64_t seed,
                            const StepOptions& opts) {
  if (!(probe_scale > 0.0)) throw InvalidArgument("probe scale must be positive");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  system.require_spin_count(s.size());
  Rng rng(seed);
  const Eigen::VectorXd w = system.symplectic_weights(s.size());
  const double t = s.time();
  const SpinMatrix image = apply_step(method, system, s.spins(), t, dt, opts);

  auto pushforward = [&](const SpinMatrix& u) -> SpinMatrix {
    const SpinMatrix plus = apply_step(method, system, retract(s.spins(), u, probe_scale), t, dt, opts);
    const SpinMatrix minus = apply_step(method, system, retract(s.spins(), u, -probe_scale), t, dt, opts);
    return (plus - minus) / (2.0 * probe_scale);
  };

  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const SpinMatrix u = random_tangent(s.spins(), rng);
    const SpinMatrix v = random_tangent(s.spins(), rng);
    const double before = total_area_form(s.spins(), u, v, w);
    const double after = total_area_form(image, pushforward(u), pushforward(v), w);
    worst = std::max(worst, std::abs(after - before));
  }
  return worst;
}

double equivariance_defect(Method method, const SpinSystem& system, const SpinConfiguration& s,
                           double dt, const std::vector<Mat3>& rotations,
                           const StepOptions& opts) {
  system.require_spin_count(s.size());
  const SpinMatrix base = apply_step(method, system, s.spins(), s.time(), dt, opts);
  double worst = 0.0;
  for (const Mat3& r : rotations) {
    const SpinSystem image_system = transformed(system, r);
    const SpinMatrix lhs = apply_step(method, image_system, r * s.spins(), s.time(), dt, opts);
    const SpinMatrix rhs = r * base;
    worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

double self_adjointness_defect(Method method, const SpinSystem& system,
                               const SpinConfiguration& s, double dt, const StepOptions& opts) {
  if (dt == 0.0) return 0.0;
  const StepResult forward = step(method, system, s, dt, opts);
  const StepResult backward = step(method, system, forward.next, -dt, opts);
  return (backward.next.spins() - s.spins()).lpNorm<Eigen::Infinity>();
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / denom;
}

ConvergenceStudy convergence_order(const SpinSystem& system, Method method,
                                   const SpinConfiguration& s0, double horizon,
                                   const std::vector<double>& step_sizes,
                                   const StepOptions& opts, double reference_dt) {
  if (step_sizes.size() < 2) throw InvalidArgument("need at least two step sizes");
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const SpinMatrix reference =
      reference_solve(system, s0.spins(), s0.time(), s0.time() + horizon, reference_dt).spins();

  ConvergenceStudy study;
  std::vector<double> log_dt, log_err;
  for (double dt : step_sizes) {
    const double steps = horizon / dt;
    const long n = std::lround(steps);
    if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * steps) {
      throw InvalidArgument("step size " + text::g17(dt) + " does not divide the horizon");
    }
    SpinConfiguration state = s0;
    for (long k = 0; k < n; ++k) state = step(method, system, state, dt, opts).next;
    const double err = (state.spins() - reference).lpNorm<Eigen::Infinity>();
    study.step_sizes.push_back(dt);
    study.errors.push_back(err);
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(err));
  }
  study.order = fitted_slope(log_dt, log_err);
  return study;
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("SPINSTEP_THREADS")) {
    if (auto v = text::to_integer(env); v && *v > 0) return static_cast<std::size_t>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SectionCloud poincare_section(const SpinSystem& system, Method method,
                              const std::vector<SpinConfiguration>& seeds,
                              const SectionOptions& opts) {
  if (!system.period()) {
    throw InvalidArgument("poincare section needs a periodically forced system; '" +
                          system.name() + "' has no period");
  }
  if (opts.steps_per_period < 1) throw InvalidArgument("steps per period must be >= 1");
  if (opts.periods < 1) throw InvalidArgument("number of periods must be >= 1");
  for (const auto& s : seeds) system.require_spin_count(s.size());

  const double dt = *system.period() / opts.steps_per_period;
  const std::size_t count = seeds.size();
  std::vector<std::vector<SectionPoint>> per_seed(count);
  std::vector<SpinConfiguration> finals(seeds);
  std::vector<std::exception_ptr> errors(count);

  auto run_seed = [&](std::size_t idx) {
    try {
      SpinConfiguration state = seeds[idx];
      auto& out = per_seed[idx];
      out.reserve(static_cast<std::size_t>(opts.periods));
      for (long p = 0; p < opts.periods; ++p) {
        for (int k = 0; k < opts.steps_per_period; ++k) {
          try {
            state = step(method, system, state, dt, opts.step).next;
          } catch (Error& e) {
            e.set_step(static_cast<std::size_t>(p * opts.steps_per_period + k + 1));
            throw;
          }
        }
        out.push_back({idx, opts.first_period + p, state});
      }
      finals[idx] = state;
    } catch (Error& e) {
      e.set_seed_index(idx);
      errors[idx] = std::current_exception();
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  const std::size_t threads =
      std::min(count, opts.threads > 0 ? opts.threads : thread_budget());
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) run_seed(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run_seed(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SectionCloud cloud;
  cloud.seeds = seeds;
  cloud.final_states = std::move(finals);
  for (auto& v : per_seed) {
    cloud.points.insert(cloud.points.end(), std::make_move_iterator(v.begin()),
                        std::make_move_iterator(v.end()));
  }
  return cloud;
}

double linear_integral_drift(const TrajectoryRecord& traj, const Eigen::VectorXd& weights) {
  if (traj.states.empty()) return 0.0;
  if (weights.size() != traj.states.front().size()) {
    throw InvalidArgument("weights length does not match spin count");
  }
  const Vec3 initial = traj.states.front().spins() * weights;
  double worst = 0.0;
  for (const auto& s : traj.states) {
    worst = std::max(worst, (s.spins() * weights - initial).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

double recurrence_distance(const TrajectoryRecord& traj, std::size_t skip) {
  if (traj.states.size() <= skip) throw InvalidArgument("trajectory shorter than skip");
  const SpinMatrix& s0 = traj.states.front().spins();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = std::max<std::size_t>(skip, 1); n < traj.size(); ++n) {
    best = std::min(best, (traj.states[n].spins() - s0).norm());
  }
  return best;
}

}  // namespace spinstep
