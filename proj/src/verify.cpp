// Copyright 2026 The spinstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinstep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "spinstep/errors.hpp"
#include "spinstep/systems.hpp"
#include "text_util.hpp"

namespace spinstep {

namespace {

using SuiteFn = std::function<void(VerificationReport&, Rng&, const StepOptions&)>;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

// Eight vortices at the vertices of a Fibonacci lattice: well separated, so
// moderate runs stay far from collisions.
SpinConfiguration vortex_state(Eigen::Index n) {
  return SpinConfiguration(fibonacci_sphere(n));
}

// Random configuration whose pairwise gaps 2 - 2 s_i.s_k all reach
// `min_gap`. Central differences of the vortex energy carry a truncation
// error of order h^2 / gap^3, so probes near a collision test the stencil,
// not the gradient.
SpinMatrix random_separated_spins(Eigen::Index n, double min_gap, Rng& rng) {
  for (;;) {
    SpinMatrix s = random_spins(n, rng);
    double closest = 4.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = i + 1; k < n; ++k) {
        closest = std::min(closest, 2.0 - 2.0 * s.col(i).dot(s.col(k)));
      }
    }
    if (closest >= min_gap) return s;
  }
}

void energy_drift(VerificationReport& rep, Rng&, const StepOptions& opts) {
  const SpinSystem sys = perturbed_top();
  const SpinConfiguration s0 = perturbed_top_initial_state();
  auto run = [&](Method m) {
    const auto traj = integrate_trajectory(sys, m, s0, 0.5, 4000, {}, opts);
    return max_of(energy_error_series(sys, traj));
  };
  const double sph = run(Method::SphericalMidpoint);
  const double cla = run(Method::ClassicalMidpoint);
  rep.add("energy-drift.spherical", sph, 1e-2, "perturbed top, dt=0.5, t<=2000");
  rep.add("energy-drift.classical-growth", 2e-2 / cla, 1.0,
          "classical max " + sci(cla) + " must reach 2e-2");
  rep.add("energy-drift.ratio", 5.0 * sph / cla, 1.0,
          "classical/spherical = " + sci(cla / sph) + " must be >= 5");
}

void quadratic_conservation(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  const SpinSystem sys = spinning_top({{1.0, 2.0, 4.0}});
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const SpinConfiguration s0(random_spins(1, rng));
    const auto traj = integrate_trajectory(sys, Method::SphericalMidpoint, s0, 0.5, 10000, {}, opts);
    worst = std::max(worst, max_of(energy_error_series(sys, traj)));
  }
  rep.add("quadratic-conservation.spinning-top", worst, 1e-10,
          "I=(1,2,4), 10 random states, dt=0.5, 1e4 steps");
}

struct LengthCase {
  SpinSystem system;
  SpinConfiguration initial;
  double dt;
};

void spin_length(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  std::vector<LengthCase> cases;
  cases.push_back({spinning_top({{1.0, 2.0, 4.0}}), SpinConfiguration(random_spins(1, rng)), 0.5});
  cases.push_back({perturbed_top(), perturbed_top_initial_state(), 0.5});
  cases.push_back({forced_top(0.07), SpinConfiguration(random_spins(1, rng)),
                   2.0 * std::numbers::pi / 20.0});
  cases.push_back({heisenberg_chain({100, 1.0, Boundary::Periodic}),
                   SpinConfiguration(random_spins(100, rng)), 0.1});
  cases.push_back({point_vortices({std::vector<double>(8, 1.0)}), vortex_state(8), 0.01});
  for (auto& c : cases) {
    const auto traj =
        integrate_trajectory(c.system, Method::SphericalMidpoint, c.initial, c.dt, 10000,
                             {observers::length_deviation()}, opts);
    rep.add("spin-length." + c.system.name(), max_of(traj.observable("length_deviation")), 1e-10,
            "dt=" + text::g17(c.dt) + ", 1e4 steps");
  }
}

void symplecticity(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  const SpinSystem sys = perturbed_top();
  const SpinConfiguration s = perturbed_top_initial_state();
  const std::uint64_t probe_seed = rng();
  const double sph =
      symplecticity_defect(sys, Method::SphericalMidpoint, s, 0.5, 1e-5, 50, probe_seed, opts);
  const double cla =
      symplecticity_defect(sys, Method::ClassicalMidpoint, s, 0.5, 1e-5, 50, probe_seed, opts);
  rep.add("symplecticity.spherical", sph, 1e-6, "perturbed top, dt=0.5, eps=1e-5, 50 pairs");
  rep.add("symplecticity.classical-contrast", 100.0 * sph / cla, 1.0,
          "classical defect " + sci(cla) + " must be >= 100x spherical");
}

void equivalence(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> step_dist(0.01, 0.5);
  std::uniform_real_distribution<double> inertia(0.5, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::optional<SpinSystem> sys;
    switch (trial % 5) {
      case 0: {
        Mat3 a;
        for (int k = 0; k < 9; ++k) a(k / 3, k % 3) = unit(rng);
        sys.emplace(single_spin_quadratic(a));
        break;
      }
      case 1: sys.emplace(perturbed_top()); break;
      case 2: sys.emplace(spinning_top({{inertia(rng), inertia(rng), inertia(rng)}})); break;
      case 3: sys.emplace(forced_top(0.5 * unit(rng))); break;
      default: sys.emplace(heisenberg_chain({4, unit(rng), Boundary::Open})); break;
    }
    const Eigen::Index n = sys->spin_count().value_or(1);
    SpinMatrix start = random_spins(n, rng);
    const double t0 = 2.0 * unit(rng);
    SpinConfiguration a(std::move(start), t0);
    SpinConfiguration b = a;
    const double dt = step_dist(rng);
    for (int k = 0; k < 100; ++k) {
      a = spherical_midpoint_step(*sys, a, dt, opts.solver).next;
      b = classical_midpoint_on_g_step(*sys, b, dt, opts.solver).next;
      worst = std::max(worst, (a.spins() - b.spins()).lpNorm<Eigen::Infinity>());
    }
  }
  rep.add("equivalence.classical-on-g", worst, 1e-10, "100 random cases x 100 steps");
}

void order(VerificationReport& rep, Rng&, const StepOptions& opts) {
  const SpinSystem sys = perturbed_top();
  const SpinConfiguration s0 = perturbed_top_initial_state();
  const std::vector<double> dts{0.2, 0.1, 0.05, 0.025};
  for (Method m : {Method::SphericalMidpoint, Method::ClassicalMidpoint}) {
    const auto study = convergence_order(sys, m, s0, 10.0, dts, opts);
    rep.add("order." + std::string(method_name(m)), std::abs(study.order - 2.0), 0.2,
            "fitted order " + text::g17(study.order) + ", T=10");
  }
}

void equivariance(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  const SpinSystem sys = heisenberg_chain({10, 1.0, Boundary::Periodic});
  const SpinConfiguration s(random_spins(10, rng));
  std::vector<Mat3> rotations;
  for (int k = 0; k < 20; ++k) {
    Mat3 r = random_orthogonal(rng, false);
    if (k % 2 == 1) r = -r;  // every other one is orientation reversing
    rotations.push_back(r);
  }
  rep.add("equivariance.heisenberg-chain",
          equivariance_defect(Method::SphericalMidpoint, sys, s, 0.3, rotations, opts), 1e-10,
          "N=10, 20 orthogonal maps (10 reflections), dt=0.3");
}

void self_adjointness(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  std::uniform_real_distribution<double> time(0.0, 2.0 * std::numbers::pi);
  const SpinConfiguration s1(random_spins(1, rng));
  rep.add("self-adjointness.perturbed-top",
          self_adjointness_defect(Method::SphericalMidpoint, perturbed_top(), s1, 0.5, opts), 1e-10,
          "dt=0.5");
  const SpinConfiguration s2(random_spins(1, rng), time(rng));
  rep.add("self-adjointness.forced-top",
          self_adjointness_defect(Method::SphericalMidpoint, forced_top(0.07), s2, 0.5, opts),
          1e-10, "epsilon=0.07, dt=0.5, field at t+dt/2");
}

void solver(VerificationReport& rep, Rng&, const StepOptions& opts) {
  const auto traj = integrate_trajectory(perturbed_top(), Method::SphericalMidpoint,
                                         perturbed_top_initial_state(), 0.5, 4000,
                                         {observers::iterations()}, opts);
  std::vector<double> its(traj.observable("iterations").begin() + 1,
                          traj.observable("iterations").end());
  const double med = median_of(its);
  rep.add("solver.median-iterations", std::abs(med - 8.0), 4.0,
          "median " + text::g17(med) + " must lie in [4, 12]");
  rep.add("solver.max-iterations", max_of(its), 20.0, "over 4000 steps, dt=0.5, tol 1e-12");
}

void linear_integrals(VerificationReport& rep, Rng& rng, const StepOptions& opts) {
  const SpinSystem chain = heisenberg_chain({100, 1.0, Boundary::Periodic});
  const auto tc = integrate_trajectory(chain, Method::SphericalMidpoint,
                                       SpinConfiguration(random_spins(100, rng)), 0.1, 1000, {}, opts);
  rep.add("linear-integrals.total-spin", linear_integral_drift(tc, Eigen::VectorXd::Ones(100)),
          1e-9, "Heisenberg N=100, dt=0.1, 1e3 steps");

  std::uniform_real_distribution<double> strength(0.5, 1.5);
  std::vector<double> gamma(8);
  for (auto& g : gamma) {
    const double sign = rng() & 1u ? 1.0 : -1.0;
    g = sign * strength(rng);
  }
  const SpinSystem vort = point_vortices({gamma});
  const auto tv = integrate_trajectory(vort, Method::SphericalMidpoint, vortex_state(8), 0.01,
                                       1000, {}, opts);
  rep.add("linear-integrals.vorticity-moment",
          linear_integral_drift(tv, vort.linear_integrals().front().weights), 1e-9,
          "8 vortices, dt=0.01, 1e3 steps");
}

void section(VerificationReport& rep, Rng&, const StepOptions& opts) {
  SectionOptions so;
  so.steps_per_period = 20;
  so.periods = 500;
  so.step = opts;
  std::vector<SpinConfiguration> seeds;
  const SpinMatrix lattice = fibonacci_sphere(20);
  for (Eigen::Index i = 0; i < lattice.cols(); ++i) seeds.emplace_back(SpinMatrix(lattice.col(i)));

  const SpinSystem forced = forced_top(0.07);
  const auto cloud = poincare_section(forced, Method::SphericalMidpoint, seeds, so);
  double norm_dev = 0.0;
  for (const auto& p : cloud.points) norm_dev = std::max(norm_dev, p.state.max_norm_deviation());
  rep.add("section.unit-norm", norm_dev, 1e-9,
          "epsilon=0.07, k=20, M=500, 20 seeds, " + std::to_string(cloud.points.size()) + " points");

  const SpinSystem unforced = forced_top(0.0);
  const auto flat_cloud = poincare_section(unforced, Method::SphericalMidpoint, seeds, so);
  double level = 0.0;
  for (const auto& p : flat_cloud.points) {
    const double h0 = unforced.energy(seeds[p.seed].spins(), 0.0);
    level = std::max(level, std::abs(unforced.energy(p.state.spins(), 0.0) - h0));
  }
  rep.add("section.integrable-limit", level, 1e-10, "epsilon=0: points on level sets of H");
}

void gradient(VerificationReport& rep, Rng& rng, const StepOptions&) {
  std::uniform_real_distribution<double> time(0.0, 10.0);
  const std::vector<std::pair<std::string, SpinSystem>> catalog{
      {"spinning-top", spinning_top({{1.0, 2.0, 4.0}})},
      {"perturbed-top", perturbed_top()},
      {"forced-top", forced_top(0.07)},
      {"heisenberg-chain", heisenberg_chain({10, 1.0, Boundary::Periodic})},
      {"heisenberg-chain-open", heisenberg_chain({10, -0.7, Boundary::Open})},
      {"point-vortices", point_vortices({{1.0, -2.0, 0.5, 1.5, 1.0, -1.0, 0.8, 1.2}})},
      {"linear-field", linear_field(Vec3(0.3, -1.0, 2.0))},
      {"quadratic", single_spin_quadratic((Mat3() << 1.0, 0.2, -0.4, 0.2, 2.0, 0.3, -0.4, 0.3,
                                           -1.5).finished())},
      {"constant", constant_system(3)},
  };
  constexpr double kMinVortexGap = 0.05;
  for (const auto& [label, sys] : catalog) {
    const bool vortices = sys.name() == "point_vortices";
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Eigen::Index n = sys.spin_count().value_or(1);
      const SpinMatrix s =
          vortices ? random_separated_spins(n, kMinVortexGap, rng) : random_spins(n, rng);
      const double t = time(rng);
      worst = std::max(worst, gradient_check(sys, s, t, 1e-6));
    }
    rep.add("gradient." + label, worst, 1e-6,
            vortices ? "100 random points with pair gaps >= 0.05, h=1e-6"
                     : "100 random points, h=1e-6");
  }
}

struct Suite {
  SuiteInfo info;
  SuiteFn run;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {{"energy-drift", "energy error growth, spherical vs classical midpoint"}, energy_drift},
      {{"quadratic-conservation", "spinning top energy conserved to solver tolerance"},
       quadratic_conservation},
      {{"spin-length", "unit spin length along 1e4-step runs of every catalog system"}, spin_length},
      {{"symplecticity", "finite-difference pullback of the area form"}, symplecticity},
      {{"equivalence", "spherical midpoint equals classical midpoint on g"}, equivalence},
      {{"order", "second-order global error against the reference integrator"}, order},
      {{"equivariance", "commutation with rotations and reflections"}, equivariance},
      {{"self-adjointness", "forward/backward roundtrip"}, self_adjointness},
      {{"solver", "fixed-point iteration counts"}, solver},
      {{"linear-integrals", "total spin and vorticity moment"}, linear_integrals},
      {{"section", "one-period map pipeline of the forced top"}, section},
      {{"gradient", "analytic gradients against central differences"}, gradient},
  };
  return all;
}

}  // namespace

const std::vector<SuiteInfo>& verification_suites() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> out;
    for (const auto& s : suites()) out.push_back(s.info);
    return out;
  }();
  return infos;
}

SpinConfiguration perturbed_top_initial_state() {
  return SpinConfiguration(normalize_columns(SpinMatrix(Vec3(0.0, 0.7248, -0.6889))));
}

VerificationReport run_verification(const VerifyOptions& opts) {
  for (const auto& name : opts.suites) {
    const bool known = std::any_of(suites().begin(), suites().end(),
                                   [&](const Suite& s) { return s.info.name == name; });
    if (!known) throw InvalidArgument("unknown verification suite '" + name + "'");
  }
  VerificationReport report(opts.seed);
  for (const auto& s : suites()) {
    if (!opts.suites.empty() &&
        std::find(opts.suites.begin(), opts.suites.end(), s.info.name) == opts.suites.end()) {
      continue;
    }
    Rng rng(opts.seed ^ fnv1a(s.info.name));
    try {
      s.run(report, rng, opts.step);
    } catch (const Error& e) {
      // A numerical failure inside a certificate is a failed check, not a
      // crash of the whole battery.
      report.add(s.info.name + ".error", std::numeric_limits<double>::infinity(), 0.0, e.what());
    }
  }
  return report;
}

}  // namespace spinstep
