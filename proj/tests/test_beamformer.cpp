#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "mmnoma/beamformer.hpp"
#include "mmnoma/error.hpp"
#include "mmnoma/evaluation.hpp"
#include "test_support.hpp"

using namespace mmnoma;

namespace {

constexpr double kPi = std::numbers::pi;

struct Instance {
  ComplexVector a1;
  ComplexVector a2;
  double g;
};

// Random separated directions and a g anywhere in [0, 0.9 sqrt(N)].
Instance random_instance(Rng& rng, int n) {
  auto [o1, o2] = sample_aoa_pair(n, rng);
  const double g = rng.uniform(0.0, 0.9) * std::sqrt(static_cast<double>(n));
  return {steering_vector(n, o1), steering_vector(n, o2), g};
}

double re_objective(const ComplexVector& a1, const ComplexVector& w) {
  return inner_product(a1, w).real();
}

}  // namespace

TEST_CASE("single direction with g = 0 gives a matched beam") {
  const int n = 16;
  const auto a = steering_vector(n, 0.35);
  for (double phi : {0.0, 1.0, 4.0}) {
    const auto sol = solve_fixed_phase(a, a, 0.0, phi);
    CHECK(sol.objective == doctest::Approx(std::sqrt(n)).epsilon(1e-12));
    const Complex rot = sol.w[0] / std::abs(sol.w[0]);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::abs(sol.w[k] - rot * a[k] / std::sqrt(double(n))) < 1e-12);
    }
  }
}

TEST_CASE("g = sqrt(N) spends the whole budget on User 2") {
  const int n = 8;
  const auto a1 = steering_vector(n, -0.4);
  const auto a2 = steering_vector(n, 0.45);
  const auto sol = solve_fixed_phase(a1, a2, std::sqrt(double(n)), 0.3);
  CHECK(sol.user2_amplitude == doctest::Approx(std::sqrt(double(n))).epsilon(1e-8));
  CHECK(sol.objective == doctest::Approx(std::abs(inner_product(a1, a2)) / std::sqrt(double(n)))
                             .epsilon(1e-6));
}

TEST_CASE("g above sqrt(N) is infeasible") {
  const auto a1 = steering_vector(8, -0.4);
  const auto a2 = steering_vector(8, 0.45);
  bool threw = false;
  try {
    solve_fixed_phase(a1, a2, std::sqrt(8.0) + 1e-3, 0.0);
  } catch (const Error& e) {
    threw = e.code() == Errc::infeasible_gain;
  }
  CHECK(threw);
  threw = false;
  try {
    solve_cm_beamforming({a1, a2, 3.0, 20, kDefaultSolverTol});
  } catch (const Error& e) {
    threw = e.code() == Errc::infeasible_gain;
  }
  CHECK(threw);
}

TEST_CASE("request validation") {
  const auto a = steering_vector(4, 0.1);
  CHECK_THROWS_AS(BeamformingRequest({a, steering_vector(5, 0.1), 1.0, 20}).validate(), Error);
  CHECK_THROWS_AS(BeamformingRequest({a.scaled(2.0), a, 1.0, 20}).validate(), Error);
  CHECK_THROWS_AS(BeamformingRequest({a, a, -1.0, 20}).validate(), Error);
  CHECK_THROWS_AS(BeamformingRequest({a, a, 1.0, 0}).validate(), Error);
}

TEST_CASE("returned beams are exactly constant modulus") {
  Rng rng(RngSeed{100});
  for (int i = 0; i < 250; ++i) {
    for (int n : {8, 16, 32, 64}) {
      const auto inst = random_instance(rng, n);
      const auto sol = solve_cm_beamforming({inst.a1, inst.a2, inst.g, 20, kDefaultSolverTol});
      CHECK(constant_modulus_residual(sol.w) < 1e-12);
      CHECK(sol.user2_amplitude >= inst.g - kDefaultSolverTol);
      CHECK(sol.phase_index >= 1);
      CHECK(sol.phase_index <= 20);
      CHECK(sol.dual_mu >= 0.0);
    }
  }
}

TEST_CASE("fixed-phase solution is certified by the dual bound") {
  Rng rng(RngSeed{101});
  for (int i = 0; i < 1000; ++i) {
    const int n = 4 << (i % 5);
    const auto inst = random_instance(rng, n);
    const double phi = 2.0 * kPi * rng.uniform01();
    const auto sol = solve_fixed_phase(inst.a1, inst.a2, inst.g, phi);
    const double primal = re_objective(inst.a1, sol.w);
    const double dual = fixed_phase_dual_bound(inst.a1, inst.a2, inst.g, phi, sol.dual_mu);
    CHECK(rotated_constraint_value(inst.a2, sol.w, phi) >= inst.g);
    // Weak duality, and a gap set only by the bisection tolerance.
    CHECK(dual >= primal - 1e-9);
    CHECK(dual - primal <= 1e-6 * std::sqrt(double(n)) * (1.0 + sol.dual_mu));
  }
}

TEST_CASE("dual bound is valid for every multiplier") {
  Rng rng(RngSeed{102});
  for (int i = 0; i < 200; ++i) {
    const int n = 8;
    const auto inst = random_instance(rng, n);
    const double phi = 2.0 * kPi * rng.uniform01();
    const auto sol = solve_fixed_phase(inst.a1, inst.a2, inst.g, phi);
    const double primal = re_objective(inst.a1, sol.w);
    for (double mu : {0.0, 0.1, 1.0, 10.0, 1000.0}) {
      CHECK(fixed_phase_dual_bound(inst.a1, inst.a2, inst.g, phi, mu) >= primal - 1e-9);
    }
  }
}

TEST_CASE("constraint value is non-decreasing in the multiplier") {
  Rng rng(RngSeed{103});
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(rng.next() % 63);
    const auto a1 = steering_vector(n, rng.uniform(-1.0, 1.0));
    const auto a2 = steering_vector(n, rng.uniform(-1.0, 1.0));
    const double phi = 2.0 * kPi * rng.uniform01();
    double previous = -INFINITY;
    for (int s = 0; s < 100; ++s) {
      const double mu = s == 0 ? 0.0 : std::pow(10.0, -3.0 + 6.0 * s / 99.0);
      const auto w = lagrangian_maximizer(a1, a2, phi, mu);
      const double v = rotated_constraint_value(a2, w, phi);
      CHECK(v >= previous - 1e-12);
      previous = v;
    }
  }
}

TEST_CASE("beam gains ignore a global rotation of the solver output") {
  Rng rng(RngSeed{104});
  for (int i = 0; i < 1000; ++i) {
    const int n = 8 << (i % 4);
    const auto inst = random_instance(rng, n);
    const auto sol = solve_cm_beamforming({inst.a1, inst.a2, inst.g, 20, kDefaultSolverTol});
    const auto rotated = sol.w.scaled(rng.unit_phase());
    for (const auto* a : {&inst.a1, &inst.a2}) {
      const double g0 = beam_gain(*a, sol.w);
      const double g1 = beam_gain(*a, rotated);
      CHECK(std::abs(g0 - g1) <= 1e-10 * std::max(g0, 1e-12));
    }
  }
}

TEST_CASE("phase sweep with more candidates never does worse") {
  Rng rng(RngSeed{105});
  for (int i = 0; i < 200; ++i) {
    const auto inst = random_instance(rng, 16);
    const auto one = solve_cm_beamforming({inst.a1, inst.a2, inst.g, 1, kDefaultSolverTol});
    const auto twenty = solve_cm_beamforming({inst.a1, inst.a2, inst.g, 20, kDefaultSolverTol});
    CHECK(twenty.objective >= one.objective - kDefaultSolverTol);
  }
}

TEST_CASE("parallel sweep matches the serial reference bit for bit") {
  Rng rng(RngSeed{106});
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng, 32);
    const BeamformingRequest req{inst.a1, inst.a2, inst.g, 20, kDefaultSolverTol};
    const auto fast = solve_cm_beamforming(req);
    const auto slow = reference::solve_cm_beamforming(req);
    CHECK(fast.phase_index == slow.phase_index);
    CHECK(fast.objective == slow.objective);
    CHECK(fast.w.entries() == slow.w.entries());
  }
}

TEST_CASE("fixed-phase solver matches exhaustive search for N = 3") {
  // Enumerate every entry's phase (no pinning: the real-part objective is not
  // rotation invariant) on a 96-level grid.
  Rng rng(RngSeed{107});
  const int n = 3;
  const int levels = 96;
  const double s = 1.0 / std::sqrt(double(n));
  for (int i = 0; i < 10; ++i) {
    const auto a1 = steering_vector(n, rng.uniform(-1.0, 1.0));
    const auto a2 = steering_vector(n, rng.uniform(-1.0, 1.0));
    const double g = rng.uniform(0.1, 0.8) * std::sqrt(double(n));
    const double phi = 2.0 * kPi * rng.uniform01();
    const auto sol = solve_fixed_phase(a1, a2, g, phi);
    const double solver = re_objective(a1, sol.w);

    double best = -INFINITY;
    for (int q0 = 0; q0 < levels; ++q0) {
      for (int q1 = 0; q1 < levels; ++q1) {
        for (int q2 = 0; q2 < levels; ++q2) {
          const ComplexVector w{std::polar(s, 2 * kPi * q0 / levels),
                                std::polar(s, 2 * kPi * q1 / levels),
                                std::polar(s, 2 * kPi * q2 / levels)};
          if (rotated_constraint_value(a2, w, phi) < g) continue;
          best = std::max(best, re_objective(a1, w));
        }
      }
    }
    REQUIRE(std::isfinite(best));
    CHECK(solver >= best - 1e-9);
    CHECK(solver <= best + 0.02 * std::sqrt(double(n)));
  }
}

TEST_CASE("phase sweep matches the 256-level oracle within 1% for N = 4, g = 1") {
  Rng rng(RngSeed{108});
  for (int i = 0; i < 3; ++i) {
    const auto a1 = steering_vector(4, rng.uniform(-1.0, 1.0));
    const auto a2 = steering_vector(4, rng.uniform(-1.0, 1.0));
    const auto sol = solve_cm_beamforming({a1, a2, 1.0, 360, kDefaultSolverTol});
    const auto oracle = brute_force_beamformer(a1, a2, 1.0, 256);
    REQUIRE(oracle.has_value());
    CHECK(std::abs(sol.objective - oracle->objective) <= 0.01 * oracle->objective);
  }
}

TEST_CASE("brute-force oracle examples") {
  const auto a1 = steering_vector(2, 0.5);  // [1, j]
  const auto a2 = steering_vector(2, -0.5);
  const auto aligned = brute_force_beamformer(a1, a2, 0.0, 4);
  REQUIRE(aligned.has_value());
  CHECK(aligned->objective == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(aligned->w[1] - Complex(0, 1) / std::sqrt(2.0)) < 1e-15);

  CHECK_FALSE(brute_force_beamformer(a1, a2, std::sqrt(2.0) + 0.01, 16).has_value());

  Rng rng(RngSeed{109});
  for (int i = 0; i < 20; ++i) {
    const auto b1 = steering_vector(4, rng.uniform(-1.0, 1.0));
    const auto b2 = steering_vector(4, rng.uniform(-1.0, 1.0));
    const auto sol = solve_cm_beamforming({b1, b2, 1.0, 20, kDefaultSolverTol});
    const auto oracle = brute_force_beamformer(b1, b2, 1.0, 64);
    REQUIRE(oracle.has_value());
    CHECK(oracle->objective >= sol.objective - 0.05 * 2.0);
    CHECK(sol.objective >= oracle->objective - 0.05 * 2.0);
    CHECK(constant_modulus_residual(oracle->w) < 1e-15);
  }
}

TEST_CASE("brute-force oracle refuses large instances") {
  auto code = [](int n, int levels) {
    try {
      brute_force_beamformer(steering_vector(n, 0.1), steering_vector(n, 0.7), 0.5, levels);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::invalid_argument;
  };
  CHECK(code(7, 4) == Errc::instance_too_large);
  CHECK(code(4, 300) == Errc::instance_too_large);
  CHECK(code(6, 256) == Errc::instance_too_large);
}

TEST_CASE("two-user design puts main lobes on both users") {
  const int n = 32;
  GeometrySpec spec;
  spec.num_antennas = n;
  const auto d = design_for_targets(spec);
  const auto& w = d.solution.w;
  const double g2 = d.ideal.c2 / (0.4 * 0.4);
  CHECK(beam_gain(steering_vector(n, 0.5), w) >= g2 - 1e-7);
  // Designed gains are the beam gains of the returned w.
  CHECK(d.designed.c1 == doctest::Approx(beam_gain(steering_vector(n, -0.7).scaled(0.9), w)));
  CHECK(d.designed.c1 == doctest::Approx(0.81 * d.solution.objective * d.solution.objective));

  const auto grid = uniform_grid();
  const auto pattern = beam_pattern(w, grid);
  double away = 0.0;
  for (const auto& pt : pattern) {
    if (std::abs(pt.omega + 0.7) > 4.0 / n && std::abs(pt.omega - 0.5) > 4.0 / n) {
      away = std::max(away, pt.gain);
    }
  }
  const double at1 = beam_gain(steering_vector(n, -0.7), w);
  const double at2 = beam_gain(steering_vector(n, 0.5), w);
  CHECK(at1 > 2.0 * away);
  CHECK(at2 > away);
  CHECK(at1 > at2);
}

TEST_CASE("verification report on the rate-vs-constraint setting") {
  SystemParams p;
  p.num_antennas = 32;
  p.noise_power = 1.0;
  p.max_power = 100.0;  // 20 dB
  const EffectiveChannel u1(0.9, -0.7, 32);
  const EffectiveChannel u2(0.2, 0.5, 32);
  for (double r = 0.5; r <= 5.0; r += 0.5) {
    p.min_rate1 = p.min_rate2 = r;
    const auto alloc = allocate_case1(0.9, 0.2, p);
    const BeamformingRequest req{steering_vector(32, -0.7), steering_vector(32, 0.5),
                                 std::sqrt(alloc.c2 / 0.04), 20, kDefaultSolverTol};
    const auto sol = solve_cm_beamforming(req);
    const auto rep = verify_solution(sol, req, u1.response(), u2.response(), alloc, p);
    CHECK(rep.cm_residual < 1e-12);
    CHECK(std::abs(rep.rate2 - r) < 1e-6);
    CHECK(rep.rate2_met);
    CHECK(rep.rate1_met);
    CHECK(rep.sum_rate == doctest::Approx(rep.rate1 + rep.rate2));
  }
}

TEST_CASE("verification flags an unreachable r1") {
  SystemParams p;
  p.min_rate1 = 30.0;
  p.min_rate2 = 1.0;
  const auto alloc = allocate_case1(0.9, 0.2, p);
  CHECK_FALSE(check_r1_feasibility(alloc, 0.9, 0.2, p));
  const BeamformingRequest req{steering_vector(32, -0.7), steering_vector(32, 0.5),
                               std::sqrt(alloc.c2 / 0.04), 20, kDefaultSolverTol};
  const auto sol = solve_cm_beamforming(req);
  const auto rep = verify_solution(sol, req, steering_vector(32, -0.7).scaled(0.9),
                                   steering_vector(32, 0.5).scaled(0.2), alloc, p);
  CHECK_FALSE(rep.rate1_met);
  CHECK(rep.rate2_met);
}

TEST_CASE("designed sum rate stays under the bound for orthogonal directions") {
  // With a1 orthogonal to a2, |a1^H w|^2 + |a2^H w|^2 <= N for any unit-norm w,
  // so the designed gains sit inside the ideal-gain budget.
  Rng rng(RngSeed{110});
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 8 << (i % 3);
    const double o1 = rng.uniform(-1.0, 0.0);
    const int k = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n / 2));
    const double o2 = o1 + 2.0 * k / n;
    if (o2 > 1.0) continue;
    const double l1 = rng.uniform(0.3, 1.0);
    const double l2 = rng.uniform(0.05, 1.0) * l1;
    SystemParams p;
    p.num_antennas = n;
    p.max_power = std::pow(10.0, rng.uniform(0.5, 3.0));
    p.min_rate2 = rng.uniform(0.0, 4.0);
    GainAllocation alloc;
    try {
      alloc = allocate_case1(l1, l2, p);
    } catch (const Error&) {
      continue;
    }
    const BeamformingRequest req{steering_vector(n, o1), steering_vector(n, o2),
                                 std::sqrt(alloc.c2 / (l2 * l2)), 20, kDefaultSolverTol};
    std::optional<BeamformingSolution> sol;
    try {
      sol = solve_cm_beamforming(req);
    } catch (const Error&) {
      continue;
    }
    const auto rep = verify_solution(*sol, req, req.a1.scaled(l1), req.a2.scaled(l2), alloc, p);
    CHECK(rep.within_bound);
    ++checked;
  }
  CHECK(checked > 500);
}
