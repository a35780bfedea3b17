#include "mmnoma/beamformer.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mmnoma/error.hpp"
#include "mmnoma/evaluation.hpp"

namespace mmnoma {

namespace {

constexpr double kMuCeiling = 0x1.0p60;

void check_pair(const ComplexVector& a1, const ComplexVector& a2) {
  if (a1.size() != a2.size()) {
    throw Error(Errc::length_mismatch, "steering vectors differ in length: " +
                                           std::to_string(a1.size()) + " vs " +
                                           std::to_string(a2.size()));
  }
}

// One fixed-phase instance with b_k = e^{-j phi} [a2]_k precomputed, so that
// the constraint reads Re(b^H w) >= g and q_k = [a1]_k + mu b_k.
class FixedPhaseProblem {
 public:
  FixedPhaseProblem(const ComplexVector& a1, const ComplexVector& a2, double phi)
      : a1_(a1.view()), b_(a2.size()), scale_(1.0 / std::sqrt(static_cast<double>(a1.size()))) {
    const Complex rot = std::polar(1.0, -phi);
    for (std::size_t k = 0; k < b_.size(); ++k) b_[k] = rot * a2[k];
  }

  void maximizer(double mu, std::vector<Complex>& w) const {
    w.resize(b_.size());
    for (std::size_t k = 0; k < b_.size(); ++k) {
      const Complex q = a1_[k] + mu * b_[k];
      const double m = std::abs(q);
      // Exact cancellation: every unit phase is optimal, take zero phase.
      w[k] = m == 0.0 ? Complex(scale_, 0.0) : q * (scale_ / m);
    }
  }

  double constraint(const std::vector<Complex>& w) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < b_.size(); ++k) {
      acc += (std::conj(b_[k]) * w[k]).real();
    }
    return acc;
  }

  double dual(double mu, double g) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < b_.size(); ++k) acc += std::abs(a1_[k] + mu * b_[k]);
    return acc * scale_ - mu * g;
  }

 private:
  std::span<const Complex> a1_;
  std::vector<Complex> b_;
  double scale_;
};

BeamformingSolution make_solution(const ComplexVector& a1, const ComplexVector& a2,
                                  std::vector<Complex> w, int phase_index, double mu) {
  ComplexVector vec(std::move(w));
  const double objective = std::abs(inner_product(a1, vec));
  const double amp2 = std::abs(inner_product(a2, vec));
  return BeamformingSolution{std::move(vec), objective, amp2, phase_index, mu};
}

double phase_of(int m, int num_phases) {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(num_phases);
}

// Strictly better objective wins; equal objectives keep the earlier index.
bool better(const BeamformingSolution& candidate, const BeamformingSolution& incumbent) {
  return candidate.objective > incumbent.objective;
}

}  // namespace

void BeamformingRequest::validate() const {
  check_pair(a1, a2);
  for (std::size_t k = 0; k < a1.size(); ++k) {
    if (std::abs(std::abs(a1[k]) - 1.0) > 1e-9 || std::abs(std::abs(a2[k]) - 1.0) > 1e-9) {
      throw Error(Errc::invalid_argument, "steering vector entries must have unit modulus");
    }
  }
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw Error(Errc::invalid_argument, "required amplitude g must be finite and >= 0");
  }
  if (num_phases < 1) throw Error(Errc::invalid_argument, "M must be >= 1");
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "solver tolerance must be > 0");
}

ComplexVector lagrangian_maximizer(const ComplexVector& a1, const ComplexVector& a2,
                                   double phi, double mu) {
  check_pair(a1, a2);
  FixedPhaseProblem problem(a1, a2, phi);
  std::vector<Complex> w;
  problem.maximizer(mu, w);
  return ComplexVector(std::move(w));
}

double rotated_constraint_value(const ComplexVector& a2, const ComplexVector& w,
                                double phi) {
  return (std::polar(1.0, phi) * inner_product(a2, w)).real();
}

double fixed_phase_dual_bound(const ComplexVector& a1, const ComplexVector& a2,
                              double g, double phi, double mu) {
  check_pair(a1, a2);
  return FixedPhaseProblem(a1, a2, phi).dual(mu, g);
}

BeamformingSolution solve_fixed_phase(const ComplexVector& a1, const ComplexVector& a2,
                                      double g, double phi, double tol) {
  check_pair(a1, a2);
  const double max_amplitude = std::sqrt(static_cast<double>(a2.size()));
  if (g > max_amplitude + tol) {
    throw Error(Errc::infeasible_gain, "required amplitude " + std::to_string(g) +
                                           " exceeds sqrt(N) = " + std::to_string(max_amplitude));
  }

  const FixedPhaseProblem problem(a1, a2, phi);
  std::vector<Complex> w;
  problem.maximizer(0.0, w);
  if (problem.constraint(w) >= g) return make_solution(a1, a2, std::move(w), 0, 0.0);

  // Grow the bracket until the constraint holds.
  double lo = 0.0;
  double hi = 1.0;
  problem.maximizer(hi, w);
  double value = problem.constraint(w);
  while (value < g && hi < kMuCeiling) {
    lo = hi;
    hi *= 2.0;
    problem.maximizer(hi, w);
    value = problem.constraint(w);
  }
  if (value < g - tol) {
    throw Error(Errc::infeasible_gain, "constraint unreachable for multiplier <= 2^60");
  }

  std::vector<Complex> trial;
  for (int iter = 0; iter < kMaxBisectionIterations && value - g > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    problem.maximizer(mid, trial);
    const double v = problem.constraint(trial);
    if (v >= g) {
      hi = mid;
      value = v;
      w.swap(trial);
    } else {
      lo = mid;
    }
  }
  return make_solution(a1, a2, std::move(w), 0, hi);
}

BeamformingSolution solve_cm_beamforming(const BeamformingRequest& request) {
  request.validate();
  const int M = request.num_phases;
  std::vector<std::optional<BeamformingSolution>> results(static_cast<std::size_t>(M));
  // Exceptions cannot leave the parallel region; keep anything other than
  // infeasibility and rethrow it afterwards.
  std::vector<std::optional<Error>> failures(static_cast<std::size_t>(M));

#pragma omp parallel for schedule(dynamic, 1) if (M > 1)
  for (int m = 1; m <= M; ++m) {
    const auto slot = static_cast<std::size_t>(m - 1);
    try {
      auto sol = solve_fixed_phase(request.a1, request.a2, request.g, phase_of(m, M),
                                   request.tol);
      sol.phase_index = m;
      results[slot].emplace(std::move(sol));
    } catch (const Error& e) {
      if (e.code() != Errc::infeasible_gain) failures[slot].emplace(e);
    }
  }

  for (auto& f : failures) {
    if (f) throw *f;
  }
  std::optional<BeamformingSolution> best;
  for (auto& r : results) {
    if (r && (!best || better(*r, *best))) best = std::move(r);
  }
  if (!best) {
    throw Error(Errc::infeasible_gain, "no candidate phase admits |a2^H w| >= g");
  }
  return std::move(*best);
}

namespace reference {

BeamformingSolution solve_cm_beamforming(const BeamformingRequest& request) {
  request.validate();
  std::optional<BeamformingSolution> best;
  for (int m = 1; m <= request.num_phases; ++m) {
    try {
      auto sol = solve_fixed_phase(request.a1, request.a2, request.g,
                                   phase_of(m, request.num_phases), request.tol);
      sol.phase_index = m;
      if (!best || better(sol, *best)) best = std::move(sol);
    } catch (const Error& e) {
      if (e.code() != Errc::infeasible_gain) throw;
    }
  }
  if (!best) {
    throw Error(Errc::infeasible_gain, "no candidate phase admits |a2^H w| >= g");
  }
  return std::move(*best);
}

}  // namespace reference

std::optional<BeamformingSolution> brute_force_beamformer(const ComplexVector& a1,
                                                          const ComplexVector& a2,
                                                          double g, int phase_levels) {
  check_pair(a1, a2);
  const int n = static_cast<int>(a1.size());
  if (n > kMaxOracleAntennas || phase_levels < 1 || phase_levels > kMaxOraclePhaseLevels) {
    throw Error(Errc::instance_too_large,
                "oracle supports N <= 6 and <= 256 phase levels, got N = " +
                    std::to_string(n) + ", levels = " + std::to_string(phase_levels));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> table(static_cast<std::size_t>(phase_levels));
  for (int q = 0; q < phase_levels; ++q) {
    table[static_cast<std::size_t>(q)] =
        std::polar(scale, 2.0 * std::numbers::pi * q / static_cast<double>(phase_levels));
  }
  // Per-antenna contributions conj(a_k) * table[q], so a candidate costs 2N adds.
  std::vector<Complex> c1(static_cast<std::size_t>(n * phase_levels));
  std::vector<Complex> c2(c1.size());
  for (int k = 0; k < n; ++k) {
    for (int q = 0; q < phase_levels; ++q) {
      const auto i = static_cast<std::size_t>(k * phase_levels + q);
      c1[i] = std::conj(a1[static_cast<std::size_t>(k)]) * table[static_cast<std::size_t>(q)];
      c2[i] = std::conj(a2[static_cast<std::size_t>(k)]) * table[static_cast<std::size_t>(q)];
    }
  }

  std::int64_t total = 1;
  for (int k = 1; k < n; ++k) total *= phase_levels;
  if (total > (std::int64_t{1} << 32)) {
    throw Error(Errc::instance_too_large,
                "oracle search space " + std::to_string(total) + " exceeds 2^32 candidates");
  }

  const double g2 = g * g;
  std::int64_t best_index = -1;
  double best_value = -1.0;

#pragma omp parallel
  {
    std::int64_t local_index = -1;
    double local_value = -1.0;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) {
      std::int64_t rest = idx;
      Complex s1 = c1[0];
      Complex s2 = c2[0];
      for (int k = 1; k < n; ++k) {
        const auto q = static_cast<int>(rest % phase_levels);
        rest /= phase_levels;
        const auto i = static_cast<std::size_t>(k * phase_levels + q);
        s1 += c1[i];
        s2 += c2[i];
      }
      if (std::norm(s2) < g2) continue;
      const double v = std::norm(s1);
      if (v > local_value) {
        local_value = v;
        local_index = idx;
      }
    }
#pragma omp critical(mmnoma_oracle_merge)
    {
      if (local_index >= 0 &&
          (local_value > best_value ||
           (local_value == best_value && local_index < best_index))) {
        best_value = local_value;
        best_index = local_index;
      }
    }
  }

  if (best_index < 0) return std::nullopt;
  std::vector<Complex> w(static_cast<std::size_t>(n));
  w[0] = table[0];
  std::int64_t rest = best_index;
  for (int k = 1; k < n; ++k) {
    w[static_cast<std::size_t>(k)] = table[static_cast<std::size_t>(rest % phase_levels)];
    rest /= phase_levels;
  }
  return make_solution(a1, a2, std::move(w), 0, 0.0);
}

double constant_modulus_residual(const ComplexVector& w) {
  const double target = 1.0 / std::sqrt(static_cast<double>(w.size()));
  double worst = 0.0;
  for (const auto& z : w) worst = std::max(worst, std::abs(std::abs(z) - target));
  return worst;
}

VerificationReport verify_solution(const BeamformingSolution& solution,
                                   const BeamformingRequest& request,
                                   const ComplexVector& h1, const ComplexVector& h2,
                                   const GainAllocation& alloc,
                                   const SystemParams& params) {
  check_pair(request.a1, solution.w);
  VerificationReport report;
  report.cm_residual = constant_modulus_residual(solution.w);
  const auto rates = rates_case1(h1, h2, solution.w, alloc.p1, alloc.p2, params.noise_power);
  report.rate1 = rates.r1;
  report.rate2 = rates.r2;
  report.rate1_met = rates.r1 >= params.min_rate1 - kRateSlack;
  report.rate2_met = rates.r2 >= params.min_rate2 - kRateSlack;
  report.sum_rate = rates.sum();
  report.bound = sum_rate_bound(alloc, params);
  report.within_bound = report.sum_rate <= report.bound + 1e-9;
  return report;
}

}  // namespace mmnoma
