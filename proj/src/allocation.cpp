#include "mmnoma/allocation.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mmnoma/error.hpp"

namespace mmnoma {

void SystemParams::validate() const {
  std::vector<std::string> problems;
  if (num_antennas < 2) problems.emplace_back("N must be >= 2");
  if (!(max_power > 0.0) || !std::isfinite(max_power)) problems.emplace_back("P must be > 0");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) problems.emplace_back("sigma2 must be > 0");
  if (!(min_rate1 >= 0.0) || !std::isfinite(min_rate1)) problems.emplace_back("r1 must be >= 0");
  if (!(min_rate2 >= 0.0) || !std::isfinite(min_rate2)) problems.emplace_back("r2 must be >= 0");
  if (num_phases < 1) problems.emplace_back("M must be >= 1");
  if (problems.empty()) return;
  std::string msg = "invalid system parameters:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw Error(Errc::invalid_argument, msg);
}

namespace {

void check_channels(double lambda1, double lambda2) {
  if (!(lambda2 > 0.0) || !std::isfinite(lambda1)) {
    throw Error(Errc::invalid_argument, "channel moduli must be finite and positive");
  }
  if (lambda1 < lambda2) {
    throw Error(Errc::invalid_ordering,
                "allocation requires |lambda1| >= |lambda2|; relabel users first");
  }
}

GainAllocation finish(double c2, double lambda1, double lambda2,
                      const SystemParams& params, DecodeFirst order) {
  const double l1sq = lambda1 * lambda1;
  const double l2sq = lambda2 * lambda2;
  const double n = static_cast<double>(params.num_antennas);
  const double user2_share = c2 / l2sq;
  if (user2_share > n) {
    throw Error(Errc::infeasible_constraint,
                "r2 = " + std::to_string(params.min_rate2) +
                    " needs user-2 array gain " + std::to_string(user2_share) +
                    " > N = " + std::to_string(params.num_antennas));
  }
  GainAllocation a;
  a.p1 = params.max_power;
  a.p2 = params.max_power;
  a.c2 = c2;
  a.c1 = l1sq * (n - user2_share);
  a.decode_first = order;
  return a;
}

}  // namespace

GainAllocation allocate_case1(double lambda1, double lambda2,
                              const SystemParams& params) {
  params.validate();
  check_channels(lambda1, lambda2);
  const double snr_needed = std::exp2(params.min_rate2) - 1.0;
  const double c2 = snr_needed * params.noise_power / params.max_power;
  return finish(c2, lambda1, lambda2, params, DecodeFirst::user1);
}

GainAllocation allocate_case2(double lambda1, double lambda2,
                              const SystemParams& params) {
  params.validate();
  check_channels(lambda1, lambda2);
  const double l1sq = lambda1 * lambda1;
  const double l2sq = lambda2 * lambda2;
  const double n = static_cast<double>(params.num_antennas);
  const double snr_needed = std::exp2(params.min_rate2) - 1.0;
  const double c2 = (l1sq * n * params.max_power + params.noise_power) * snr_needed /
                    ((1.0 + (l1sq / l2sq) * snr_needed) * params.max_power);
  return finish(c2, lambda1, lambda2, params, DecodeFirst::user2);
}

DecodingOrderChoice choose_decoding_order(double lambda1, double lambda2,
                                          const SystemParams& params) {
  auto chosen = allocate_case1(lambda1, lambda2, params);
  // Case 2 needs strictly more gain on User 2, so it can be infeasible by
  // itself; report it as zero-gain in that case rather than failing the pick.
  GainAllocation case2;
  try {
    case2 = allocate_case2(lambda1, lambda2, params);
  } catch (const Error& e) {
    if (e.code() != Errc::infeasible_constraint) throw;
    case2.decode_first = DecodeFirst::user2;
  }
  return {chosen, case2};
}

double sum_rate_bound(const GainAllocation& alloc, const SystemParams& params) {
  return std::log2(1.0 + (alloc.c1 * alloc.p1 + alloc.c2 * alloc.p2) / params.noise_power);
}

RatePair allocation_rates(const GainAllocation& alloc, const SystemParams& params) {
  const double s1 = alloc.c1 * alloc.p1;
  const double s2 = alloc.c2 * alloc.p2;
  const double noise = params.noise_power;
  if (alloc.decode_first == DecodeFirst::user1) {
    return {std::log2(1.0 + s1 / (s2 + noise)), std::log2(1.0 + s2 / noise)};
  }
  return {std::log2(1.0 + s1 / noise), std::log2(1.0 + s2 / (s1 + noise))};
}

bool check_r1_feasibility(const GainAllocation& alloc, double lambda1,
                          double lambda2, const SystemParams& params) {
  check_channels(lambda1, lambda2);
  const double rate1 = std::log2(
      1.0 + alloc.c1 * params.max_power / (alloc.c2 * params.max_power + params.noise_power));
  return rate1 >= params.min_rate1;
}

double budget_residual(const GainAllocation& alloc, double lambda1,
                       double lambda2, int num_antennas) {
  return std::abs(alloc.c1 / (lambda1 * lambda1) + alloc.c2 / (lambda2 * lambda2) -
                  static_cast<double>(num_antennas));
}

UserOrdering order_users(double modulus_a, double modulus_b) {
  UserOrdering o;
  if (modulus_b > modulus_a) o.order = {1, 0};
  return o;
}

}  // namespace mmnoma
