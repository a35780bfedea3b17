#pragma once

// Power control and beam-gain allocation under ideal beamforming.
//
// With ideal beamforming the two beam gains trade off on the line
//   c1 / |lambda1|^2 + c2 / |lambda2|^2 = N,
// both users transmit at full power P, and the sum rate
//   log2(1 + (c1 + c2) P / sigma^2)
// decreases in c2 whenever |lambda1| > |lambda2|. The optimum therefore puts
// User 2 exactly on its rate constraint and everything else on User 1.

#include <array>
#include <cstddef>

namespace mmnoma {

struct SystemParams {
  int num_antennas = 32;   // N
  double max_power = 100;  // P, mW, per user
  double noise_power = 1;  // sigma^2, mW
  double min_rate1 = 0;    // r1, bps/Hz
  double min_rate2 = 0;    // r2, bps/Hz
  int num_phases = 20;     // M

  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

enum class DecodeFirst { user1, user2 };

struct GainAllocation {
  double p1 = 0;
  double p2 = 0;
  double c1 = 0;
  double c2 = 0;
  DecodeFirst decode_first = DecodeFirst::user1;
};

/// User 1 decoded first: c2 just meets r2 interference-free.
GainAllocation allocate_case1(double lambda1, double lambda2,
                              const SystemParams& params);

/// User 2 decoded first: c2 must meet r2 against User 1 interference.
GainAllocation allocate_case2(double lambda1, double lambda2,
                              const SystemParams& params);

struct DecodingOrderChoice {
  GainAllocation chosen;  // always the Case-1 allocation
  GainAllocation case2;   // kept for verification reports
};

DecodingOrderChoice choose_decoding_order(double lambda1, double lambda2,
                                          const SystemParams& params);

/// log2(1 + (c1 p1 + c2 p2) / sigma^2).
double sum_rate_bound(const GainAllocation& alloc, const SystemParams& params);

/// Per-user rates implied by the allocation under its own decoding order.
struct RatePair {
  double r1 = 0;
  double r2 = 0;
  double sum() const { return r1 + r2; }
};
RatePair allocation_rates(const GainAllocation& alloc, const SystemParams& params);

/// Whether User 1's rate under the Case-1 allocation meets r1.
bool check_r1_feasibility(const GainAllocation& alloc, double lambda1,
                          double lambda2, const SystemParams& params);

/// |c1/|l1|^2 + c2/|l2|^2 - N|, the deviation from the ideal-gain budget.
double budget_residual(const GainAllocation& alloc, double lambda1,
                       double lambda2, int num_antennas);

/// Sorts two users by channel modulus, strongest first. Ties keep input order.
struct UserOrdering {
  std::array<std::size_t, 2> order{0, 1};  // order[i] = input index of user i+1
  bool swapped() const { return order[0] != 0; }
};
UserOrdering order_users(double modulus_a, double modulus_b);

}  // namespace mmnoma
