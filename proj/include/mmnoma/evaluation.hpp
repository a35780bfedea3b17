#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mmnoma/allocation.hpp"
#include "mmnoma/array.hpp"
#include "mmnoma/beamformer.hpp"
#include "mmnoma/channel_gen.hpp"

namespace mmnoma {

/// Slack used when checking achieved rates against minimum-rate constraints.
inline constexpr double kRateSlack = 1e-6;

/// User 1 decoded first: User 1 sees User 2 as interference.
RatePair rates_case1(const ComplexVector& h1, const ComplexVector& h2,
                     const ComplexVector& w, double p1, double p2, double sigma2);
/// User 2 decoded first.
RatePair rates_case2(const ComplexVector& h1, const ComplexVector& h2,
                     const ComplexVector& w, double p1, double p2, double sigma2);

/// Time-shared baseline: each user gets half the time, array gain N/2 and
/// instantaneous power 2P.
double oma_sum_rate(double lambda1, double lambda2, int num_antennas, double max_power,
                    double sigma2);

struct BeamGains {
  double c1 = 0;
  double c2 = 0;
};

struct GainErrorReport {
  double err_user1 = 0;
  double err_user2 = 0;
  double err_sum = 0;
};

/// Relative errors |designed - ideal| / ideal. An ideal User-2 gain of zero
/// counts as zero error.
GainErrorReport gain_error(const BeamGains& designed, const BeamGains& ideal);

struct RateReport {
  double rate1 = 0;
  double rate2 = 0;
  double sum_rate = 0;
  double bound = 0;
  double oma_sum_rate = 0;
  DecodeFirst decode_first = DecodeFirst::user1;
};

/// Ideal gains with c1 = fraction * N and the rest of the budget on User 2.
BeamGains target_gains(int num_antennas, double lambda1, double lambda2, double fraction);

/// Beam design for fixed effective channels and prescribed ideal gains.
struct GainDesign {
  BeamGains ideal;
  BeamGains designed;
  GainErrorReport errors;
  BeamformingSolution solution;
};

struct GeometrySpec {
  int num_antennas = 32;
  double lambda1 = 0.9;
  double lambda2 = 0.4;
  double omega1 = -0.7;
  double omega2 = 0.5;
  double target_fraction = 2.0 / 3.0;
  int num_phases = 20;
  double tol = kDefaultSolverTol;
};

GainDesign design_for_targets(const GeometrySpec& spec);

enum class TrialStatus { ok, infeasible_r2, infeasible_r1 };
std::string_view to_string(TrialStatus status);

/// Full pipeline on fixed effective channels: allocation, beamforming, rates.
struct FixedChannelOutcome {
  TrialStatus status = TrialStatus::ok;
  GainAllocation alloc;
  RatePair bound_rates;      // rates implied by the ideal allocation
  double bound = 0;
  RatePair designed_rates;   // rates achieved with the designed w
  GainErrorReport errors;
  std::optional<BeamformingSolution> solution;
};

FixedChannelOutcome evaluate_fixed_channels(const SystemParams& params,
                                            const EffectiveChannel& user1,
                                            const EffectiveChannel& user2,
                                            double tol = kDefaultSolverTol);

struct RateTrialConfig {
  SystemParams params;
  ChannelScenario user1;
  ChannelScenario user2;
  /// Redraw the channel pair until the strongest paths are 2/N-separated.
  bool separate_effective_aoas = true;
  double tol = kDefaultSolverTol;

  void validate() const;
};

/// Rates are labelled after sorting users by effective-channel modulus, so
/// "User 1" is always the stronger one; `swapped` records a relabel.
struct TrialOutcome {
  TrialStatus status = TrialStatus::ok;
  bool swapped = false;
  RateReport theoretical;  // effective (strongest-path) channels
  RateReport practical;    // full multipath channels, same w
  BeamGains ideal;
  BeamGains designed;
  GainErrorReport errors;
};

TrialOutcome run_trial(const RateTrialConfig& config, RngSeed seed);

struct GainTrialConfig {
  int num_antennas = 32;
  double lambda1 = 0.9;
  double lambda2 = 0.4;
  double target_fraction = 2.0 / 3.0;
  int num_phases = 20;
  double tol = kDefaultSolverTol;

  void validate() const;
};

struct GainTrialOutcome {
  double omega1 = 0;
  double omega2 = 0;
  BeamGains ideal;
  BeamGains designed;
  GainErrorReport errors;
};

/// Random separated AoA pair, then beam design for the target gains.
GainTrialOutcome run_gain_trial(const GainTrialConfig& config, RngSeed seed);

struct Statistic {
  std::string name;
  double mean = 0;
  double stddev = 0;  // sample standard deviation, 0 when count < 2
  int count = 0;
};

struct MonteCarloSummary {
  int trials = 0;
  int infeasible = 0;
  std::vector<Statistic> stats;

  const Statistic& at(std::string_view name) const;
};

/// Trial t uses seed base_seed + t. Trials run on OpenMP threads; results are
/// reduced in trial order so output does not depend on the thread count.
MonteCarloSummary run_monte_carlo(const RateTrialConfig& config, int trials,
                                  std::uint64_t base_seed);
MonteCarloSummary run_monte_carlo(const GainTrialConfig& config, int trials,
                                  std::uint64_t base_seed);

namespace reference {
MonteCarloSummary run_monte_carlo(const RateTrialConfig& config, int trials,
                                  std::uint64_t base_seed);
MonteCarloSummary run_monte_carlo(const GainTrialConfig& config, int trials,
                                  std::uint64_t base_seed);
}  // namespace reference

}  // namespace mmnoma
