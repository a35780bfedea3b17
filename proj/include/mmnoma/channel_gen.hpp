#pragma once

// Seeded stochastic mmWave channels.
//
// Random streams come from std::mt19937_64 (the standard 64-bit Mersenne
// Twister, MT19937-64) so that any port can reproduce them. The library never
// uses <random> distributions, whose output is implementation-defined:
//   uniform01       = (next() >> 11) * 2^-53                      in [0, 1)
//   circular normal = sqrt(power) * sqrt(-ln(1 - u1)) * exp(j 2 pi u2)
// which is Box-Muller written in polar form. Trial t of a Monte Carlo run uses
// the seed base_seed + t.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "mmnoma/array.hpp"

namespace mmnoma {

enum class ChannelKind { los, nlos };

/// How NLOS per-path average power is set for the all-NLOS scenario.
enum class NlosPowerConvention {
  unit_total,        // 1/L per path, unit total average power
  inverse_sqrt_paths // 1/sqrt(L) per path, as literally printed
};

struct ChannelScenario {
  ChannelKind kind = ChannelKind::los;
  int num_paths = 4;
  int num_antennas = 32;
  double los_power = 1.0;                 // linear, path 0 of a LOS channel
  double nlos_path_power = 0.031622776601683794;  // linear, each NLOS path
  double user_power_scale = 1.0;          // amplitude scale of this user

  void validate() const;
};

/// LOS path of unit power plus (L-1) NLOS paths at -15 dB each.
ChannelScenario los_scenario(int num_antennas, int num_paths,
                             double user_power_scale);
ChannelScenario nlos_scenario(int num_antennas, int num_paths,
                              double user_power_scale,
                              NlosPowerConvention convention =
                                  NlosPowerConvention::unit_total);

struct RngSeed {
  std::uint64_t value = 0;
};

class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Zero-mean circularly symmetric complex Gaussian with E|z|^2 = power.
  Complex circular_gaussian(double power);
  /// Unit-modulus complex number with phase uniform on [0, 2 pi).
  Complex unit_phase();

 private:
  std::mt19937_64 engine_;
};

/// Two cos(AoA) values uniform on [-1, 1], redrawn until
/// 2/N < |Omega1 - Omega2| < 2 - 2/N.
std::pair<double, double> sample_aoa_pair(int num_antennas, RngSeed seed);
std::pair<double, double> sample_aoa_pair(int num_antennas, Rng& rng);

/// True when the pair lies strictly inside the separation window above.
bool aoa_pair_separated(int num_antennas, double omega1, double omega2);

MultipathChannel sample_channel(const ChannelScenario& scenario,
                                std::span<const double> aoas, RngSeed seed);
MultipathChannel sample_channel(const ChannelScenario& scenario,
                                std::span<const double> aoas, Rng& rng);

}  // namespace mmnoma
