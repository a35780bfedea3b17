#include "mmnoma/channel_gen.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mmnoma/error.hpp"

namespace mmnoma {

void ChannelScenario::validate() const {
  if (num_paths < 1) throw Error(Errc::invalid_argument, "scenario needs >= 1 path");
  if (num_antennas < 1) throw Error(Errc::invalid_argument, "scenario needs >= 1 antenna");
  if (!(los_power >= 0.0) || !(nlos_path_power >= 0.0)) {
    throw Error(Errc::invalid_argument, "path powers must be non-negative");
  }
  if (!(user_power_scale > 0.0) || !std::isfinite(user_power_scale)) {
    throw Error(Errc::invalid_argument, "user power scale must be positive");
  }
}

ChannelScenario los_scenario(int num_antennas, int num_paths,
                             double user_power_scale) {
  ChannelScenario s;
  s.kind = ChannelKind::los;
  s.num_paths = num_paths;
  s.num_antennas = num_antennas;
  s.los_power = 1.0;
  s.nlos_path_power = std::pow(10.0, -1.5);
  s.user_power_scale = user_power_scale;
  return s;
}

ChannelScenario nlos_scenario(int num_antennas, int num_paths,
                              double user_power_scale,
                              NlosPowerConvention convention) {
  ChannelScenario s;
  s.kind = ChannelKind::nlos;
  s.num_paths = num_paths;
  s.num_antennas = num_antennas;
  s.los_power = 0.0;
  const double paths = static_cast<double>(num_paths);
  s.nlos_path_power = convention == NlosPowerConvention::unit_total
                          ? 1.0 / paths
                          : 1.0 / std::sqrt(paths);
  s.user_power_scale = user_power_scale;
  return s;
}

Complex Rng::circular_gaussian(double power) {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double radius = std::sqrt(-power * std::log(u1));
  return std::polar(radius, 2.0 * std::numbers::pi * u2);
}

Complex Rng::unit_phase() {
  return std::polar(1.0, 2.0 * std::numbers::pi * uniform01());
}

bool aoa_pair_separated(int num_antennas, double omega1, double omega2) {
  const double gap = std::abs(omega1 - omega2);
  const double width = 2.0 / static_cast<double>(num_antennas);
  return gap > width && gap < 2.0 - width;
}

std::pair<double, double> sample_aoa_pair(int num_antennas, Rng& rng) {
  if (num_antennas <= 2) {
    throw Error(Errc::invalid_argument,
                "AoA separation window is empty for N = " +
                    std::to_string(num_antennas));
  }
  for (;;) {
    const double o1 = rng.uniform(-1.0, 1.0);
    const double o2 = rng.uniform(-1.0, 1.0);
    if (aoa_pair_separated(num_antennas, o1, o2)) return {o1, o2};
  }
}

std::pair<double, double> sample_aoa_pair(int num_antennas, RngSeed seed) {
  Rng rng(seed);
  return sample_aoa_pair(num_antennas, rng);
}

MultipathChannel sample_channel(const ChannelScenario& scenario,
                                std::span<const double> aoas, Rng& rng) {
  scenario.validate();
  if (aoas.size() != static_cast<std::size_t>(scenario.num_paths)) {
    throw Error(Errc::length_mismatch,
                "expected " + std::to_string(scenario.num_paths) +
                    " AoAs, got " + std::to_string(aoas.size()));
  }
  const double scale = scenario.user_power_scale;
  const double nlos_power = scenario.nlos_path_power * scale * scale;
  std::vector<ChannelPath> paths;
  paths.reserve(aoas.size());
  for (std::size_t l = 0; l < aoas.size(); ++l) {
    Complex coefficient;
    if (l == 0 && scenario.kind == ChannelKind::los) {
      coefficient = std::polar(std::sqrt(scenario.los_power) * scale,
                               2.0 * std::numbers::pi * rng.uniform01());
    } else {
      coefficient = rng.circular_gaussian(nlos_power);
    }
    paths.push_back({coefficient, aoas[l]});
  }
  return MultipathChannel(std::move(paths), scenario.num_antennas);
}

MultipathChannel sample_channel(const ChannelScenario& scenario,
                                std::span<const double> aoas, RngSeed seed) {
  Rng rng(seed);
  return sample_channel(scenario, aoas, rng);
}

}  // namespace mmnoma
