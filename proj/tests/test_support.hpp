#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mmnoma/array.hpp"
#include "mmnoma/channel_gen.hpp"

namespace mmnoma::test {

inline ComplexVector random_vector(Rng& rng, int n, double scale = 1.0) {
  std::vector<Complex> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.circular_gaussian(scale * scale);
  return ComplexVector(std::move(v));
}

inline ComplexVector random_cm_vector(Rng& rng, int n) {
  std::vector<Complex> v(static_cast<std::size_t>(n));
  const double m = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& x : v) x = std::polar(m, 2.0 * std::numbers::pi * rng.uniform01());
  return ComplexVector(std::move(v));
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace mmnoma::test
