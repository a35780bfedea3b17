#include "mmnoma/array.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmnoma/error.hpp"

namespace mmnoma {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::infeasible_constraint: return "infeasible-constraint";
    case Errc::invalid_ordering: return "invalid-ordering";
    case Errc::infeasible_gain: return "infeasible-gain";
    case Errc::instance_too_large: return "instance-too-large";
    case Errc::parse_error: return "parse-error";
    case Errc::validation_error: return "validation-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

namespace {

void check_omega(double omega) {
  if (!(omega >= -1.0 && omega <= 1.0)) {
    throw Error(Errc::invalid_argument,
                "cos(AoA) must lie in [-1, 1], got " + std::to_string(omega));
  }
}

void check_antennas(int num_antennas) {
  if (num_antennas < 1) {
    throw Error(Errc::invalid_argument, "number of antennas must be >= 1");
  }
}

}  // namespace

ComplexVector::ComplexVector(std::vector<Complex> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(Errc::invalid_argument, "complex vector must be non-empty");
  }
  for (const auto& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(Errc::invalid_argument, "complex vector entry is not finite");
    }
  }
}

double ComplexVector::squared_norm() const noexcept {
  double acc = 0.0;
  for (const auto& z : entries_) acc += std::norm(z);
  return acc;
}

ComplexVector ComplexVector::scaled(Complex factor) const {
  std::vector<Complex> out(entries_);
  for (auto& z : out) z *= factor;
  return ComplexVector(std::move(out));
}

MultipathChannel::MultipathChannel(std::vector<ChannelPath> paths,
                                   int num_antennas)
    : paths_(std::move(paths)), num_antennas_(num_antennas) {
  check_antennas(num_antennas_);
  if (paths_.empty()) {
    throw Error(Errc::invalid_argument, "channel needs at least one path");
  }
  for (const auto& p : paths_) {
    check_omega(p.cos_aoa);
    if (!std::isfinite(p.coefficient.real()) ||
        !std::isfinite(p.coefficient.imag())) {
      throw Error(Errc::invalid_argument, "path coefficient is not finite");
    }
  }
}

ComplexVector MultipathChannel::response() const {
  std::vector<Complex> h(static_cast<std::size_t>(num_antennas_));
  for (const auto& p : paths_) {
    const auto a = steering_vector(num_antennas_, p.cos_aoa);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += p.coefficient * a[k];
  }
  return ComplexVector(std::move(h));
}

EffectiveChannel::EffectiveChannel(Complex coefficient, double cos_aoa,
                                   int num_antennas)
    : coefficient_(coefficient), cos_aoa_(cos_aoa), num_antennas_(num_antennas) {
  check_antennas(num_antennas_);
  check_omega(cos_aoa_);
  if (!(std::abs(coefficient_) > 0.0) || !std::isfinite(std::abs(coefficient_))) {
    throw Error(Errc::invalid_argument,
                "effective channel coefficient must be finite and non-zero");
  }
}

ComplexVector EffectiveChannel::response() const {
  return steering_vector(num_antennas_, cos_aoa_).scaled(coefficient_);
}

ComplexVector steering_vector(int num_antennas, double omega) {
  check_antennas(num_antennas);
  check_omega(omega);
  std::vector<Complex> a(static_cast<std::size_t>(num_antennas));
  for (std::size_t k = 0; k < a.size(); ++k) {
    // std::polar keeps |a_k| = 1 to the last ulp.
    a[k] = std::polar(1.0, std::numbers::pi * static_cast<double>(k) * omega);
  }
  return ComplexVector(std::move(a));
}

EffectiveChannel effective_channel(const MultipathChannel& channel) {
  const auto& paths = channel.paths();
  std::size_t best = 0;
  double best_mod = std::abs(paths[0].coefficient);
  for (std::size_t l = 1; l < paths.size(); ++l) {
    const double m = std::abs(paths[l].coefficient);
    if (m > best_mod) {
      best = l;
      best_mod = m;
    }
  }
  EffectiveChannel eff(paths[best].coefficient, paths[best].cos_aoa,
                       channel.num_antennas());
  eff.path_index_ = best;
  return eff;
}

Complex inner_product(const ComplexVector& h, const ComplexVector& w) {
  if (h.size() != w.size()) {
    throw Error(Errc::length_mismatch,
                "inner product of vectors with lengths " +
                    std::to_string(h.size()) + " and " + std::to_string(w.size()));
  }
  Complex acc{};
  for (std::size_t k = 0; k < h.size(); ++k) acc += std::conj(h[k]) * w[k];
  return acc;
}

double beam_gain(const ComplexVector& h, const ComplexVector& w) {
  return std::norm(inner_product(h, w));
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(Errc::invalid_argument, "beam pattern grid is empty");
  for (double omega : grid) check_omega(omega);
}

// Gain of w toward a(N, omega) without materialising the steering vector.
double pattern_gain(std::span<const Complex> w, double omega) {
  Complex acc{};
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += std::polar(1.0, -std::numbers::pi * static_cast<double>(k) * omega) * w[k];
  }
  return std::norm(acc);
}

}  // namespace

std::vector<PatternPoint> beam_pattern(const ComplexVector& w,
                                       std::span<const double> grid) {
  check_grid(grid);
  std::vector<PatternPoint> out(grid.size());
  const auto weights = w.view();
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double omega = grid[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {omega, pattern_gain(weights, omega)};
  }
  return out;
}

namespace reference {

std::vector<PatternPoint> beam_pattern(const ComplexVector& w,
                                       std::span<const double> grid) {
  check_grid(grid);
  std::vector<PatternPoint> out;
  out.reserve(grid.size());
  for (double omega : grid) {
    out.push_back({omega, mmnoma::beam_gain(steering_vector(
                              static_cast<int>(w.size()), omega), w)});
  }
  return out;
}

}  // namespace reference

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw Error(Errc::invalid_argument, "grid needs at least two points");
  std::vector<double> grid(points);
  const double step = 2.0 / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = -1.0 + step * static_cast<double>(i);
  }
  grid.back() = 1.0;
  return grid;
}

}  // namespace mmnoma
