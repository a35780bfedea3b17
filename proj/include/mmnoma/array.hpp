#pragma once

// Uniform linear array primitives: steering vectors, multipath channels,
// beam gains and beam patterns. Antenna k (0-based) of a half-wavelength ULA
// sees phase pi * k * Omega for a plane wave with cos(AoA) = Omega.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mmnoma {

using Complex = std::complex<double>;

/// Non-empty vector of finite complex numbers.
class ComplexVector {
 public:
  explicit ComplexVector(std::vector<Complex> entries);
  ComplexVector(std::initializer_list<Complex> entries)
      : ComplexVector(std::vector<Complex>(entries)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  const Complex& operator[](std::size_t k) const { return entries_[k]; }
  std::span<const Complex> view() const noexcept { return entries_; }
  const std::vector<Complex>& entries() const noexcept { return entries_; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  double squared_norm() const noexcept;
  ComplexVector scaled(Complex factor) const;

 private:
  std::vector<Complex> entries_;
};

struct ChannelPath {
  Complex coefficient;
  double cos_aoa;
};

/// Sum of steering vectors weighted by complex path coefficients.
class MultipathChannel {
 public:
  MultipathChannel(std::vector<ChannelPath> paths, int num_antennas);

  const std::vector<ChannelPath>& paths() const noexcept { return paths_; }
  int num_antennas() const noexcept { return num_antennas_; }

  /// Full channel response vector h = sum_l lambda_l a(N, Omega_l).
  ComplexVector response() const;

 private:
  std::vector<ChannelPath> paths_;
  int num_antennas_;
};

/// Single-path approximation lambda * a(N, Omega) of a multipath channel.
class EffectiveChannel {
 public:
  EffectiveChannel(Complex coefficient, double cos_aoa, int num_antennas);

  Complex coefficient() const noexcept { return coefficient_; }
  double modulus() const noexcept { return std::abs(coefficient_); }
  double cos_aoa() const noexcept { return cos_aoa_; }
  int num_antennas() const noexcept { return num_antennas_; }
  /// Index of the selected path in the source channel (0 when built directly).
  std::size_t path_index() const noexcept { return path_index_; }

  ComplexVector response() const;

 private:
  friend EffectiveChannel effective_channel(const MultipathChannel& channel);

  Complex coefficient_;
  double cos_aoa_;
  int num_antennas_;
  std::size_t path_index_ = 0;
};

struct PatternPoint {
  double omega;
  double gain;
};

ComplexVector steering_vector(int num_antennas, double omega);

/// Strongest path by coefficient modulus; ties resolve to the lowest index.
EffectiveChannel effective_channel(const MultipathChannel& channel);

/// h^H w = sum_k conj(h_k) w_k.
Complex inner_product(const ComplexVector& h, const ComplexVector& w);

/// |h^H w|^2.
double beam_gain(const ComplexVector& h, const ComplexVector& w);

/// Gain |a(N, Omega)^H w|^2 at every grid point, N = w.size().
std::vector<PatternPoint> beam_pattern(const ComplexVector& w,
                                       std::span<const double> grid);

/// `points` evenly spaced values covering [-1, 1] inclusive.
std::vector<double> uniform_grid(std::size_t points = 1001);

namespace reference {
std::vector<PatternPoint> beam_pattern(const ComplexVector& w,
                                       std::span<const double> grid);
}  // namespace reference

}  // namespace mmnoma
