#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace autoconv {

/// Lower bound on mu_2^2 used when no certificate is supplied.
inline constexpr double kCertifiedMu2Lower = 0.574635728;

/// Real weights H(1..N) normalized so that sum H = N. Negative entries are allowed.
class WeightSequence {
 public:
  /// Rescales values to sum to N = values.size(). Throws InvalidArgument if
  /// values is empty, contains non-finite entries or sums to zero.
  explicit WeightSequence(std::vector<double> values);

  /// H = (1, ..., 1) of length N.
  static WeightSequence constant(std::size_t N);

  std::size_t size() const { return h_.size(); }
  /// 1-based access, H(j) for 1 <= j <= N.
  double operator()(std::size_t j) const { return h_[j - 1]; }
  const std::vector<double>& values() const { return h_; }

 private:
  std::vector<double> h_;
};

/// (H*H)(x) for x = 2..2N, stored at index x - 2.
std::vector<double> self_convolution(const WeightSequence& H);

struct EnergyReport {
  std::size_t N = 0;
  double energy = 0.0;  // sum_x (H*H)(x)^2
  double bound = 0.0;   // mu2 N^3
  double ratio = 0.0;   // energy / bound
};

EnergyReport additive_energy(const WeightSequence& H, double mu2 = kCertifiedMu2Lower);

struct StepEmbedding {
  double integral = 0.0;       // int_0^2 (f*f)^2 for the step function f = sum H(j) 1((j-1)/N, j/N]
  double discrete_side = 0.0;  // N^-3 sum_x (H*H)(x)^2
};

/// Integrates the piecewise-linear (f*f)^2 exactly segment by segment.
StepEmbedding step_embedding(const WeightSequence& H);

struct SigmaBounds {
  double mu2_lower = 0.0;
  double sigma2_g2 = 0.0;  // sqrt((2 - 1/g) / mu2)
  double sigma2_g3 = 0.0;
  double sigma2_g4 = 0.0;
  double sigma3_1 = 0.0;  // (2 / mu2)^(1/3)
  double sigma4_1 = 0.0;  // (4 / mu2)^(1/4)

  double sigma2(int g) const;
};

/// Throws InvalidArgument unless 0.5 < mu2_lower < 0.7; values above the
/// range would usually mean an upper bound was passed by mistake.
SigmaBounds sigma_bounds(double mu2_lower);

/// n uniform draws in [0, 1) from mt19937_64(seed), taking the top 53 bits of each output.
std::vector<double> uniform_draws(std::uint64_t seed, std::size_t n);

/// Random nonnegative weights for energy trials; trial t of a seeded run uses
/// seed + t so trials are independent of each other's lengths.
WeightSequence random_weights(std::size_t N, std::uint64_t seed);

}  // namespace autoconv
