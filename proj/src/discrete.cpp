#include "autoconv/discrete.hpp"

#include <cmath>
#include <random>
#include <string>

#include "autoconv/error.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/summation.hpp"

namespace autoconv {

WeightSequence::WeightSequence(std::vector<double> values) : h_(std::move(values)) {
  if (h_.empty()) throw InvalidArgument("weight sequence must be non-empty");
  numeric::CompensatedSum sum;
  for (std::size_t j = 0; j < h_.size(); ++j) {
    if (!std::isfinite(h_[j])) throw NonFiniteCoefficient(j + 1, h_[j]);
    sum.add(h_[j]);
  }
  const double total = sum.value();
  if (total == 0.0 || !std::isfinite(total)) {
    throw InvalidArgument("weight sequence must have a nonzero finite sum");
  }
  const double N = static_cast<double>(h_.size());
  if (total != N) {
    const double scale = N / total;
    for (double& v : h_) v *= scale;
  }
}

WeightSequence WeightSequence::constant(std::size_t N) {
  if (N == 0) throw InvalidArgument("weight sequence must be non-empty");
  return WeightSequence(std::vector<double>(N, 1.0));
}

std::vector<double> self_convolution(const WeightSequence& H) {
  const std::size_t N = H.size();
  const auto& h = H.values();
  std::vector<double> out(2 * N - 1);
  parallel_for(out.size(), [&](std::size_t s) {
    // s = a + b with 0-based a, b; fixed ascending order in a.
    const std::size_t lo = s >= N ? s - (N - 1) : 0;
    const std::size_t hi = s < N ? s : N - 1;
    numeric::CompensatedSum acc;
    for (std::size_t a = lo; a <= hi; ++a) acc.add(h[a] * h[s - a]);
    out[s] = acc.value();
  });
  return out;
}

EnergyReport additive_energy(const WeightSequence& H, double mu2) {
  const std::vector<double> conv = self_convolution(H);
  EnergyReport r;
  r.N = H.size();
  r.energy = numeric::compensated_sum(conv.size(), [&](std::size_t i) { return conv[i] * conv[i]; });
  const double N = static_cast<double>(r.N);
  r.bound = mu2 * N * N * N;
  r.ratio = r.energy / r.bound;
  return r;
}

StepEmbedding step_embedding(const WeightSequence& H) {
  const std::vector<double> conv = self_convolution(H);
  const std::size_t N = H.size();
  const double n = static_cast<double>(N);
  // Nodes x_i = i/N for i = 0..2N with (f*f)(x_i) = (H*H)(i+1)/N; the ends vanish.
  auto node = [&](std::size_t i) -> double {
    if (i == 0 || i == 2 * N) return 0.0;
    return conv[i - 1] / n;
  };
  StepEmbedding e;
  e.integral = numeric::compensated_sum(2 * N, [&](std::size_t i) {
                 const double y0 = node(i);
                 const double y1 = node(i + 1);
                 return y0 * y0 + y0 * y1 + y1 * y1;
               }) /
               (3.0 * n);
  const double energy =
      numeric::compensated_sum(conv.size(), [&](std::size_t i) { return conv[i] * conv[i]; });
  e.discrete_side = energy / (n * n * n);
  return e;
}

double SigmaBounds::sigma2(int g) const {
  switch (g) {
    case 2: return sigma2_g2;
    case 3: return sigma2_g3;
    case 4: return sigma2_g4;
    default: throw InvalidArgument("sigma2 is tabulated for g in {2, 3, 4}");
  }
}

SigmaBounds sigma_bounds(double mu2_lower) {
  if (!(mu2_lower > 0.5 && mu2_lower < 0.7)) {
    throw InvalidArgument("mu2 lower bound must lie in (0.5, 0.7), got " + std::to_string(mu2_lower));
  }
  SigmaBounds s;
  s.mu2_lower = mu2_lower;
  auto two = [&](double g) { return std::sqrt((2.0 - 1.0 / g) / mu2_lower); };
  s.sigma2_g2 = two(2.0);
  s.sigma2_g3 = two(3.0);
  s.sigma2_g4 = two(4.0);
  s.sigma3_1 = std::cbrt(2.0 / mu2_lower);
  s.sigma4_1 = std::pow(4.0 / mu2_lower, 0.25);
  return s;
}

std::vector<double> uniform_draws(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return out;
}

WeightSequence random_weights(std::size_t N, std::uint64_t seed) {
  if (N == 0) throw InvalidArgument("weight sequence must be non-empty");
  std::vector<double> h = uniform_draws(seed, N);
  // Guard against an all-zero draw, which cannot be normalized.
  for (double& v : h) v += 0x1.0p-20;
  return WeightSequence(std::move(h));
}

}  // namespace autoconv
