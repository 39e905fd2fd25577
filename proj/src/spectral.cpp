#include "autoconv/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "autoconv/error.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/summation.hpp"

namespace autoconv {

using numeric::CompensatedSum;
using numeric::compensated_sum;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kOddScale = 16.0 / std::pow(kPi, 4);

double sign_of_index(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Channel rows are grouped into chunks so that parallel_for has enough work
// per task while each row is still summed serially in k order.
constexpr std::size_t kRowChunk = 256;

}  // namespace

FourierCoefficients::FourierCoefficients(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw NonFiniteCoefficient(i + 1, values_[i]);
  }
}

FourierCoefficients build_coefficients(std::vector<double> values) {
  return FourierCoefficients(std::move(values));
}

double FourierCoefficients::evaluate(double x) const {
  if (std::abs(x) > 0.5) return 0.0;
  CompensatedSum acc;
  acc.add(1.0);
  for (std::size_t k = 1; k <= values_.size(); ++k) {
    acc.add(2.0 * values_[k - 1] * std::cos(kTwoPi * static_cast<double>(k) * x));
  }
  return acc.value();
}

double FourierCoefficients::abs_sum() const {
  CompensatedSum acc;
  acc.add(1.0);
  for (double v : values_) acc.add(2.0 * std::abs(v));
  return acc.value();
}

// ---------------------------------------------------------------------------
// Odd channels

OddChannelOperator::OddChannelOperator(std::size_t degree, std::size_t channels,
                                       std::size_t table_cap)
    : degree_(degree), channels_(channels) {
  if (channels == 0) throw InvalidArgument("number of odd channels must be positive");
  if (degree > 0 && degree <= table_cap / channels) {
    rows_.resize(degree * channels);
    columns_.resize(degree * channels);
    for (std::size_t m = 1; m <= channels; ++m) {
      for (std::size_t k = 1; k <= degree; ++k) {
        const double w = weight(m, k);
        rows_[(m - 1) * degree + (k - 1)] = w;
        columns_[(k - 1) * channels + (m - 1)] = w;
      }
    }
  }
}

double OddChannelOperator::weight(std::size_t m, std::size_t k) noexcept {
  const double odd = 2.0 * static_cast<double>(m) - 1.0;
  const double even = 2.0 * static_cast<double>(k);
  return 2.0 * odd * sign_of_index(k) / (odd * odd - even * even);
}

std::pair<double, double> OddChannelOperator::channel_with_magnitude(
    std::span<const double> coeffs, std::size_t m, double head) const {
  const double lead = head / (2.0 * static_cast<double>(m) - 1.0);
  CompensatedSum acc;
  CompensatedSum mag;
  acc.add(lead);
  mag.add(std::abs(lead));
  const std::size_t n = std::min(coeffs.size(), degree_);
  const bool table = materialized() && m <= channels_;
  const double* row = table ? rows_.data() + (m - 1) * degree_ : nullptr;
  for (std::size_t k = 1; k <= n; ++k) {
    const double term = (table ? row[k - 1] : weight(m, k)) * coeffs[k - 1];
    acc.add(term);
    mag.add(std::abs(term));
  }
  return {acc.value(), mag.value()};
}

double OddChannelOperator::channel(std::span<const double> coeffs, std::size_t m,
                                   double head) const {
  const double lead = head / (2.0 * static_cast<double>(m) - 1.0);
  CompensatedSum acc;
  acc.add(lead);
  const std::size_t n = std::min(coeffs.size(), degree_);
  if (materialized() && m <= channels_) {
    const double* row = rows_.data() + (m - 1) * degree_;
    for (std::size_t k = 0; k < n; ++k) acc.add(row[k] * coeffs[k]);
  } else {
    for (std::size_t k = 1; k <= n; ++k) acc.add(weight(m, k) * coeffs[k - 1]);
  }
  return acc.value();
}

std::vector<double> OddChannelOperator::apply(std::span<const double> coeffs, double head) const {
  std::vector<double> out(channels_);
  const std::size_t chunks = (channels_ + kRowChunk - 1) / kRowChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(channels_, (c + 1) * kRowChunk);
    for (std::size_t i = c * kRowChunk; i < end; ++i) out[i] = channel(coeffs, i + 1, head);
  });
  return out;
}

std::vector<double> OddChannelOperator::adjoint(std::span<const double> v) const {
  std::vector<double> out(degree_);
  const std::size_t n = std::min(v.size(), channels_);
  parallel_for(degree_, [&](std::size_t j) {
    CompensatedSum acc;
    if (materialized()) {
      const double* column = columns_.data() + j * channels_;
      for (std::size_t m = 0; m < n; ++m) acc.add(v[m] * column[m]);
    } else {
      for (std::size_t m = 0; m < n; ++m) acc.add(v[m] * weight(m + 1, j + 1));
    }
    out[j] = acc.value();
  });
  return out;
}

double odd_channel(const FourierCoefficients& f, std::size_t m) {
  if (m == 0) throw InvalidArgument("odd channel index must be >= 1");
  return OddChannelOperator(f.degree(), m, 0).channel(f.values(), m);
}

// ---------------------------------------------------------------------------
// Objective

ObjectiveEvaluator::ObjectiveEvaluator(std::size_t degree, std::size_t R, std::size_t table_cap)
    : op_(degree, R, table_cap) {}

namespace {

ObjectiveBreakdown breakdown(std::span<const double> coeffs, const std::vector<double>& channels) {
  ObjectiveBreakdown out;
  out.R = channels.size();
  out.even_sum = compensated_sum(coeffs.size(), [&](std::size_t k) {
    const double sq = coeffs[k] * coeffs[k];
    return sq * sq;
  });
  out.odd_sum = kOddScale * compensated_sum(channels.size(), [&](std::size_t m) {
                  const double sq = channels[m] * channels[m];
                  return sq * sq;
                });
  CompensatedSum total;
  total.add(0.5);
  total.add(out.even_sum);
  total.add(out.odd_sum);
  out.total = total.value();
  if (!std::isfinite(out.total)) {
    throw Overflow("objective overflowed; coefficients are outside any plausible range");
  }
  return out;
}

}  // namespace

ObjectiveBreakdown ObjectiveEvaluator::value(std::span<const double> coeffs) const {
  if (coeffs.size() != op_.degree()) throw InvalidArgument("coefficient count does not match T");
  return breakdown(coeffs, op_.apply(coeffs));
}

ObjectiveBreakdown ObjectiveEvaluator::value_and_gradient(std::span<const double> coeffs,
                                                          std::span<double> gradient) const {
  if (coeffs.size() != op_.degree()) throw InvalidArgument("coefficient count does not match T");
  if (gradient.size() != coeffs.size()) throw InvalidArgument("gradient size does not match T");
  std::vector<double> channels = op_.apply(coeffs);
  const ObjectiveBreakdown out = breakdown(coeffs, channels);
  for (double& c : channels) c = c * c * c;
  const std::vector<double> back = op_.adjoint(channels);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    gradient[j] = 4.0 * coeffs[j] * coeffs[j] * coeffs[j] + 4.0 * kOddScale * back[j];
  }
  return out;
}

ObjectiveBreakdown objective(const FourierCoefficients& f, std::size_t R) {
  if (R == 0) throw InvalidArgument("R must be >= 1");
  return ObjectiveEvaluator(f.degree(), R).value(f.values());
}

std::vector<double> gradient(const FourierCoefficients& f, std::size_t R) {
  if (R == 0) throw InvalidArgument("R must be >= 1");
  std::vector<double> g(f.degree());
  ObjectiveEvaluator(f.degree(), R).value_and_gradient(f.values(), g);
  return g;
}

double decay_constant(const FourierCoefficients& f) { return 2.0 / kPi * f.abs_sum(); }

double odd_power_tail(std::size_t first, double p) {
  if (first < 2 || !(p > 1.0)) throw InvalidArgument("odd_power_tail needs first >= 2, p > 1");
  const double base = 2.0 * static_cast<double>(first) - 3.0;
  return std::pow(base, 1.0 - p) / (2.0 * (p - 1.0));
}

double objective_tail_bound(const FourierCoefficients& f, std::size_t R) {
  if (R < 2 * f.degree() || R == 0) {
    throw InvalidArgument("objective tail bound requires R >= 2T");
  }
  const double c = decay_constant(f);
  // 8 * (both signs) * sum_{j > R} (C/(2j-1))^4
  return 16.0 * std::pow(c, 4) * odd_power_tail(R + 1, 4.0);
}

// ---------------------------------------------------------------------------
// Period-2 spectrum

double PeriodTwoSpectrum::operator()(long long m) const {
  const auto a = static_cast<std::size_t>(m < 0 ? -m : m);
  if (a > M) throw InvalidArgument("spectrum index outside [-M, M]");
  return coeffs[a];
}

PeriodTwoSpectrum period2_spectrum(const FourierCoefficients& f, std::size_t M) {
  if (M == 0) throw InvalidArgument("M must be >= 1");
  PeriodTwoSpectrum out;
  out.M = M;
  out.coeffs.assign(M + 1, 0.0);
  out.coeffs[0] = 0.5;
  for (std::size_t m = 2; m <= M; m += 2) out.coeffs[m] = 0.5 * f[m / 2];
  const std::size_t odd_count = (M + 1) / 2;
  const OddChannelOperator op(f.degree(), odd_count, 0);
  const std::vector<double> channels = op.apply(f.values());
  for (std::size_t j = 1; j <= odd_count; ++j) {
    const std::size_t m = 2 * j - 1;
    out.coeffs[m] = sign_of_index((m - 1) / 2) * channels[j - 1] / kPi;
  }
  if (M >= 4 * f.degree() && odd_count + 1 >= 2) {
    const double c = decay_constant(f);
    out.l4_tail_bound = 16.0 * std::pow(c, 4) * odd_power_tail(odd_count + 1, 4.0);
  } else {
    out.l4_tail_bound = std::numeric_limits<double>::infinity();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Autoconvolution

Autoconvolution::Autoconvolution(const FourierCoefficients& f) {
  const std::size_t T = f.degree();
  squares_.resize(T);
  sines_.resize(T);
  // a_j for j = -T .. T, stored at j + T.
  std::vector<double> alternating(2 * T + 1);
  for (std::size_t j = 0; j <= T; ++j) {
    const double a = sign_of_index(j) * f[j];
    alternating[T + j] = a;
    alternating[T - j] = a;
  }
  for (std::size_t k = 1; k <= T; ++k) {
    squares_[k - 1] = f[k] * f[k];
    CompensatedSum hilbert;
    const auto kk = static_cast<long long>(k);
    for (long long j = -static_cast<long long>(T); j <= static_cast<long long>(T); ++j) {
      if (j == kk) continue;
      hilbert.add(alternating[static_cast<std::size_t>(j + static_cast<long long>(T))] /
                  static_cast<double>(j - kk));
    }
    const double beta = hilbert.value() / kTwoPi;
    sines_[k - 1] = 4.0 * alternating[T + k] * beta;
  }
}

double Autoconvolution::operator()(double x) const {
  const double t = std::abs(x);
  if (t >= 1.0) return 0.0;
  CompensatedSum cosines;
  CompensatedSum sines;
  cosines.add(1.0);
  for (std::size_t k = 1; k <= squares_.size(); ++k) {
    const double phase = kTwoPi * static_cast<double>(k) * t;
    cosines.add(2.0 * squares_[k - 1] * std::cos(phase));
    sines.add(sines_[k - 1] * std::sin(phase));
  }
  CompensatedSum out;
  out.add((1.0 - t) * cosines.value());
  out.add(sines.value());
  return out.value();
}

std::vector<double> autoconvolution_curve(const FourierCoefficients& f,
                                          std::span<const double> grid) {
  for (double x : grid) {
    if (!(std::abs(x) <= 1.0)) throw InvalidArgument("autoconvolution grid must lie in [-1, 1]");
  }
  const Autoconvolution conv(f);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = conv(grid[i]); });
  return out;
}

TruncatedSeries autoconvolution_curve_spectral(const FourierCoefficients& f,
                                               std::span<const double> grid, std::size_t M) {
  if (M < 4 * f.degree() || M < 2) {
    throw InvalidArgument("spectral autoconvolution needs M >= max(4T, 2)");
  }
  const PeriodTwoSpectrum spec = period2_spectrum(f, M);
  TruncatedSeries out;
  out.values.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = std::abs(grid[i]);
    CompensatedSum acc;
    acc.add(2.0 * spec.coeffs[0] * spec.coeffs[0]);
    for (std::size_t m = 1; m <= M; ++m) {
      const double c = spec.coeffs[m];
      if (c == 0.0) continue;
      acc.add(4.0 * c * c * std::cos(kPi * static_cast<double>(m) * x));
    }
    out.values[i] = acc.value();
  });
  const double c = decay_constant(f);
  // 2 * (both signs) * sum_{odd m > M} (C/m)^2
  out.tail_bound = 4.0 * c * c * odd_power_tail((M + 1) / 2 + 1, 2.0);
  return out;
}

// ---------------------------------------------------------------------------
// Threefold flatness

FlatnessReport threefold_flatness(const FourierCoefficients& f, double candidate_mu2,
                                  std::span<const double> grid, std::size_t M) {
  if (!(candidate_mu2 > 0.0)) throw InvalidArgument("candidate mu2 must be positive");
  for (double x : grid) {
    if (!(std::abs(x) < 0.5)) {
      throw InvalidArgument("flatness grid must lie strictly inside (-1/2, 1/2)");
    }
  }
  if (M == 0) M = std::max<std::size_t>(std::size_t{1} << 17, 64 * f.degree());
  M = std::max(M, 4 * f.degree());
  const PeriodTwoSpectrum spec = period2_spectrum(f, M);
  std::vector<double> cubes(M + 1);
  for (std::size_t m = 0; m <= M; ++m) cubes[m] = spec.coeffs[m] * spec.coeffs[m] * spec.coeffs[m];

  FlatnessReport out;
  out.grid.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  out.target = candidate_mu2 / 4.0;
  out.M = M;
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    CompensatedSum acc;
    acc.add(cubes[0]);
    for (std::size_t m = 1; m <= M; ++m) {
      if (cubes[m] == 0.0) continue;
      acc.add(2.0 * cubes[m] * std::cos(kPi * static_cast<double>(m) * x));
    }
    out.values[i] = acc.value();
  });
  for (double v : out.values) out.max_deviation = std::max(out.max_deviation, std::abs(v - out.target));
  const double c = decay_constant(f);
  // 2 * sum_{odd m > M} (C/m)^3
  out.tail_bound = 2.0 * c * c * c * odd_power_tail((M + 1) / 2 + 1, 3.0);
  return out;
}

}  // namespace autoconv
