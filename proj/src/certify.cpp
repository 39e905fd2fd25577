#include "autoconv/certify.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>

#include "autoconv/error.hpp"
#include "autoconv/golden_section.hpp"
#include "autoconv/parallel.hpp"

namespace autoconv {

using numeric::Accumulation;
using numeric::CompensatedSum;
using numeric::DoubleDouble;
using numeric::DoubleDoubleSum;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Unit roundoff credited to double-double arithmetic (nominally 2^-104).
const double kDoubleDoubleUnit = std::ldexp(1.0, -100);
constexpr std::size_t kChunk = 1024;

double unit_for(Accumulation a) {
  return a == Accumulation::compensated ? kEps : kDoubleDoubleUnit;
}

double round_up(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  return x;
}

double round_down(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return x;
}

DoubleDouble exact_weight(std::size_t m, std::size_t k) {
  const double odd = 2.0 * static_cast<double>(m) - 1.0;
  const double even = 2.0 * static_cast<double>(k);
  const double numerator = (k % 2 == 0 ? 2.0 : -2.0) * odd;
  const double denominator = odd * odd - even * even;  // exact below 2^53
  return DoubleDouble(numerator) / DoubleDouble(denominator);
}

// Channel head/(2j-1) + sum_k w(j,k) c_k with its magnitude, in the chosen
// arithmetic. coeffs_dd is only read in double-double mode.
struct Channel {
  DoubleDouble value;
  double magnitude;
};

Channel channel(const OddChannelOperator& op, std::span<const double> coeffs,
                std::span<const DoubleDouble> coeffs_dd, std::size_t j, double head,
                Accumulation accumulation) {
  if (accumulation == Accumulation::compensated) {
    const auto [v, mag] = op.channel_with_magnitude(coeffs, j, head);
    return {DoubleDouble(v), mag};
  }
  DoubleDouble acc = DoubleDouble(head) / DoubleDouble(2.0 * static_cast<double>(j) - 1.0);
  CompensatedSum mag;
  mag.add(std::abs(acc.hi));
  for (std::size_t k = 1; k <= coeffs_dd.size(); ++k) {
    const DoubleDouble term = exact_weight(j, k) * coeffs_dd[k - 1];
    acc += term;
    mag.add(std::abs(term.hi));
  }
  return {acc, mag.value()};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (1/2, 1), got " + std::to_string(alpha));
  }
}

}  // namespace

std::string to_string(BoundKind kind) { return kind == BoundKind::upper ? "upper" : "lower"; }

std::string coefficient_digest(const FourierCoefficients& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(f.degree()));
  for (double v : f.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(bits);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

CoefficientStatistics coefficient_statistics(const FourierCoefficients& f) {
  CompensatedSum abs_sum;
  CompensatedSum cube_sum;
  CompensatedSum weighted;
  const auto v = f.values();
  for (std::size_t k = 1; k <= v.size(); ++k) {
    const double a = std::abs(v[k - 1]);
    abs_sum.add(a);
    cube_sum.add(a * a * a);
    weighted.add(static_cast<double>(k) * static_cast<double>(k) * a * a * a);
  }
  return {abs_sum.value(), cube_sum.value(), weighted.value()};
}

// ---------------------------------------------------------------------------
// Upper bound

BoundCertificate upper_bound(const FourierCoefficients& f, std::size_t N,
                             Accumulation accumulation) {
  const std::size_t T = f.degree();
  if (N == 0 || N < 2 * T) {
    throw InvalidArgument("upper bound requires N >= 2T (N = " + std::to_string(N) +
                          ", T = " + std::to_string(T) + ")");
  }
  const double unit = unit_for(accumulation);
  const OddChannelOperator op(T, N, 0);
  std::vector<DoubleDouble> coeffs_dd(f.values().begin(), f.values().end());

  std::vector<DoubleDouble> fourth(N);
  std::vector<double> error(N);
  const std::size_t chunks = (N + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(N, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const Channel ch = channel(op, f.values(), coeffs_dd, i + 1, 1.0, accumulation);
      const DoubleDouble sq = ch.value * ch.value;
      fourth[i] = accumulation == Accumulation::compensated
                      ? DoubleDouble(ch.value.hi * ch.value.hi * ch.value.hi * ch.value.hi)
                      : sq * sq;
      const double delta = static_cast<double>(T + 4) * unit * ch.magnitude;
      const double l = std::abs(ch.value.hi) + delta;
      error[i] = 4.0 * l * l * l * delta + 4.0 * unit * std::abs(fourth[i].hi);
    }
  });

  const double scale = 16.0 / std::pow(kPi, 4);
  double odd_sum;
  double even_sum;
  if (accumulation == Accumulation::compensated) {
    odd_sum = numeric::reduce<CompensatedSum>(N, [&](std::size_t i) { return fourth[i].hi; }).value();
    CompensatedSum even;
    for (double v : f.values()) even.add(v * v * v * v);
    even_sum = even.value();
  } else {
    odd_sum = numeric::reduce<DoubleDoubleSum>(N, [&](std::size_t i) { return fourth[i]; }).value();
    DoubleDoubleSum even;
    for (const DoubleDouble& v : coeffs_dd) {
      const DoubleDouble sq = v * v;
      even.add(sq * sq);
    }
    even_sum = even.value();
  }
  const double channel_error = numeric::compensated_sum(N, [&](std::size_t i) { return error[i]; });

  BoundCertificate cert;
  cert.kind = BoundKind::upper;
  cert.N = N;
  cert.inputs_digest = coefficient_digest(f);
  cert.parameter = decay_constant(f);
  CompensatedSum main;
  main.add(0.5);
  main.add(even_sum);
  main.add(scale * odd_sum);
  cert.main_sum = main.value();
  cert.analytic_tail = objective_tail_bound(f, N);
  const double terms = static_cast<double>(N + T + 3);
  cert.rounding_budget = round_up(scale * channel_error * (1.0 + 8.0 * kEps) +
                                      4.0 * static_cast<double>(T + 1) * unit * even_sum +
                                      terms * unit * cert.main_sum + 4.0 * kEps * cert.main_sum,
                                  2);
  cert.tail_budget = round_up(cert.analytic_tail + cert.rounding_budget);
  cert.value = round_up(cert.main_sum + cert.tail_budget, 2);
  if (!std::isfinite(cert.value)) throw Overflow("upper bound overflowed");
  return cert;
}

// ---------------------------------------------------------------------------
// Dual spectrum and lower bound

double DualSpectrum::coefficient(long long m) const {
  if (m == 0) return 0.0;
  const std::size_t a = static_cast<std::size_t>(m < 0 ? -m : m);
  if (a % 2 == 0) {
    const std::size_t k = a / 2;
    return k <= ghat.size() ? -0.5 * ghat[k - 1] : 0.0;
  }
  const std::size_t j = (a + 1) / 2;
  const OddChannelOperator op(ghat.size(), j, 0);
  const double l = op.channel(ghat, j, 2.0);
  const double sign = ((a - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * l / kPi;
}

double DualSpectrum::tail_term_bound(long long m) const {
  const double a = std::abs(static_cast<double>(m));
  return 2.0 / (kPi * a) * (leading_residual + 5.0 * curvature_sum / (a * a));
}

DualKernel::DualKernel(const FourierCoefficients& f, std::size_t N, Accumulation accumulation)
    : f_(f), N_(N), accumulation_(accumulation), digest_(coefficient_digest(f)) {
  const std::size_t T = f.degree();
  if (N == 0 || N < 15 * T) {
    throw InvalidArgument("dual spectrum requires N >= 15T (N = " + std::to_string(N) +
                          ", T = " + std::to_string(T) + ")");
  }
  cubes_.resize(T);
  std::vector<DoubleDouble> cubes_dd(T);
  for (std::size_t k = 0; k < T; ++k) {
    const double v = f.values()[k];
    cubes_[k] = v * v * v;
    cubes_dd[k] = DoubleDouble(v) * DoubleDouble(v) * DoubleDouble(v);
  }
  const OddChannelOperator op(T, N, 0);
  channels_.resize(N);
  magnitude_.resize(N);
  const std::size_t chunks = (N + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(N, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      // head 0: the constant part 2/(2j-1) is added per alpha.
      const Channel ch = channel(op, cubes_, cubes_dd, i + 1, 0.0, accumulation);
      channels_[i] = ch.value.to_double();
      magnitude_[i] = ch.magnitude;
    }
  });
}

DualSpectrum DualKernel::spectrum(double alpha) const {
  check_alpha(alpha);
  const std::size_t T = f_.degree();
  const double unit = unit_for(accumulation_);
  const double scale = 2.0 / (1.0 - 2.0 * alpha);
  const double third = 4.0 / 3.0;

  DualSpectrum out;
  out.alpha = alpha;
  out.N = N_;
  out.ghat.resize(T);
  for (std::size_t k = 0; k < T; ++k) out.ghat[k] = scale * cubes_[k];

  // Even indices m = +-2k: |G| = |g^(k)|/2.
  CompensatedSum even;
  for (double g : out.ghat) even.add(2.0 * std::pow(0.5 * std::abs(g), third));

  std::vector<double> error(N_);
  const double odd = numeric::compensated_sum(N_, [&](std::size_t i) {
    const double head = 2.0 / (2.0 * static_cast<double>(i) + 1.0);
    const double l = head + scale * channels_[i];
    const double g = std::abs(l) / kPi;
    // channel error from the kernel plus the few roundings applied here
    const double delta =
        (static_cast<double>(T + 4) * unit * std::abs(scale) * magnitude_[i] +
         4.0 * kEps * (head + std::abs(scale * channels_[i]))) /
        kPi;
    const double term = std::pow(g, third);
    error[i] = 2.0 * (third * std::cbrt(g + delta) * delta + 4.0 * kEps * term);
    return 2.0 * term;
  });
  const double odd_error = numeric::compensated_sum(N_, [&](std::size_t i) { return error[i]; });

  CompensatedSum main;
  main.add(even.value());
  main.add(odd);
  out.S_main = main.value();

  CompensatedSum residual;
  CompensatedSum magnitude;
  CompensatedSum curvature;
  residual.add(1.0);
  magnitude.add(1.0);
  for (std::size_t k = 1; k <= T; ++k) {
    const double g = out.ghat[k - 1];
    residual.add(k % 2 == 0 ? g : -g);
    magnitude.add(std::abs(g));
    curvature.add(static_cast<double>(k) * static_cast<double>(k) * std::abs(g));
  }
  const double slack = static_cast<double>(T + 4) * kEps;
  out.leading_residual = round_up(std::abs(residual.value()) + slack * magnitude.value());
  out.curvature_sum = round_up(curvature.value() * (1.0 + slack));

  const double first_tail_index = 2.0 * static_cast<double>(N_) + 1.0;
  const double per_term =
      out.leading_residual + 5.0 * out.curvature_sum / (first_tail_index * first_tail_index);
  // Both signs of m, odd |m| >= 2N+1.
  out.S_tail = round_up(2.0 * std::pow(2.0 / kPi * per_term, third) * odd_power_tail(N_ + 1, third),
                        4);
  const double terms = static_cast<double>(N_ + T + 3);
  out.S_rounding = round_up(odd_error * (1.0 + 8.0 * kEps) +
                                8.0 * static_cast<double>(T + 1) * kEps * even.value() +
                                terms * kEps * out.S_main,
                            2);
  out.S = round_up(out.S_main + out.S_tail + out.S_rounding, 2);
  return out;
}

BoundCertificate DualKernel::lower_bound(double alpha) const {
  const DualSpectrum spec = spectrum(alpha);
  BoundCertificate cert;
  cert.kind = BoundKind::lower;
  cert.N = N_;
  cert.parameter = alpha;
  cert.inputs_digest = digest_;
  cert.main_sum = spec.S_main;
  cert.analytic_tail = spec.S_tail;
  cert.rounding_budget = spec.S_rounding;
  cert.tail_budget = round_up(spec.S_tail + spec.S_rounding);
  const double gap = round_down(1.0 / (2.0 * spec.S * spec.S * spec.S), 4);
  cert.value = round_down(0.5 + gap, 2);
  return cert;
}

DualSpectrum dual_spectrum(const FourierCoefficients& f, double alpha, std::size_t N) {
  check_alpha(alpha);
  return DualKernel(f, N).spectrum(alpha);
}

BoundCertificate lower_bound(const FourierCoefficients& f, double alpha, std::size_t N,
                             Accumulation accumulation) {
  check_alpha(alpha);
  return DualKernel(f, N, accumulation).lower_bound(alpha);
}

AlphaSearch optimize_alpha(const FourierCoefficients& f, std::size_t N,
                           std::pair<double, double> interval, Accumulation accumulation) {
  const auto [lo, hi] = interval;
  if (!(0.5 < lo && lo < hi && hi < 1.0)) {
    throw InvalidArgument("alpha interval must satisfy 1/2 < lo < hi < 1");
  }
  const DualKernel kernel(f, N, accumulation);
  const numeric::ScalarMinimum best = numeric::golden_section_minimize(
      [&](double alpha) { return -kernel.lower_bound(alpha).value; }, lo, hi, 1e-6);
  return {best.x, kernel.lower_bound(best.x)};
}

double sandwich_width(const BoundCertificate& lower, const BoundCertificate& upper) {
  if (lower.kind != BoundKind::lower || upper.kind != BoundKind::upper) {
    throw InvalidArgument("sandwich_width expects (lower, upper) certificates");
  }
  if (lower.value > upper.value) {
    throw Error("certificate sandwich violated: lower " + std::to_string(lower.value) +
                " > upper " + std::to_string(upper.value));
  }
  return upper.value - lower.value;
}

}  // namespace autoconv
