#include "autoconv/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "autoconv/double_double.hpp"
#include "autoconv/error.hpp"

namespace autoconv {

using numeric::DoubleDouble;

namespace {

constexpr double kPi = std::numbers::pi;

void check_domain(double nu, double z) {
  if (!(nu > -0.5)) throw InvalidArgument("Bessel order must exceed -1/2, got " + std::to_string(nu));
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw InvalidArgument("Bessel argument must be finite and >= 0");
  }
}

double at_origin(double nu) {
  if (nu == 0.0) return 1.0;
  return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// log of 1/(1 + e^{-q}) without overflow.
double log_logistic(double q) {
  return q >= 0.0 ? -std::log1p(std::exp(-q)) : q - std::log1p(std::exp(q));
}

// Tanh-sinh node on [0, 1]: s = 1/(1 + e^{-q}), u = 1 - s, q = pi sinh t.
// Returns log(|integrand| * weight) and the cosine factor.
struct Node {
  double log_magnitude;
  double oscillation;
};

Node node(double nu, double z, double t) {
  const double q = kPi * std::sinh(t);
  const double log_s = log_logistic(q);
  const double log_u = log_logistic(-q);
  const double s = std::exp(log_s);
  const double u = std::exp(log_u);
  // 1 - s^2 = u (2 - u); ds/dt = pi cosh t * s * u.
  const double log_weight = std::log(kPi * std::cosh(t)) + log_s + log_u;
  const double log_kernel = (nu - 0.5) * (log_u + std::log(2.0 - u));
  return {log_weight + log_kernel, std::cos(z * s)};
}

}  // namespace

double bessel_j_series(double nu, double z) {
  check_domain(nu, z);
  if (z == 0.0) return at_origin(nu);
  const double half = 0.5 * z;
  const DoubleDouble q = numeric::two_prod(half, half);
  DoubleDouble term(1.0);
  DoubleDouble sum(1.0);
  for (int j = 1; j < 1000; ++j) {
    const DoubleDouble denom = DoubleDouble(static_cast<double>(j)) * numeric::two_sum(nu, j);
    term = -(term * q) / denom;
    sum += term;
    if (static_cast<double>(j) > half &&
        std::abs(term.hi) <= 1e-34 * std::abs(sum.hi)) {
      break;
    }
  }
  return std::pow(half, nu) / std::tgamma(nu + 1.0) * sum.to_double();
}

double bessel_j_integral(double nu, double z) {
  check_domain(nu, z);
  if (z == 0.0) return at_origin(nu);
  // Truncate the t-range where the double-exponentially decaying weight is
  // far below the integral's scale on both sides.
  constexpr double kCutoff = -80.0;
  double right = 1.0;
  while (right < 16.0 && node(nu, z, right).log_magnitude > kCutoff) right += 0.25;
  double left = 1.0;
  while (left < 16.0 && node(nu, z, -left).log_magnitude > kCutoff) left += 0.25;

  auto sample = [&](double t) {
    const Node n = node(nu, z, t);
    return n.log_magnitude < -745.0 ? 0.0 : n.oscillation * std::exp(n.log_magnitude);
  };

  double h = 0.125;
  double sum = 0.0;
  double magnitude = 0.0;
  auto accumulate = [&](double t) {
    const double v = sample(t);
    sum += v;
    magnitude += std::abs(v);
  };
  accumulate(0.0);
  for (double t = h; t <= right; t += h) accumulate(t);
  for (double t = h; t <= left; t += h) accumulate(-t);
  double estimate = h * sum;
  for (int level = 0; level < 14; ++level) {
    h *= 0.5;
    for (double t = h; t <= right; t += 2.0 * h) accumulate(t);
    for (double t = h; t <= left; t += 2.0 * h) accumulate(-t);
    const double next = h * sum;
    const double change = std::abs(next - estimate);
    estimate = next;
    if (level >= 2 && change <= 1e-15 * h * magnitude) break;
  }
  // The integrand is even in s; the quadrature covered [0, 1].
  const double integral = 2.0 * estimate;
  return std::pow(0.5 * z, nu) / (std::tgamma(nu + 0.5) * std::sqrt(kPi)) * integral;
}

double bessel_j_asymptotic(double nu, double z) {
  check_domain(nu, z);
  if (z == 0.0) throw InvalidArgument("asymptotic Bessel expansion needs z > 0");
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double coeff = 1.0;  // a_k(nu) / z^k
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    coeff *= (mu - odd * odd) / (8.0 * k * z);
    const double size = std::abs(coeff);
    if (size >= previous) break;
    previous = size;
    // k = 1, 2, 3, 4, ... contribute +Q, -P, -Q, +P, ...
    switch (k % 4) {
      case 1: q += coeff; break;
      case 2: p -= coeff; break;
      case 3: q -= coeff; break;
      case 0: p += coeff; break;
    }
    if (size < 1e-18) break;
  }
  const double phase = (0.5 * nu + 0.25) * kPi;
  const double c = std::cos(z) * std::cos(phase) + std::sin(z) * std::sin(phase);
  const double s = std::sin(z) * std::cos(phase) - std::cos(z) * std::sin(phase);
  return std::sqrt(2.0 / (kPi * z)) * (p * c - q * s);
}

double bessel_j(double nu, double z) {
  check_domain(nu, z);
  if (z <= kBesselSeriesLimit) return bessel_j_series(nu, z);
  if (z <= kBesselAsymptoticStart) return bessel_j_integral(nu, z);
  return bessel_j_asymptotic(nu, z);
}

}  // namespace autoconv
