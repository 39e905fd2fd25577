#include "autoconv/family.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "autoconv/bessel.hpp"
#include "autoconv/error.hpp"
#include "autoconv/golden_section.hpp"
#include "autoconv/summation.hpp"

namespace autoconv {
namespace {

constexpr double kPi = std::numbers::pi;

void check_c(double c) {
  if (!(c >= 0.0 && c < kFamilyMaxC)) {
    throw InvalidArgument("family exponent c must lie in [0, 0.75), got " + std::to_string(c));
  }
}

// pi^{4c} Gamma(2-2c)^4 / Gamma(1-c)^4
double norm_prefactor(double c) {
  const double ratio = std::tgamma(2.0 - 2.0 * c) / std::tgamma(1.0 - c);
  const double r2 = ratio * ratio;
  return std::pow(kPi, 4.0 * c) * r2 * r2;
}

double tail_bound(double c, std::size_t K) {
  // J^4(pi k/2) <= (4/(pi^2 k))^2, so terms are at most (16/pi^4) k^{4c-4}.
  const double p = 4.0 - 4.0 * c;
  return norm_prefactor(c) * 16.0 / std::pow(kPi, 4) * std::pow(static_cast<double>(K), 1.0 - p) /
         (p - 1.0);
}

}  // namespace

FamilyParams family_params(double c, std::size_t K) {
  check_c(c);
  if (K < 10) throw InvalidArgument("family series needs K >= 10");
  FamilyParams p;
  p.c = c;
  const double g = std::tgamma(1.0 - c);
  p.alpha_c = std::tgamma(2.0 - 2.0 * c) / (g * g);
  p.nu = 0.5 - c;
  p.K = K;
  return p;
}

double family_density(double c, double x) {
  const FamilyParams p = family_params(c, 10);
  if (!(std::abs(x) < 0.5)) throw InvalidArgument("family density is defined on (-1/2, 1/2)");
  return p.alpha_c / std::pow(0.25 - x * x, c);
}

double family_coefficient(double c, std::size_t k) {
  check_c(c);
  if (k == 0) return 0.5;
  const double kk = static_cast<double>(k);
  const double lead = std::pow(kPi, c) * std::tgamma(2.0 - 2.0 * c) / (2.0 * std::tgamma(1.0 - c));
  return lead * bessel_j(0.5 - c, 0.5 * kPi * kk) / std::pow(kk, 0.5 - c);
}

FamilyNorm family_norm(double c, std::size_t K) {
  const FamilyParams p = family_params(c, K);
  const double exponent = 2.0 - 4.0 * c;
  const double series = numeric::compensated_sum(K, [&](std::size_t i) {
    const double k = static_cast<double>(i + 1);
    const double j = bessel_j(p.nu, 0.5 * kPi * k);
    const double j2 = j * j;
    return j2 * j2 / std::pow(k, exponent);
  });
  return {0.5 + norm_prefactor(c) * series, tail_bound(c, K)};
}

std::size_t family_terms_for_tail(double c, double target) {
  check_c(c);
  if (!(target > 0.0)) throw InvalidArgument("tail target must be positive");
  const double p = 4.0 - 4.0 * c;
  const double scale = norm_prefactor(c) * 16.0 / std::pow(kPi, 4) / (p - 1.0);
  auto K = static_cast<std::size_t>(std::ceil(std::pow(scale / target, 1.0 / (p - 1.0))));
  K = std::max<std::size_t>(K, 10);
  while (tail_bound(c, K) > target) ++K;
  return K;
}

FamilyOptimum optimize_c(std::pair<double, double> interval, std::size_t K) {
  const auto [lo, hi] = interval;
  check_c(lo);
  check_c(hi);
  if (!(lo < hi)) throw InvalidArgument("optimize_c needs lo < hi");
  constexpr int kScan = 21;
  FamilyOptimum best;
  std::vector<double> grid(kScan);
  std::vector<double> values(kScan);
  std::size_t arg = 0;
  for (int i = 0; i < kScan; ++i) {
    grid[i] = lo + (hi - lo) * i / (kScan - 1);
    values[i] = family_norm(grid[i], K).value;
    if (values[i] < values[arg]) arg = static_cast<std::size_t>(i);
  }
  const double a = grid[arg == 0 ? 0 : arg - 1];
  const double b = grid[arg + 1 == kScan ? kScan - 1 : arg + 1];
  const numeric::ScalarMinimum refined = numeric::golden_section_minimize(
      [&](double c) { return family_norm(c, K).value; }, a, b, 1e-4);
  best.c = refined.x;
  best.value = refined.value;
  if (values[arg] < best.value) {
    best.c = grid[arg];
    best.value = values[arg];
  }
  best.tail = tail_bound(best.c, K);
  best.evaluations = kScan + refined.evaluations;
  return best;
}

std::vector<FamilySample> family_scan(double c_min, double c_max, std::size_t steps, std::size_t K) {
  check_c(c_min);
  check_c(c_max);
  if (steps == 0) throw InvalidArgument("family scan needs at least one step");
  if (steps > 1 && !(c_min < c_max)) throw InvalidArgument("family scan needs c_min < c_max");
  std::vector<FamilySample> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double c =
        steps == 1 ? c_min : c_min + (c_max - c_min) * static_cast<double>(i) / (steps - 1.0);
    const FamilyNorm n = family_norm(c, K);
    out.push_back({c, n.value, n.tail});
  }
  return out;
}

}  // namespace autoconv
