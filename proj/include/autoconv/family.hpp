#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace autoconv {

/// Member f_c(x) = alpha_c / (1/4 - x^2)^c of the arcsine-type family; c = 1/2
/// is the arcsine density and c = 0 the constant function.
struct FamilyParams {
  double c = 0.0;
  double alpha_c = 1.0;  // Gamma(2-2c) / Gamma(1-c)^2
  double nu = 0.5;       // Bessel order 1/2 - c
  std::size_t K = 0;     // series truncation
};

inline constexpr std::size_t kDefaultFamilyTerms = 100'000;
/// Exclusive upper end of the accepted c range; the tail envelope diverges at 3/4.
inline constexpr double kFamilyMaxC = 0.75;

/// Throws InvalidArgument unless 0 <= c < 3/4 and K >= 10.
FamilyParams family_params(double c, std::size_t K = kDefaultFamilyTerms);

/// f_c(x) for |x| < 1/2.
double family_density(double c, double x);

/// F_c^(k) = (pi^c Gamma(2-2c) / (2 Gamma(1-c))) J_{1/2-c}(pi k/2) / k^{1/2-c}, k >= 1.
double family_coefficient(double c, std::size_t k);

struct FamilyNorm {
  double value = 0.0;  // 1/2 + prefactor * sum_{k<=K} J^4(pi k/2) / k^{2-4c}
  double tail = 0.0;   // bound on the discarded k > K terms
};

/// ||f_c * f_c||_2^2 truncated at K terms, with a tail bound from
/// |J_nu(z)| <= sqrt(2/(pi z)) (|nu| <= 1/2). value + tail bounds the full
/// series from above.
FamilyNorm family_norm(double c, std::size_t K = kDefaultFamilyTerms);

/// Smallest K whose tail bound is at most target.
std::size_t family_terms_for_tail(double c, double target);

struct FamilyOptimum {
  double c = 0.0;
  double value = 0.0;
  double tail = 0.0;
  int evaluations = 0;
};

/// Minimizes family_norm(c, K).value over [lo, hi] to a c-tolerance of 1e-4.
/// A coarse 21-point scan brackets the minimum before golden-section
/// refinement, so a non-unimodal profile degrades to a grid search.
FamilyOptimum optimize_c(std::pair<double, double> interval, std::size_t K = kDefaultFamilyTerms);

struct FamilySample {
  double c = 0.0;
  double value = 0.0;
  double tail = 0.0;
};

/// steps evenly spaced members from c_min to c_max inclusive (one member,
/// c_min, when steps == 1).
std::vector<FamilySample> family_scan(double c_min, double c_max, std::size_t steps,
                                      std::size_t K = kDefaultFamilyTerms);

}  // namespace autoconv
