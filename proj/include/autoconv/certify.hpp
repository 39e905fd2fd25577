#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "autoconv/spectral.hpp"
#include "autoconv/summation.hpp"

namespace autoconv {

enum class BoundKind { upper, lower };

std::string to_string(BoundKind kind);

/// A one-sided bound on mu_2^2 with its truncation and rounding budgets.
///
/// Upper: value = main_sum + tail_budget, rounded up.
/// Lower: value = 1/2 + 1/(2 S^3), rounded down, where S already contains
///        tail_budget.
struct BoundCertificate {
  BoundKind kind = BoundKind::upper;
  double value = 0.0;
  std::size_t N = 0;
  double main_sum = 0.0;
  double analytic_tail = 0.0;
  double rounding_budget = 0.0;
  double tail_budget = 0.0;  // analytic_tail + rounding_budget
  std::string inputs_digest;
  /// alpha for lower bounds, the decay constant C for upper bounds.
  double parameter = 0.0;
};

/// Stable FNV-1a digest of the degree and the coefficient bit patterns.
std::string coefficient_digest(const FourierCoefficients& f);

/// sum |f_k|, sum |f_k|^3 and sum k^2 |f_k|^3 over k = 1..T; they drive the
/// decay constants of both certificates.
struct CoefficientStatistics {
  double abs_sum = 0.0;
  double cube_sum = 0.0;
  double weighted_cube_sum = 0.0;
};

CoefficientStatistics coefficient_statistics(const FourierCoefficients& f);

/// ||f*f||^2 <= 1/2 + sum f_m^4 + (16/pi^4) sum_{m<=N} L_m^4 + (8/3) C^4 (2N-1)^{-3},
/// with C = (2/pi) sum_{|k|<=T} |f^(k)|. Requires N >= 2T.
BoundCertificate upper_bound(const FourierCoefficients& f, std::size_t N,
                             numeric::Accumulation accumulation = numeric::Accumulation::compensated);

/// Spectrum of the dual function G built from g^(0) = 2,
/// g^(k) = 2/(1 - 2 alpha) f_k^3.
struct DualSpectrum {
  double alpha = 0.0;
  std::size_t N = 0;
  std::vector<double> ghat;  // g^(1) .. g^(T)
  /// sum over 0 < |m| <= 2N of |G^(m)|^{4/3}.
  double S_main = 0.0;
  /// Bound on the same sum over odd |m| > 2N.
  double S_tail = 0.0;
  /// Bound on the floating-point error of S_main.
  double S_rounding = 0.0;
  double S = 0.0;  // S_main + S_tail + S_rounding
  /// |1 + sum (-1)^k g^(k)|, the leading odd-coefficient residual.
  double leading_residual = 0.0;
  /// sum k^2 |g^(k)|.
  double curvature_sum = 0.0;

  /// G^(m) for any integer m, computed directly.
  double coefficient(long long m) const;

  /// (2/(pi |m|)) (leading_residual + 5 curvature_sum / m^2), the per-term
  /// bound used by S_tail; valid for odd |m| >= 5T.
  double tail_term_bound(long long m) const;
};

/// Precomputes the alpha-independent channel sums sum_k w(m,k) f_k^3 so that
/// each dual spectrum costs O(N).
class DualKernel {
 public:
  DualKernel(const FourierCoefficients& f, std::size_t N,
             numeric::Accumulation accumulation = numeric::Accumulation::compensated);

  /// Throws InvalidArgument unless 1/2 < alpha < 1.
  DualSpectrum spectrum(double alpha) const;
  BoundCertificate lower_bound(double alpha) const;

  std::size_t N() const noexcept { return N_; }

 private:
  FourierCoefficients f_;
  std::size_t N_;
  numeric::Accumulation accumulation_;
  std::string digest_;
  std::vector<double> cubes_;      // f_k^3
  std::vector<double> channels_;   // sum_k w(j,k) f_k^3, j = 1..N
  std::vector<double> magnitude_;  // sum_k |w(j,k) f_k^3|
};

/// Requires 1/2 < alpha < 1 and N >= 15 T.
DualSpectrum dual_spectrum(const FourierCoefficients& f, double alpha, std::size_t N);

/// mu_2^2 >= 1/2 + 1/(2 S^3). Holds for every unit-mass f whatever the
/// quality of the f used to build the dual.
BoundCertificate lower_bound(const FourierCoefficients& f, double alpha, std::size_t N,
                             numeric::Accumulation accumulation = numeric::Accumulation::compensated);

struct AlphaSearch {
  double alpha = 0.0;
  BoundCertificate certificate;
};

inline constexpr std::pair<double, double> kDefaultAlphaInterval{0.52, 0.65};

/// Golden-section maximization of the lower bound over alpha (tolerance 1e-6);
/// the endpoints are always candidates.
AlphaSearch optimize_alpha(const FourierCoefficients& f, std::size_t N,
                           std::pair<double, double> interval = kDefaultAlphaInterval,
                           numeric::Accumulation accumulation = numeric::Accumulation::compensated);

/// upper.value - lower.value; throws Error if the pair is inverted.
double sandwich_width(const BoundCertificate& lower, const BoundCertificate& upper);

}  // namespace autoconv
