#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace autoconv {

/// A real even trigonometric polynomial on [-1/2, 1/2],
///
///   f(x) = 1 + 2 * sum_{k=1..T} f_k cos(2 pi k x),
///
/// so that f^(0) = 1 (unit mass) and f^(k) = f^(-k) = f_k. Indices past the
/// degree read as zero.
class FourierCoefficients {
 public:
  /// The constant function f = 1.
  FourierCoefficients() = default;

  /// Throws NonFiniteCoefficient naming the first bad entry (1-based).
  explicit FourierCoefficients(std::vector<double> values);

  std::size_t degree() const noexcept { return values_.size(); }

  /// f^(k) for k >= 0.
  double operator[](std::size_t k) const noexcept {
    if (k == 0) return 1.0;
    return k <= values_.size() ? values_[k - 1] : 0.0;
  }

  /// f_1 .. f_T.
  std::span<const double> values() const noexcept { return values_; }

  /// f(x) for |x| <= 1/2 and 0 outside, i.e. the extension F on [-1, 1].
  double evaluate(double x) const;

  /// sum_{|k| <= T} |f^(k)|.
  double abs_sum() const;

 private:
  std::vector<double> values_;
};

FourierCoefficients build_coefficients(std::vector<double> values);

/// The truncated objective 1/2 + sum f_m^4 + (16/pi^4) sum_{m<=R} L_m^4.
struct ObjectiveBreakdown {
  std::size_t R = 0;
  double even_sum = 0.0;
  double odd_sum = 0.0;
  double total = 0.0;
};

/// Weights of the odd-frequency channels,
///
///   L_m = head/(2m-1) + sum_k w(m, k) c_k,  w(m, k) = 2(2m-1)(-1)^k / ((2m-1)^2 - 4k^2).
///
/// head is 1 for a unit-mass f and 2 for the dual g. The T x R weight table is
/// materialized only while T * R stays below table_cap; otherwise rows are
/// generated on the fly. Both paths produce bit-identical channels.
class OddChannelOperator {
 public:
  static constexpr std::size_t kDefaultTableCap = 200'000'000;

  OddChannelOperator(std::size_t degree, std::size_t channels,
                     std::size_t table_cap = kDefaultTableCap);

  static double weight(std::size_t m, std::size_t k) noexcept;

  std::size_t degree() const noexcept { return degree_; }
  std::size_t channels() const noexcept { return channels_; }
  bool materialized() const noexcept { return !rows_.empty(); }

  /// L_m for a single channel m >= 1.
  double channel(std::span<const double> coeffs, std::size_t m, double head = 1.0) const;

  /// L_m together with head/(2m-1) + sum_k |w(m,k) c_k|, the magnitude that
  /// bounds its rounding error.
  std::pair<double, double> channel_with_magnitude(std::span<const double> coeffs,
                                                   std::size_t m, double head = 1.0) const;

  /// L_1 .. L_R.
  std::vector<double> apply(std::span<const double> coeffs, double head = 1.0) const;

  /// sum_m v_m w(m, j) for j = 1 .. T.
  std::vector<double> adjoint(std::span<const double> v) const;

 private:
  std::size_t degree_;
  std::size_t channels_;
  std::vector<double> rows_;     // channels x degree
  std::vector<double> columns_;  // degree x channels
};

/// L_m(f) = 1/(2m-1) + 2 sum_k (2m-1) f_k (-1)^k / ((2m-1)^2 - 4k^2). m >= 1.
double odd_channel(const FourierCoefficients& f, std::size_t m);

/// Objective and gradient sharing one OddChannelOperator.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(std::size_t degree, std::size_t R,
                     std::size_t table_cap = OddChannelOperator::kDefaultTableCap);

  std::size_t degree() const noexcept { return op_.degree(); }
  std::size_t R() const noexcept { return op_.channels(); }

  /// Throws Overflow when the total is not finite.
  ObjectiveBreakdown value(std::span<const double> coeffs) const;
  ObjectiveBreakdown value_and_gradient(std::span<const double> coeffs,
                                        std::span<double> gradient) const;

 private:
  OddChannelOperator op_;
};

ObjectiveBreakdown objective(const FourierCoefficients& f, std::size_t R);

/// d objective / d f_j = 4 f_j^3 + (128/pi^4)(-1)^j sum_m L_m^3 (2m-1)/((2m-1)^2-4j^2).
std::vector<double> gradient(const FourierCoefficients& f, std::size_t R);

/// C = (2/pi) sum_{|k|<=T} |f^(k)|, so |F^(m)| <= C/|m| for odd |m| >= 4T.
double decay_constant(const FourierCoefficients& f);

/// Upper bound on sum_{j >= first} (2j-1)^{-p} for p > 1 and first >= 2.
double odd_power_tail(std::size_t first, double p);

/// Bound on ||f*f||^2 - objective(f, R).total, i.e. (8/3) C^4 (2R-1)^{-3}.
/// Requires R >= 2T.
double objective_tail_bound(const FourierCoefficients& f, std::size_t R);

/// Coefficients F^(m) = (1/2) int_{-1}^{1} e^{-pi i m x} F(x) dx of the
/// period-2 extension, for |m| <= M.
struct PeriodTwoSpectrum {
  std::size_t M = 0;
  std::vector<double> coeffs;  // m = 0 .. M
  /// Bound on 8 sum_{|m| > M} |F^(m)|^4; infinite when M < 4T.
  double l4_tail_bound = 0.0;

  double operator()(long long m) const;
};

PeriodTwoSpectrum period2_spectrum(const FourierCoefficients& f, std::size_t M);

/// Exact autoconvolution (f*f)(x), supported on [-1, 1].
///
/// For 0 <= x <= 1,
///   (f*f)(x) = (1 - x) (1 + 2 sum f_k^2 cos 2 pi k x) + 4 sum a_k b_k sin 2 pi k x,
/// where a_k = (-1)^k f_k and b_k = (1/2pi) sum_{j != k, |j| <= T} a_j / (j - k).
class Autoconvolution {
 public:
  explicit Autoconvolution(const FourierCoefficients& f);

  double operator()(double x) const;

 private:
  std::vector<double> squares_;
  std::vector<double> sines_;
};

std::vector<double> autoconvolution_curve(const FourierCoefficients& f,
                                          std::span<const double> grid);

/// Values together with a single bound on the discarded remainder.
struct TruncatedSeries {
  std::vector<double> values;
  double tail_bound = 0.0;
};

/// (f*f)(x) = sum_{|m|<=M} 2 F^(m)^2 e^{pi i m x}; the spectral route, slow
/// to converge but independent of the closed form. Requires M >= 4T.
TruncatedSeries autoconvolution_curve_spectral(const FourierCoefficients& f,
                                               std::span<const double> grid, std::size_t M);

struct FlatnessReport {
  std::vector<double> grid;
  std::vector<double> values;
  double target = 0.0;
  double max_deviation = 0.0;
  std::size_t M = 0;
  double tail_bound = 0.0;
};

/// Samples the period-2 threefold convolution F*F*F = sum F^(m)^3 e^{pi i m x}
/// (each convolution normalized by the period length) and compares it against
/// candidate_mu2 / 4. M = 0 picks max(2^17, 64 T).
FlatnessReport threefold_flatness(const FourierCoefficients& f, double candidate_mu2,
                                  std::span<const double> grid, std::size_t M = 0);

}  // namespace autoconv
