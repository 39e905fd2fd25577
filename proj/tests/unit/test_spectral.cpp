#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "../oracles.hpp"
#include "autoconv/error.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/spectral.hpp"

using namespace autoconv;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_coeffs(std::uint64_t seed, std::size_t T, double scale) {
  return oracle::uniform(seed, T, -scale, scale);
}

/// F^(m) = (1/2) int_{-1/2}^{1/2} f(x) cos(pi m x) dx.
double spectrum_by_quadrature(const std::vector<double>& c, long long m) {
  return 0.5 * oracle::integrate(
                   [&](double x) { return oracle::density(c, x) * std::cos(kPi * m * x); }, -0.5, 0.5);
}

}  // namespace

TEST(FourierCoefficients, DefaultIsBox) {
  const FourierCoefficients f;
  EXPECT_EQ(f.degree(), 0u);
  EXPECT_EQ(f[0], 1.0);
  EXPECT_EQ(f.evaluate(0.2), 1.0);
  EXPECT_EQ(f.evaluate(0.7), 0.0);
}

TEST(FourierCoefficients, NonFiniteNamesIndex) {
  try {
    FourierCoefficients f({0.1, 0.2, std::numeric_limits<double>::quiet_NaN()});
    FAIL() << "expected NonFiniteCoefficient";
  } catch (const NonFiniteCoefficient& e) {
    EXPECT_EQ(e.index(), 3u);
  }
}

TEST(FourierCoefficients, EvaluateMatchesCosineSeries) {
  const auto c = random_coeffs(3, 7, 0.4);
  const FourierCoefficients f(c);
  for (double x : {-0.5, -0.31, 0.0, 0.12, 0.5}) EXPECT_NEAR(f.evaluate(x), oracle::density(c, x), 1e-14);
}

TEST(OddChannel, WeightFormula) {
  EXPECT_DOUBLE_EQ(OddChannelOperator::weight(1, 1), 2.0 * 1 * -1 / (1.0 - 4.0));
  EXPECT_DOUBLE_EQ(OddChannelOperator::weight(3, 2), 2.0 * 5 / (25.0 - 16.0));
}

TEST(OddChannel, MatchesFourierCoefficientOfExtension) {
  // F^(2m-1) = (-1)^{m-1} L_m / pi.
  const auto c = random_coeffs(5, 6, 0.3);
  const FourierCoefficients f(c);
  for (std::size_t m : {1u, 2u, 5u, 13u, 40u}) {
    const double expected = spectrum_by_quadrature(c, 2 * static_cast<long long>(m) - 1);
    const double sign = (m % 2) ? 1.0 : -1.0;
    EXPECT_NEAR(sign * odd_channel(f, m) / kPi, expected, 1e-13) << "m=" << m;
  }
}

TEST(OddChannel, TableAndStreamingAgreeBitwise) {
  const auto c = random_coeffs(8, 25, 0.3);
  const OddChannelOperator table(25, 300);
  const OddChannelOperator stream(25, 300, 0);
  ASSERT_TRUE(table.materialized());
  ASSERT_FALSE(stream.materialized());
  EXPECT_EQ(table.apply(c), stream.apply(c));
  const std::vector<double> v = random_coeffs(9, 300, 1.0);
  EXPECT_EQ(table.adjoint(v), stream.adjoint(v));
}

TEST(OddChannel, AdjointIsTranspose) {
  const auto c = random_coeffs(11, 9, 1.0);
  const auto v = random_coeffs(12, 50, 1.0);
  const OddChannelOperator op(9, 50);
  const auto Ac = op.apply(c, 0.0);
  const auto Atv = op.adjoint(v);
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) lhs += v[i] * Ac[i];
  for (std::size_t i = 0; i < c.size(); ++i) rhs += c[i] * Atv[i];
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs) + 1e-14);
}

TEST(Objective, BoxClosedForm) {
  const FourierCoefficients box;
  const std::size_t R = 1'000'000;
  const ObjectiveBreakdown b = objective(box, R);
  EXPECT_EQ(b.even_sum, 0.0);
  EXPECT_NEAR(b.total + objective_tail_bound(box, R), 2.0 / 3.0, 1e-12);
  EXPECT_LE(b.total, 2.0 / 3.0 + 1e-15);
}

TEST(Objective, MatchesTermwiseDefinition) {
  const auto c = random_coeffs(21, 12, 0.3);
  const ObjectiveBreakdown b = objective(FourierCoefficients(c), 500);
  EXPECT_NEAR(b.total, static_cast<double>(oracle::truncated_objective(c, 500)), 1e-15);
}

TEST(Objective, MatchesQuadratureOfAutoconvolution) {
  const auto c = random_coeffs(22, 6, 0.4);
  const FourierCoefficients f(c);
  const std::size_t R = 20'000;
  const double total = objective(f, R).total;
  const double tail = objective_tail_bound(f, R);
  const double ref = oracle::autoconvolution_l2(c);
  EXPECT_LE(total, ref + 1e-12);
  EXPECT_LE(ref, total + tail + 1e-12);
  EXPECT_NEAR(total, ref, 1e-9);
}

TEST(Objective, MonotoneInR) {
  const FourierCoefficients f(random_coeffs(23, 10, 0.3));
  double prev = 0.0;
  for (std::size_t R : {1u, 10u, 100u, 1000u}) {
    const double v = objective(f, R).total;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Objective, RejectsZeroR) {
  EXPECT_THROW(objective(FourierCoefficients(), 0), InvalidArgument);
}

TEST(Objective, OverflowIsReported) {
  EXPECT_THROW(objective(FourierCoefficients({1e200}), 10), Overflow);
}

TEST(Objective, BitIdenticalAcrossThreadCounts) {
  const FourierCoefficients f(random_coeffs(24, 40, 0.2));
  set_thread_count(1);
  const double one = objective(f, 20'000).total;
  const auto g1 = gradient(f, 20'000);
  set_thread_count(4);
  const double four = objective(f, 20'000).total;
  const auto g4 = gradient(f, 20'000);
  set_thread_count(0);
  EXPECT_EQ(one, four);
  EXPECT_EQ(g1, g4);
}

TEST(Gradient, MatchesCentralDifferences) {
  const auto c = random_coeffs(25, 15, 0.4);
  const auto g = gradient(FourierCoefficients(c), 2000);
  const double h = 1e-5;
  for (std::size_t j = 0; j < c.size(); ++j) {
    auto plus = c;
    auto minus = c;
    plus[j] += h;
    minus[j] -= h;
    const double fd = (objective(FourierCoefficients(plus), 2000).total -
                       objective(FourierCoefficients(minus), 2000).total) /
                      (2 * h);
    EXPECT_NEAR(g[j], fd, 1e-8) << "j=" << j + 1;
  }
}

TEST(Gradient, EvaluatorSharesValue) {
  const auto c = random_coeffs(26, 8, 0.3);
  const ObjectiveEvaluator eval(8, 300);
  std::vector<double> g(8);
  const ObjectiveBreakdown a = eval.value(c);
  const ObjectiveBreakdown b = eval.value_and_gradient(c, g);
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(g, gradient(FourierCoefficients(c), 300));
}

TEST(TailBound, OddPowerTailDominatesSum) {
  for (double p : {4.0 / 3.0, 2.0, 4.0}) {
    for (std::size_t first : {2u, 7u, 100u}) {
      long double sum = 0.0L;
      for (std::size_t j = first; j < first + 2'000'000; ++j) sum += std::pow(2.0L * j - 1.0L, -p);
      EXPECT_GE(odd_power_tail(first, p), static_cast<double>(sum));
    }
  }
}

TEST(TailBound, RequiresRAtLeastTwiceDegree) {
  EXPECT_THROW(objective_tail_bound(FourierCoefficients(std::vector<double>(10, 0.1)), 19), InvalidArgument);
}

TEST(TailBound, DecayConstantBoundsOddCoefficients) {
  const auto c = random_coeffs(27, 5, 0.4);
  const FourierCoefficients f(c);
  const double C = decay_constant(f);
  for (long long m = 21; m < 200; m += 2) {
    EXPECT_LE(std::abs(spectrum_by_quadrature(c, m)), C / m + 1e-14);
  }
}

TEST(PeriodTwo, SpectrumMatchesQuadrature) {
  const auto c = random_coeffs(31, 5, 0.4);
  const PeriodTwoSpectrum s = period2_spectrum(FourierCoefficients(c), 60);
  EXPECT_EQ(s(0), 0.5);
  for (long long m : {1LL, 2LL, 3LL, 4LL, 7LL, 10LL, 33LL, -3LL, -10LL}) {
    EXPECT_NEAR(s(m), spectrum_by_quadrature(c, m), 1e-13) << "m=" << m;
  }
  EXPECT_TRUE(std::isfinite(s.l4_tail_bound));
}

TEST(PeriodTwo, TailInfiniteBelowFourT) {
  const PeriodTwoSpectrum s = period2_spectrum(FourierCoefficients(std::vector<double>(5, 0.1)), 10);
  EXPECT_TRUE(std::isinf(s.l4_tail_bound));
}

TEST(Autoconvolution, BoxIsTent) {
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(-1.0 + 2.0 * i / 999.0);
  const auto v = autoconvolution_curve(FourierCoefficients(), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(v[i], 1.0 - std::abs(grid[i]), 1e-14);
}

TEST(Autoconvolution, MatchesDirectQuadrature) {
  const auto c = random_coeffs(41, 9, 0.4);
  const Autoconvolution ff{FourierCoefficients(c)};
  for (double x : {-0.93, -0.5, -0.12, 0.0, 0.33, 0.5, 0.77, 1.0}) {
    EXPECT_NEAR(ff(x), oracle::autoconvolution(c, x), 1e-12) << "x=" << x;
  }
}

TEST(Autoconvolution, IntegratesToOne) {
  const auto c = random_coeffs(42, 9, 0.4);
  const Autoconvolution ff{FourierCoefficients(c)};
  const double mass = oracle::integrate([&](double x) { return ff(x); }, -1.0, 0.0) +
                      oracle::integrate([&](double x) { return ff(x); }, 0.0, 1.0);
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Autoconvolution, SpectralRouteAgreesWithinItsTail) {
  const auto c = random_coeffs(43, 4, 0.3);
  const FourierCoefficients f(c);
  const std::vector<double> grid{-0.7, -0.2, 0.0, 0.4, 0.9};
  const auto exact = autoconvolution_curve(f, grid);
  const TruncatedSeries approx = autoconvolution_curve_spectral(f, grid, 16000);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LE(std::abs(exact[i] - approx.values[i]), approx.tail_bound);
  }
  EXPECT_LT(approx.tail_bound, 1e-3);
}

TEST(Autoconvolution, GridOutsideSupportRejected) {
  const std::vector<double> grid{1.5};
  EXPECT_THROW(autoconvolution_curve(FourierCoefficients(), grid), InvalidArgument);
}

TEST(Flatness, BoxThreefoldConvolution) {
  // For the box, F*F*F(0) = 3/16 against the target 1/6.
  const std::vector<double> grid{0.0};
  const FlatnessReport r = threefold_flatness(FourierCoefficients(), 2.0 / 3.0, grid);
  EXPECT_NEAR(r.values[0], 3.0 / 16.0, 1e-6);
  EXPECT_NEAR(r.target, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.max_deviation, 3.0 / 16.0 - 1.0 / 6.0, 1e-6);
}

TEST(Flatness, RejectsEdgeOfSupport) {
  const std::vector<double> grid{0.5};
  EXPECT_THROW(threefold_flatness(FourierCoefficients(), 0.6, grid), InvalidArgument);
}
