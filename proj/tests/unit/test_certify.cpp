#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "../oracles.hpp"
#include "autoconv/certify.hpp"
#include "autoconv/error.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/solver.hpp"

using namespace autoconv;

namespace {

constexpr double kPi = std::numbers::pi;

FourierCoefficients solved(std::size_t T) {
  SolverConfig c;
  c.T = T;
  c.R = 4000;
  return solve(c).coeffs;
}

/// G^(m) = (1/2) int_{-1}^{1} G(x) cos(pi m x) dx with G = 1 on [-1/2, 1/2]
/// and 1 - g elsewhere, g(x) = 2 + 2 sum ghat_k cos(2 pi k x).
double dual_by_quadrature(const std::vector<double>& ghat, long long m) {
  auto g = [&](double x) {
    double s = 2.0;
    for (std::size_t k = 1; k <= ghat.size(); ++k) s += 2.0 * ghat[k - 1] * std::cos(2.0 * kPi * k * x);
    return s;
  };
  auto w = [&](double x) { return std::cos(kPi * m * x); };
  const double inner = oracle::integrate(w, -0.5, 0.5);
  const double outer = oracle::integrate([&](double x) { return (1.0 - g(x)) * w(x); }, 0.5, 1.0);
  return 0.5 * (inner + 2.0 * outer);
}

}  // namespace

TEST(UpperBound, BoxIsTwoThirds) {
  const BoundCertificate c = upper_bound(FourierCoefficients(), 100'000);
  EXPECT_EQ(c.kind, BoundKind::upper);
  EXPECT_GE(c.value, 2.0 / 3.0);
  EXPECT_NEAR(c.value, 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(c.parameter, 2.0 / kPi, 1e-15);
}

TEST(UpperBound, RoundingBudgetCoversLongDoubleSum) {
  const auto c = oracle::uniform(51, 10, -0.3, 0.3);
  const BoundCertificate u = upper_bound(FourierCoefficients(c), 3000);
  const double ref = static_cast<double>(oracle::truncated_objective(c, 3000));
  EXPECT_LE(std::abs(u.main_sum - ref), u.rounding_budget);
  EXPECT_GE(u.tail_budget, u.analytic_tail + u.rounding_budget);
  EXPECT_GE(u.value, u.main_sum + u.tail_budget);
}

TEST(UpperBound, DominatesQuadratureNorm) {
  const auto c = oracle::uniform(52, 5, -0.4, 0.4);
  const BoundCertificate u = upper_bound(FourierCoefficients(c), 2000);
  EXPECT_GE(u.value, oracle::autoconvolution_l2(c));
}

TEST(UpperBound, RequiresNAtLeastTwiceDegree) {
  EXPECT_THROW(upper_bound(FourierCoefficients(std::vector<double>(10, 0.01)), 19), InvalidArgument);
}

TEST(UpperBound, AccumulationModesAgree) {
  const FourierCoefficients f = solved(20);
  const BoundCertificate a = upper_bound(f, 50'000);
  const BoundCertificate b = upper_bound(f, 50'000, numeric::Accumulation::double_double);
  EXPECT_NEAR(a.main_sum, b.main_sum, 1e-13);
}

TEST(LowerBound, TrivialDualMatchesZetaClosedForm) {
  // g = 2: |G^(m)| = 2/(pi |m|) for odd m, zero for even m != 0.
  const double S = 2.0 * std::pow(2.0 / kPi, 4.0 / 3.0) * (1.0 - std::pow(2.0, -4.0 / 3.0)) *
                   boost::math::zeta(4.0 / 3.0);
  const double exact = 0.5 + 0.5 / (S * S * S);
  const BoundCertificate c = lower_bound(FourierCoefficients(), 0.6, 1'000'000);
  EXPECT_LE(c.value, exact);
  EXPECT_NEAR(c.value, exact, 1e-5);
  EXPECT_NEAR(S, 2.379, 1e-3);
}

TEST(LowerBound, DualCoefficientsMatchQuadrature) {
  const auto c = oracle::uniform(53, 4, -0.3, 0.3);
  const DualSpectrum d = dual_spectrum(FourierCoefficients(c), 0.57, 100);
  for (long long m : {1LL, 2LL, 3LL, 4LL, 5LL, 8LL, 9LL, 21LL, -7LL}) {
    EXPECT_NEAR(d.coefficient(m), dual_by_quadrature(d.ghat, m), 1e-12) << "m=" << m;
  }
  EXPECT_EQ(d.coefficient(0), 0.0);
}

TEST(LowerBound, GhatFromCubes) {
  const FourierCoefficients f({-0.3, 0.2});
  const DualSpectrum d = dual_spectrum(f, 0.6, 100);
  EXPECT_DOUBLE_EQ(d.ghat[0], 2.0 / (1.0 - 1.2) * -0.027);
  EXPECT_DOUBLE_EQ(d.ghat[1], 2.0 / (1.0 - 1.2) * 0.008);
}

TEST(LowerBound, TailTermBoundDominatesCoefficients) {
  const FourierCoefficients f = solved(10);
  const DualSpectrum d = dual_spectrum(f, 0.57, 1000);
  for (long long m = 51; m < 3000; m += 2) {
    EXPECT_LE(std::abs(d.coefficient(m)), d.tail_term_bound(m)) << "m=" << m;
  }
}

TEST(LowerBound, SumMatchesDirectEvaluation) {
  const FourierCoefficients f = solved(6);
  const DualSpectrum d = dual_spectrum(f, 0.56, 300);
  long double s = 0.0L;
  for (long long m = 1; m <= 600; ++m) s += 2.0L * std::pow(std::abs(static_cast<long double>(d.coefficient(m))), 4.0L / 3.0L);
  EXPECT_NEAR(d.S_main, static_cast<double>(s), 1e-12);
  EXPECT_LE(std::abs(d.S_main - static_cast<double>(s)), d.S_rounding + 1e-15);
}

TEST(LowerBound, ValidForArbitraryDuals) {
  // The bound holds whichever f builds the dual; it must stay below the
  // best known upper bound 0.574643711.
  for (std::uint64_t seed = 60; seed < 65; ++seed) {
    const auto c = oracle::uniform(seed, 8, -0.3, 0.3);
    for (double alpha : {0.53, 0.57, 0.62}) {
      EXPECT_LT(lower_bound(FourierCoefficients(c), alpha, 2000).value, 0.574643711);
    }
  }
}

TEST(LowerBound, Preconditions) {
  const FourierCoefficients f(std::vector<double>(10, 0.01));
  EXPECT_THROW(lower_bound(f, 0.57, 149), InvalidArgument);
  EXPECT_THROW(lower_bound(f, 0.5, 1000), InvalidArgument);
  EXPECT_THROW(lower_bound(f, 1.0, 1000), InvalidArgument);
}

TEST(LowerBound, OptimizedAlphaBeatsGrid) {
  const FourierCoefficients f = solved(20);
  const AlphaSearch best = optimize_alpha(f, 20'000);
  const DualKernel kernel(f, 20'000);
  for (double alpha = 0.53; alpha < 0.65; alpha += 0.01) {
    EXPECT_GE(best.certificate.value, kernel.lower_bound(alpha).value - 1e-9);
  }
  EXPECT_GT(best.alpha, 0.52);
  EXPECT_LT(best.alpha, 0.65);
}

TEST(Sandwich, OrderedAndPositive) {
  const FourierCoefficients f = solved(20);
  const BoundCertificate up = upper_bound(f, 20'000);
  const BoundCertificate lo = optimize_alpha(f, 20'000).certificate;
  EXPECT_GT(sandwich_width(lo, up), 0.0);
  EXPECT_THROW(sandwich_width(up, lo), Error);
}

TEST(Certificates, BitIdenticalAcrossThreadCounts) {
  const FourierCoefficients f = solved(20);
  set_thread_count(1);
  const BoundCertificate u1 = upper_bound(f, 100'000);
  const BoundCertificate l1 = lower_bound(f, 0.57, 100'000);
  set_thread_count(4);
  const BoundCertificate u4 = upper_bound(f, 100'000);
  const BoundCertificate l4 = lower_bound(f, 0.57, 100'000);
  set_thread_count(0);
  EXPECT_EQ(u1.value, u4.value);
  EXPECT_EQ(u1.rounding_budget, u4.rounding_budget);
  EXPECT_EQ(l1.value, l4.value);
  EXPECT_EQ(l1.main_sum, l4.main_sum);
}

TEST(Digest, StableAndSensitive) {
  const FourierCoefficients a({0.1, -0.2});
  const FourierCoefficients b({0.1, std::nextafter(-0.2, 0.0)});
  EXPECT_EQ(coefficient_digest(a), coefficient_digest(FourierCoefficients({0.1, -0.2})));
  EXPECT_NE(coefficient_digest(a), coefficient_digest(b));
  EXPECT_EQ(coefficient_digest(a).rfind("fnv1a64:", 0), 0u);
}
