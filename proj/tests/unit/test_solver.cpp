#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "autoconv/error.hpp"
#include "autoconv/parallel.hpp"
#include "autoconv/solver.hpp"

using namespace autoconv;

TEST(Solver, DegreeZeroIsBox) {
  SolverConfig c;
  c.T = 0;
  c.R = 1000;
  const FourierSolution s = solve(c);
  EXPECT_EQ(s.reason, StopReason::no_variables);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.breakdown.total, 2.0 / 3.0, 1e-9);
}

TEST(Solver, DegreeOneMatchesScalarMinimization) {
  SolverConfig c;
  c.T = 1;
  c.R = 2000;
  const FourierSolution s = solve(c);
  const auto best = boost::math::tools::brent_find_minima(
      [](double x) { return static_cast<double>(oracle::truncated_objective({x}, 2000)); }, -0.5, 0.5, 52);
  EXPECT_NEAR(s.coeffs[1], best.first, 1e-6);
  EXPECT_NEAR(s.breakdown.total, best.second, 1e-13);
  EXPECT_TRUE(s.converged);
}

TEST(Solver, MonotoneInDegree) {
  double prev = 1.0;
  for (std::size_t T : {1u, 2u, 5u, 10u, 20u}) {
    SolverConfig c;
    c.T = T;
    c.R = 2000;
    const FourierSolution s = solve(c);
    EXPECT_LT(s.breakdown.total, prev) << "T=" << T;
    prev = s.breakdown.total;
  }
}

TEST(Solver, StationaryPointHasSmallGradient) {
  SolverConfig c;
  c.T = 10;
  c.R = 2000;
  c.rel_obj_tol = 0.0;
  c.grad_tol = 1e-9;
  const FourierSolution s = solve(c);
  double g = 0.0;
  for (double v : gradient(s.coeffs, 2000)) g = std::max(g, std::abs(v));
  EXPECT_LE(g, 1e-8);
}

TEST(Solver, CoefficientsAlternateInSign) {
  SolverConfig c;
  c.T = 20;
  c.R = 4000;
  const FourierSolution s = solve(c);
  for (std::size_t k = 1; k <= 20; ++k) {
    EXPECT_EQ(std::signbit(s.coeffs[k]), k % 2 == 1) << "k=" << k;
  }
}

TEST(Solver, WarmStartNeedsFewerIterations) {
  SolverConfig base;
  base.T = 20;
  base.R = 4000;
  const FourierSolution t20 = solve(base);

  SolverConfig cold;
  cold.T = 50;
  cold.R = 4000;
  SolverConfig warm = cold;
  warm.init = WarmStart{t20};
  const FourierSolution a = solve(cold);
  const FourierSolution b = solve(warm);
  EXPECT_LT(b.iterations, a.iterations);
  EXPECT_NEAR(a.breakdown.total, b.breakdown.total, 1e-9);
}

TEST(Solver, WarmStartExtendPadsWithZeros) {
  FourierSolution prev;
  prev.coeffs = FourierCoefficients({0.1, -0.2});
  EXPECT_EQ(warm_start_extend(prev, 4), (std::vector<double>{0.1, -0.2, 0.0, 0.0}));
  EXPECT_THROW(warm_start_extend(prev, 1), InvalidArgument);
}

TEST(Solver, IterationCapIsReported) {
  SolverConfig c;
  c.T = 20;
  c.R = 4000;
  c.max_iterations = 3;
  const FourierSolution s = solve(c);
  EXPECT_EQ(s.reason, StopReason::iteration_cap);
  EXPECT_FALSE(s.converged);
  EXPECT_EQ(s.iterations, 3u);
}

TEST(Solver, ExplicitInitLengthChecked) {
  SolverConfig c;
  c.T = 3;
  c.init = ExplicitInit{{0.1, 0.2}};
  EXPECT_THROW(solve(c), InvalidArgument);
}

TEST(Solver, WarnsWhenRBelowT) {
  SolverConfig c;
  c.T = 10;
  c.R = 5;
  EXPECT_FALSE(validate(c).empty());
  c.R = 100;
  EXPECT_TRUE(validate(c).empty());
}

TEST(Solver, ObjectiveNeverIncreasesAlongIterations) {
  SolverConfig c;
  c.T = 15;
  c.R = 1000;
  c.log_every = 1;
  std::vector<double> trace;
  c.on_iteration = [&](const IterationLog& log) { trace.push_back(log.objective); };
  solve(c);
  ASSERT_GT(trace.size(), 2u);
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
}

TEST(Solver, BitIdenticalAcrossThreadCounts) {
  SolverConfig c;
  c.T = 30;
  c.R = 4000;
  set_thread_count(1);
  const FourierSolution a = solve(c);
  set_thread_count(3);
  const FourierSolution b = solve(c);
  set_thread_count(0);
  EXPECT_EQ(std::vector<double>(a.coeffs.values().begin(), a.coeffs.values().end()),
            std::vector<double>(b.coeffs.values().begin(), b.coeffs.values().end()));
  EXPECT_EQ(a.breakdown.total, b.breakdown.total);
}
