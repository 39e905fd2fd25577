#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "autoconv/spectral.hpp"

namespace autoconv {

enum class StopReason {
  no_variables,         // T = 0, nothing to optimize
  gradient_tolerance,   // max-norm of the gradient reached grad_tol
  objective_stalled,    // relative decrease over the window fell below rel_obj_tol
  line_search_stalled,  // no decrease above round-off is possible
  iteration_cap,        // max_iterations exhausted; not converged
};

std::string to_string(StopReason reason);

struct FourierSolution {
  FourierCoefficients coeffs;
  std::size_t R = 0;
  ObjectiveBreakdown breakdown;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  StopReason reason = StopReason::iteration_cap;
  std::vector<std::string> warnings;
};

struct ZeroInit {};
struct WarmStart {
  FourierSolution previous;
};
struct ExplicitInit {
  std::vector<double> values;
};
using Initialization = std::variant<ZeroInit, WarmStart, ExplicitInit>;

struct IterationLog {
  std::size_t iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct SolverConfig {
  std::size_t T = 0;
  std::size_t R = 1;
  double grad_tol = 1e-10;
  double rel_obj_tol = 1e-12;  // 0 disables the stall test
  std::size_t max_iterations = 100'000;
  std::size_t memory = 10;
  /// Iterations spanned by the relative-decrease test.
  std::size_t window = 10;
  Initialization init = ZeroInit{};
  /// Called every log_every iterations when set.
  std::function<void(const IterationLog&)> on_iteration;
  std::size_t log_every = 100;
};

/// Checks the config, throwing InvalidArgument on hard errors; returns
/// advisory warnings (e.g. R < T).
std::vector<std::string> validate(const SolverConfig& config);

/// Minimizes the truncated objective over f_1..f_T with limited-memory BFGS
/// and a strong-Wolfe line search. Accepted steps never increase the objective.
/// Hitting max_iterations returns the best iterate with converged = false; a
/// line search that fails above round-off throws LineSearchFailure.
FourierSolution solve(const SolverConfig& config);

/// prev's coefficients followed by zeros up to new_degree.
std::vector<double> warm_start_extend(const FourierSolution& prev, std::size_t new_degree);

}  // namespace autoconv
