#include "autoconv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "autoconv/error.hpp"

namespace autoconv {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> search_direction(const std::deque<CurvaturePair>& pairs,
                                     std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * dot(pairs[i].s, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * pairs[i].y[j];
  }
  if (!pairs.empty()) {
    const auto& last = pairs.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * dot(pairs[i].y, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alpha[i] - beta) * pairs[i].s[j];
  }
  for (double& v : q) v = -v;
  return q;
}

struct TrialPoint {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;
  std::vector<double> x;
  std::vector<double> g;
};

class LineSearch {
 public:
  LineSearch(const ObjectiveEvaluator& eval, std::span<const double> x0, double f0,
             std::span<const double> g0, std::span<const double> d)
      : eval_(eval), x0_(x0), d_(d), f0_(f0), slope0_(dot(g0, d)) {}

  // Strong-Wolfe search (bracketing then zoom). Returns false when no step
  // with sufficient decrease was found.
  bool run(double initial, TrialPoint& out) {
    TrialPoint prev = origin();
    double step = initial;
    for (int i = 0; i < kMaxBracket; ++i) {
      TrialPoint cur = evaluate(step);
      if (!std::isfinite(cur.value) || cur.value > f0_ + kC1 * step * slope0_ ||
          (i > 0 && cur.value >= prev.value)) {
        return zoom(prev, cur, out);
      }
      if (std::abs(cur.slope) <= -kC2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(cur, prev, out);
      prev = std::move(cur);
      step *= 2.0;
    }
    out = std::move(prev);
    return out.step > 0.0;
  }

 private:
  static constexpr double kC1 = 1e-4;
  static constexpr double kC2 = 0.9;
  static constexpr int kMaxBracket = 60;
  static constexpr int kMaxZoom = 60;

  TrialPoint origin() const {
    TrialPoint p;
    p.step = 0.0;
    p.value = f0_;
    p.slope = slope0_;
    return p;
  }

  TrialPoint evaluate(double step) const {
    TrialPoint p;
    p.step = step;
    p.x.resize(x0_.size());
    p.g.resize(x0_.size());
    for (std::size_t i = 0; i < x0_.size(); ++i) p.x[i] = x0_[i] + step * d_[i];
    try {
      p.value = eval_.value_and_gradient(p.x, p.g).total;
    } catch (const Overflow&) {
      p.value = std::numeric_limits<double>::infinity();
      return p;
    }
    p.slope = dot(p.g, d_);
    return p;
  }

  static double interpolate(const TrialPoint& a, const TrialPoint& b) {
    // Safeguarded cubic through (step, value, slope) at both ends.
    const double lo = std::min(a.step, b.step);
    const double hi = std::max(a.step, b.step);
    const double width = hi - lo;
    double trial = 0.5 * (a.step + b.step);
    if (std::isfinite(a.value) && std::isfinite(b.value)) {
      const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
      const double disc = d1 * d1 - a.slope * b.slope;
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
        const double denom = b.slope - a.slope + 2.0 * d2;
        if (denom != 0.0) {
          const double c = b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
          if (std::isfinite(c)) trial = c;
        }
      }
    }
    if (trial < lo + 0.1 * width || trial > hi - 0.1 * width) trial = 0.5 * (lo + hi);
    return trial;
  }

  bool zoom(TrialPoint lo, TrialPoint hi, TrialPoint& out) {
    for (int i = 0; i < kMaxZoom; ++i) {
      const double step = interpolate(lo, hi);
      if (step == lo.step || step == hi.step) break;
      TrialPoint cur = evaluate(step);
      if (!std::isfinite(cur.value) || cur.value > f0_ + kC1 * step * slope0_ ||
          cur.value >= lo.value) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -kC2 * slope0_) {
          out = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    // Accept the best sufficient-decrease point even if curvature failed.
    if (lo.step > 0.0 && lo.value < f0_) {
      out = std::move(lo);
      return true;
    }
    return false;
  }

  const ObjectiveEvaluator& eval_;
  std::span<const double> x0_;
  std::span<const double> d_;
  double f0_;
  double slope0_;
};

std::vector<double> initial_point(const SolverConfig& config) {
  return std::visit(
      [&](const auto& init) -> std::vector<double> {
        using Kind = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<Kind, ZeroInit>) {
          return std::vector<double>(config.T, 0.0);
        } else if constexpr (std::is_same_v<Kind, WarmStart>) {
          return warm_start_extend(init.previous, config.T);
        } else {
          if (init.values.size() != config.T) {
            throw InvalidArgument("explicit initialization must have exactly T entries");
          }
          FourierCoefficients check(init.values);
          return init.values;
        }
      },
      config.init);
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::no_variables: return "no_variables";
    case StopReason::gradient_tolerance: return "gradient_tolerance";
    case StopReason::objective_stalled: return "objective_stalled";
    case StopReason::line_search_stalled: return "line_search_stalled";
    case StopReason::iteration_cap: return "iteration_cap";
  }
  return "unknown";
}

std::vector<std::string> validate(const SolverConfig& config) {
  if (config.R == 0) throw InvalidArgument("R must be >= 1");
  if (!(config.grad_tol > 0.0) || !(config.rel_obj_tol >= 0.0)) {
    throw InvalidArgument("grad_tol must be positive and rel_obj_tol non-negative");
  }
  if (config.max_iterations == 0) throw InvalidArgument("max_iterations must be positive");
  if (config.memory == 0) throw InvalidArgument("quasi-Newton memory must be positive");
  std::vector<std::string> warnings;
  if (config.R < config.T) {
    warnings.push_back("R < T: the odd-channel truncation is coarser than the degree");
  }
  return warnings;
}

std::vector<double> warm_start_extend(const FourierSolution& prev, std::size_t new_degree) {
  const auto old = prev.coeffs.values();
  if (new_degree < old.size()) {
    throw InvalidArgument("warm start cannot shrink the degree (" + std::to_string(old.size()) +
                          " -> " + std::to_string(new_degree) + ")");
  }
  std::vector<double> out(new_degree, 0.0);
  std::copy(old.begin(), old.end(), out.begin());
  return out;
}

FourierSolution solve(const SolverConfig& config) {
  FourierSolution out;
  out.warnings = validate(config);
  out.R = config.R;
  std::vector<double> x = initial_point(config);
  const ObjectiveEvaluator eval(config.T, config.R);

  auto finish = [&](std::vector<double> point, double grad_norm, std::size_t iterations,
                    StopReason reason) {
    out.coeffs = FourierCoefficients(std::move(point));
    out.breakdown = objective(out.coeffs, config.R);
    out.grad_norm = grad_norm;
    out.iterations = iterations;
    out.reason = reason;
    out.converged = reason != StopReason::iteration_cap;
    return out;
  };

  if (config.T == 0) return finish({}, 0.0, 0, StopReason::no_variables);

  std::vector<double> g(config.T);
  double f = eval.value_and_gradient(x, g).total;
  std::deque<CurvaturePair> pairs;
  std::vector<double> history{f};
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    const double gnorm = max_norm(g);
    if (gnorm <= config.grad_tol) return finish(x, gnorm, iter, StopReason::gradient_tolerance);
    if (history.size() > config.window) {
      const double past = history[history.size() - 1 - config.window];
      if (past - f < config.rel_obj_tol * std::abs(f)) {
        return finish(x, gnorm, iter, StopReason::objective_stalled);
      }
    }

    std::vector<double> d = search_direction(pairs, g);
    if (dot(d, g) >= 0.0) {
      pairs.clear();
      d = search_direction(pairs, g);
    }
    double initial = 1.0;
    if (pairs.empty()) initial = 1.0 / std::max(1.0, std::sqrt(dot(g, g)));

    TrialPoint next;
    LineSearch search(eval, x, f, g, d);
    bool ok = search.run(initial, next);
    if (!ok && !pairs.empty()) {
      pairs.clear();
      d = search_direction(pairs, g);
      LineSearch retry(eval, x, f, g, d);
      ok = retry.run(1.0 / std::max(1.0, std::sqrt(dot(g, g))), next);
    }
    if (!ok) {
      // Nothing below f is reachable above round-off: the iterate is as good
      // as binary64 can resolve.
      if (gnorm <= std::sqrt(eps) || std::abs(f) * 64.0 * eps >= gnorm * gnorm) {
        return finish(x, gnorm, iter, StopReason::line_search_stalled);
      }
      const double slope = dot(g, d);
      if (std::abs(slope) <= 64.0 * eps * std::abs(f)) {
        return finish(x, gnorm, iter, StopReason::line_search_stalled);
      }
      throw LineSearchFailure("line search failed at iteration " + std::to_string(iter) +
                                  " (objective " + std::to_string(f) + ", gradient max-norm " +
                                  std::to_string(gnorm) + ")",
                              x);
    }

    CurvaturePair pair;
    pair.s.resize(config.T);
    pair.y.resize(config.T);
    for (std::size_t i = 0; i < config.T; ++i) {
      pair.s[i] = next.x[i] - x[i];
      pair.y[i] = next.g[i] - g[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > eps * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
      pair.rho = 1.0 / sy;
      pairs.push_back(std::move(pair));
      if (pairs.size() > config.memory) pairs.pop_front();
    }
    x = std::move(next.x);
    g = std::move(next.g);
    f = next.value;
    history.push_back(f);

    if (config.on_iteration && config.log_every > 0 && (iter + 1) % config.log_every == 0) {
      config.on_iteration({iter + 1, f, max_norm(g), next.step});
    }
  }
  return finish(x, max_norm(g), config.max_iterations, StopReason::iteration_cap);
}

}  // namespace autoconv
