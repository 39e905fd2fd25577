#pragma once

#include <cmath>
#include <functional>

namespace autoconv::numeric {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for the minimum of a unimodal function on [lo, hi],
/// stopping once the bracket is narrower than tol. The returned point is the
/// best evaluated one, endpoints included.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol);

}  // namespace autoconv::numeric
