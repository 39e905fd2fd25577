#include "autoconv/golden_section.hpp"

#include <cmath>
#include <utility>

#include "autoconv/error.hpp"

namespace autoconv::numeric {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw InvalidArgument("golden-section search needs lo < hi and tol > 0");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMinimum best{lo, f(lo), 1};
  auto consider = [&](double x, double v) {
    if (v < best.value) best = {x, v, best.evaluations};
  };
  consider(hi, f(hi));
  ++best.evaluations;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  best.evaluations += 2;
  consider(c, fc);
  consider(d, fd);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
    ++best.evaluations;
  }
  return best;
}

}  // namespace autoconv::numeric
