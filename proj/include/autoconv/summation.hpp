#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "autoconv/double_double.hpp"
#include "autoconv/parallel.hpp"

namespace autoconv::numeric {

/// Neumaier's variant of Kahan summation. Error is about one ulp of the
/// result plus n * eps^2 * sum |x_i|.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) {
    const DoubleDouble s = two_sum(sum_, other.sum_);
    sum_ = s.hi;
    comp_ += other.comp_ + s.lo;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Accumulates in double-double; used for final certificates.
class DoubleDoubleSum {
 public:
  void add(double x) { acc_ += DoubleDouble(x); }
  void add(DoubleDouble x) { acc_ += x; }
  void merge(const DoubleDoubleSum& other) { acc_ += other.acc_; }
  double value() const { return acc_.to_double(); }
  DoubleDouble exact() const { return acc_; }

 private:
  DoubleDouble acc_;
};

enum class Accumulation { compensated, double_double };

/// Block length of the fixed reduction tree. Independent of the thread count,
/// so results are bit-identical however the blocks are scheduled.
inline constexpr std::size_t kReductionBlock = 4096;

/// Deterministic sum of term(i) for i in [0, n): each block of
/// kReductionBlock consecutive terms is accumulated left to right, then block
/// partials are merged pairwise in a fixed tree.
template <class Acc, class Term>
Acc reduce(std::size_t n, Term&& term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (blocks == 0) return Acc{};
  std::vector<Acc> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(n, begin + kReductionBlock);
    Acc acc;
    for (std::size_t i = begin; i < end; ++i) acc.add(term(i));
    partial[b] = acc;
  });
  for (std::size_t width = 1; width < blocks; width *= 2) {
    for (std::size_t i = 0; i + width < blocks; i += 2 * width) {
      partial[i].merge(partial[i + width]);
    }
  }
  return partial[0];
}

template <class Term>
double compensated_sum(std::size_t n, Term&& term) {
  return reduce<CompensatedSum>(n, std::forward<Term>(term)).value();
}

}  // namespace autoconv::numeric
