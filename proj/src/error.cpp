#include "autoconv/error.hpp"

#include <utility>

namespace autoconv {

NonFiniteCoefficient::NonFiniteCoefficient(std::size_t index, double value)
    : InvalidArgument("coefficient " + std::to_string(index) + " is not finite (" +
                      std::to_string(value) + ")"),
      index_(index) {}

LineSearchFailure::LineSearchFailure(const std::string& what, std::vector<double> iterate)
    : Error(what), iterate_(std::move(iterate)) {}

}  // namespace autoconv
