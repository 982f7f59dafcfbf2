#pragma once

#include <stdexcept>
#include <string>

namespace ricsol {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Metric matrix beyond the condition-number cap, rank-deficient Jacobian, or λ′ = 0.
struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ricsol
