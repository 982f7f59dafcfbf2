#pragma once

#include <utility>
#include <vector>

namespace ricsol {

// Composite 8-point Gauss–Legendre rule on [0, 1]; nodes and weights.
std::vector<std::pair<double, double>> gauss_unit(int panels = 8);

}  // namespace ricsol
