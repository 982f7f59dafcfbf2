#include "ricsol/quadrature.hpp"

#include <array>
#include <stdexcept>

namespace ricsol {

std::vector<std::pair<double, double>> gauss_unit(int panels) {
  if (panels < 1) throw std::invalid_argument("gauss_unit: panels must be positive");
  static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                              0.9602898564975363};
  static constexpr std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};
  std::vector<std::pair<double, double>> out;
  out.reserve(8 * panels);
  for (int p = 0; p < panels; ++p)
    for (int k = 0; k < 8; ++k) {
      const double xi = k < 4 ? -x[3 - k] : x[k - 4];
      const double wk = k < 4 ? w[3 - k] : w[k - 4];
      out.emplace_back((p + 0.5 * (1.0 + xi)) / panels, 0.5 * wk / panels);
    }
  return out;
}

}  // namespace ricsol
