#include "pulseqfi/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pulseqfi {

std::size_t TimeGrid::nearest_node(double t) const {
  if (h <= 0.0) throw std::invalid_argument("TimeGrid: empty grid");
  double k = std::round((t - t0) / h);
  if (k < 0.0) k = 0.0;
  if (k > static_cast<double>(n)) k = static_cast<double>(n);
  return static_cast<std::size_t>(k);
}

std::vector<double> cumulative_simpson(const std::vector<double>& left,
                                       const std::vector<double>& mid,
                                       const std::vector<double>& right, double h) {
  const std::size_t n = left.size();
  if (mid.size() != n || right.size() != n)
    throw std::invalid_argument("cumulative_simpson: size mismatch");
  std::vector<double> out(n + 1, 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += h / 6.0 * (left[k] + 4.0 * mid[k] + right[k]);
    out[k + 1] = acc;
  }
  return out;
}

}  // namespace pulseqfi
