#include "eqtest/pvt/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eqtest/core/errors.hpp"

namespace eqt {

double quantile_type7_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw InputError("quantile level must lie in (0, 1]");
  // 1-based position as in R, so h rounds exactly as R's does.
  const double index = 1.0 + static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(index)) - 1;
  const auto hi = static_cast<std::size_t>(std::ceil(index)) - 1;
  const double h = index - std::floor(index);
  // Mirrors R: interpolate only when the neighbours differ.
  if (hi == lo || sorted[hi] == sorted[lo]) return sorted[lo];
  return (1.0 - h) * sorted[lo] + h * sorted[hi];
}

double r_quantile_type7(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_type7_sorted(sorted, q);
}

}  // namespace eqt
