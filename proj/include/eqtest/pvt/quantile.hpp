#pragma once

#include <span>

namespace eqt {

/// R's default quantile (type 7): interpolation at 1-based position
/// 1 + (n-1)q of the sorted sample. Throws InputError for an empty sample or
/// q outside (0, 1].
double r_quantile_type7(std::span<const double> values, double q);

/// Same, for a sample already sorted ascending.
double quantile_type7_sorted(std::span<const double> sorted, double q);

}  // namespace eqt
