#pragma once

#include <cstddef>
#include <vector>

#include "eqtest/core/noise.hpp"

namespace eqt {

/// Thresholds t_1 < ... < t_k whose tail bounds p_t sit near the evenly
/// spaced levels k/(k+1), ..., 1/(k+1). Gaussian models are inverted by
/// bisection; table models take the first knot at or below each level.
/// Noiseless models return {noiseless_threshold}.
std::vector<double> auto_threshold_grid(const NoiseModel& noise, std::size_t k,
                                        double noiseless_threshold = 0.0);

/// Smallest t with p_t <= level for a Gaussian model (bisection).
double invert_gaussian_tail(const NoiseModel& noise, double level);

}  // namespace eqt
