#include "eqtest/avt/thresholds.hpp"

#include <algorithm>

#include "eqtest/core/errors.hpp"

namespace eqt {

double invert_gaussian_tail(const NoiseModel& noise, double level) {
  if (noise.kind() != NoiseKind::gaussian) throw InputError("bisection needs a Gaussian noise model");
  if (!(level > 0.0 && level < 1.0)) throw InputError("tail level must lie in (0, 1)");
  double lo = noise.sigma() * 1e-6;
  double hi = noise.sigma();
  while (noise.tail(hi) > level) hi *= 2.0;
  while (noise.tail(lo) <= level) lo *= 0.5;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (noise.tail(mid) > level) lo = mid;
    else hi = mid;
  }
  return hi;
}

std::vector<double> auto_threshold_grid(const NoiseModel& noise, std::size_t k, double noiseless_threshold) {
  if (noise.kind() == NoiseKind::noiseless) return {noiseless_threshold};
  if (k == 0) throw InputError("threshold grid needs k >= 1");
  std::vector<double> grid;
  for (std::size_t i = k; i >= 1; --i) {
    const double level = static_cast<double>(i) / static_cast<double>(k + 1);
    if (noise.kind() == NoiseKind::gaussian) {
      grid.push_back(invert_gaussian_tail(noise, level));
    } else {
      for (const auto& [t, p] : noise.knots()) {
        if (noise.tail(t) <= level) {
          grid.push_back(t);
          break;
        }
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw InputError("noise table never drops below the requested tail levels");
  return grid;
}

}  // namespace eqt
