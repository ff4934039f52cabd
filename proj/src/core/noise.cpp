#include "eqtest/core/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eqtest/core/errors.hpp"

namespace eqt {

NoiseModel NoiseModel::noiseless() { return NoiseModel(NoiseKind::noiseless, 0.0, 1, {}); }

NoiseModel NoiseModel::gaussian(double sigma, std::size_t output_dim) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("noise sigma must be positive and finite");
  if (output_dim == 0) throw InputError("output dimension must be positive");
  return NoiseModel(NoiseKind::gaussian, sigma, output_dim, {});
}

NoiseModel NoiseModel::table(std::vector<std::pair<double, double>> knots, std::size_t output_dim) {
  if (knots.empty()) throw InputError("noise table is empty");
  if (output_dim == 0) throw InputError("output dimension must be positive");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [t, p] = knots[i];
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("noise table thresholds must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("noise table probabilities must lie in [0, 1]");
    if (i > 0 && (t == knots[i - 1].first || p > knots[i - 1].second))
      throw InputError("noise table must be strictly increasing in t and nonincreasing in p");
  }
  return NoiseModel(NoiseKind::table, 0.0, output_dim, std::move(knots));
}

double NoiseModel::single_coordinate_tail(double t) const {
  switch (kind_) {
    case NoiseKind::noiseless:
      return 0.0;
    case NoiseKind::gaussian: {
      const double raw = (2.0 * sigma_ / t) * std::exp(-t * t / (4.0 * sigma_ * sigma_)) /
                         std::sqrt(2.0 * std::numbers::pi);
      return std::clamp(raw, 0.0, 1.0);
    }
    case NoiseKind::table: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                 [](double v, const auto& knot) { return v < knot.first; });
      if (it == knots_.begin()) return 1.0;
      return std::prev(it)->second;
    }
  }
  return 1.0;
}

double NoiseModel::tail(double t) const {
  if (!(t > 0.0)) throw InputError("noise tail needs t > 0");
  const double p = single_coordinate_tail(t);
  if (output_dim_ <= 1) return p;
  return std::min(1.0, static_cast<double>(output_dim_) * p);
}

}  // namespace eqt
