#include "eqtest/core/generator_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eqtest/core/errors.hpp"
#include "eqtest/sampling/rng.hpp"

namespace eqt {

GeneratorDistribution::GeneratorDistribution(std::vector<ElementId> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw InputError("generator distribution needs a nonempty support");
  if (support_.size() != weights_.size()) throw InputError("support and weights differ in length");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("generator weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("generator weights must sum to 1");
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

GeneratorDistribution GeneratorDistribution::uniform(std::vector<ElementId> support) {
  if (support.empty()) throw InputError("generator distribution needs a nonempty support");
  std::vector<double> weights(support.size(), 1.0 / static_cast<double>(support.size()));
  // Absorb rounding so the weights sum to 1 within tolerance for any size.
  weights.back() = 1.0 - std::accumulate(weights.begin(), weights.end() - 1, 0.0);
  return GeneratorDistribution(std::move(support), std::move(weights));
}

GeneratorDistribution GeneratorDistribution::point_mass(ElementId g) { return uniform({g}); }

ElementId GeneratorDistribution::sample(SeededRng& rng) const {
  if (support_.size() == 1) return support_.front();
  const double u = rng.uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

GeneratorDistribution default_distribution(const GroupAction& action) {
  std::vector<ElementId> support;
  for (ElementId g : action.generators()) {
    for (ElementId p : action.distinct_powers(g)) {
      if (std::find(support.begin(), support.end(), p) == support.end()) support.push_back(p);
    }
  }
  return GeneratorDistribution::uniform(std::move(support));
}

}  // namespace eqt
