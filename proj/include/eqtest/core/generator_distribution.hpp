#pragma once

#include <vector>

#include "eqtest/core/group_action.hpp"

namespace eqt {

class SeededRng;

/// Law mu_g of the sampled group element.
class GeneratorDistribution {
 public:
  GeneratorDistribution(std::vector<ElementId> support, std::vector<double> weights);
  static GeneratorDistribution uniform(std::vector<ElementId> support);
  static GeneratorDistribution point_mass(ElementId g);

  const std::vector<ElementId>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  ElementId sample(SeededRng& rng) const;

 private:
  std::vector<ElementId> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Uniform over the distinct non-identity powers of each generator,
/// e.g. {R, R^2, R^3} for the rotation actions.
GeneratorDistribution default_distribution(const GroupAction& action);

}  // namespace eqt
