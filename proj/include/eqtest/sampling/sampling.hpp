#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "eqtest/core/dataset.hpp"
#include "eqtest/core/generator_distribution.hpp"
#include "eqtest/core/group_action.hpp"
#include "eqtest/core/metric.hpp"
#include "eqtest/sampling/rng.hpp"

namespace eqt {

/// One sampled (g, I(j), J(j)) with g·X_i cached.
struct SampledPair {
  ElementId g;
  std::size_t i = 0;
  std::size_t j = 0;
  Vec transformed_point;
  double pair_distance = 0.0;
};

struct Neighbour {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Exhaustive scan; ties go to the lowest index. With `positive_only`,
/// candidates at distance exactly 0 are skipped as well.
/// Throws InputError when no candidate remains.
Neighbour nearest_neighbour(std::span<const double> query, const Dataset& data, const Metric& metric,
                            std::optional<std::size_t> exclude = std::nullopt, bool positive_only = false);

ElementId sample_generator(const GeneratorDistribution& dist, SeededRng& rng);

struct NnPairOptions {
  /// Skip every zero-distance candidate, not only the exact self-match.
  /// Used where a ratio statistic needs a positive denominator.
  bool positive_only = false;
  /// Worker threads for the neighbour scans; results do not depend on it.
  unsigned jobs = 1;
};

/// Nearest-neighbour pairing: I(j) uniform with replacement, J(j) the
/// nearest neighbour of g_j·X_I(j). I(j) itself is excluded exactly when
/// g_j·X_I(j) lands on X_I(j).
std::vector<SampledPair> sample_pairs_nn(const Dataset& data, const GroupAction& action,
                                         const GeneratorDistribution& dist, std::size_t m,
                                         const Metric& metric, SeededRng& rng, NnPairOptions options = {});

/// Uniform pairing: I(j), J(j) uniform with replacement. Pairs whose
/// transformed distance is exactly zero are redrawn.
std::vector<SampledPair> sample_pairs_uniform(const Dataset& data, const GroupAction& action,
                                              const GeneratorDistribution& dist, std::size_t m,
                                              const Metric& metric, SeededRng& rng);

}  // namespace eqt
