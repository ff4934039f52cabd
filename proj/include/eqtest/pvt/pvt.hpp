#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "eqtest/core/dataset.hpp"
#include "eqtest/core/generator_distribution.hpp"
#include "eqtest/core/group_action.hpp"
#include "eqtest/core/metric.hpp"
#include "eqtest/core/variation.hpp"
#include "eqtest/sampling/sampling.hpp"

namespace eqt {

/// How J(j) is chosen for a batch or for the identity baseline.
enum class Pairing {
  nearest_neighbour,  ///< nearest neighbour of g·X_I(j) at positive distance
  uniform,            ///< uniform, zero-distance pairs redrawn
};

std::string_view to_string(Pairing pairing);
Pairing pairing_from_string(std::string_view text);

struct PvtConfig {
  std::size_t m = 0;
  std::size_t batches = 100;  ///< B
  double q = 0.95;
  VariationBound bound = VariationBound::order(1.0);
  std::optional<GeneratorDistribution> generator_dist;
  Pairing baseline = Pairing::nearest_neighbour;
  /// Pairing of the B transformed batches. Uniform by default; with
  /// nearest-neighbour batches and baseline both samples look at the same
  /// local scale.
  Pairing batch_pairing = Pairing::uniform;
  Metric metric = Metric::euclidean();
  std::optional<OutputNorm> norm;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned jobs = 1;
  bool keep_samples = false;
};

struct PvtReport {
  double p_value = 1.0;             ///< |{k : A_k <= A_0}| / B
  double p_value_plus_one = 1.0;    ///< (1 + count) / (1 + B), diagnostic
  std::size_t count_at_or_below = 0;
  double baseline_quantile = 0.0;   ///< A_0
  std::vector<double> batch_quantiles;  ///< A_1..A_B
  std::vector<double> baseline_ratios;  ///< S^e values, only with keep_samples
  PvtConfig config;
};

/// S = |g⋆Y_i - Y_j| / 𝒱(g·X_i, X_j). Throws InternalError if the
/// denominator is not positive.
double ratio_statistic(const SampledPair& pair, const Dataset& data, const GroupAction& action,
                       const VariationBound& bound, const Metric& metric, const OutputNorm& norm);

/// Permutation variant: B batches of m pairs under sampled g, each
/// reduced to its q-quantile A_k, compared against the identity baseline A_0.
/// Each batch and the baseline draw from their own RNG stream.
PvtReport run_pvt(const Dataset& data, const GroupAction& action, const PvtConfig& config);

/// run_pvt for several quantile levels on one shared set of samples; entry k
/// equals run_pvt with q = qs[k].
std::vector<PvtReport> run_pvt_grid(const Dataset& data, const GroupAction& action, const PvtConfig& config,
                                    const std::vector<double>& qs);

}  // namespace eqt
