#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqtest/core/dataset.hpp"
#include "eqtest/core/generator_distribution.hpp"
#include "eqtest/core/group_action.hpp"
#include "eqtest/core/metric.hpp"
#include "eqtest/core/noise.hpp"
#include "eqtest/core/variation.hpp"
#include "eqtest/sampling/sampling.hpp"

namespace eqt {

struct AvtConfig {
  std::size_t m = 0;
  /// Explicit thresholds; any order, duplicates rejected. Ignored when
  /// grid_k > 0. A threshold of 0 is only allowed for noiseless models and
  /// then counts D > 0.
  std::vector<double> thresholds;
  std::size_t grid_k = 0;
  NoiseModel noise = NoiseModel::noiseless();
  VariationBound bound = VariationBound::holder(1.0);
  /// Defaults to default_distribution(action).
  std::optional<GeneratorDistribution> generator_dist;
  Metric metric = Metric::euclidean();
  /// Defaults to OutputNorm::for_dimension(d_Y).
  std::optional<OutputNorm> norm;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned jobs = 1;
  bool keep_samples = false;
};

struct ThresholdRow {
  double t = 0.0;
  double tail_bound = 0.0;  ///< p_t
  std::size_t exceedances = 0;  ///< N_t
  double p_value = 1.0;
};

struct AvtSample {
  SampledPair pair;
  double output_distance = 0.0;  ///< |g⋆Y_i - Y_j|
  double variation = 0.0;        ///< V(g·X_i, X_j)
  double statistic = 0.0;        ///< D
};

struct AvtReport {
  double p_value = 1.0;
  std::vector<ThresholdRow> per_threshold;  ///< sorted by t
  std::vector<AvtSample> samples;           ///< only with keep_samples
  AvtConfig config;                         ///< resolved (distribution and norm filled in)
};

/// D = |g⋆Y_i - Y_j| - V(g·X_i, X_j); may be negative.
double asym_statistic(const SampledPair& pair, const Dataset& data, const GroupAction& action,
                      const VariationBound& bound, const Metric& metric, const OutputNorm& norm);

/// Asymmetric variation test. The D statistics are drawn once and reused for
/// every threshold; the reported p-value is the minimum over thresholds.
/// Throws ConfigError for an order-only bound.
AvtReport run_avt(const Dataset& data, const GroupAction& action, const AvtConfig& config);

}  // namespace eqt
