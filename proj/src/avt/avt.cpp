#include "eqtest/avt/avt.hpp"

#include <algorithm>
#include <cmath>

#include "eqtest/avt/binomial.hpp"
#include "eqtest/avt/thresholds.hpp"
#include "eqtest/core/errors.hpp"

namespace eqt {

namespace {

struct PairTerms {
  double output_distance;
  double variation;
};

PairTerms pair_terms(const SampledPair& pair, const Dataset& data, const GroupAction& action,
                     const VariationBound& bound, const Metric& metric, const OutputNorm& norm) {
  if (pair.i >= data.size() || pair.j >= data.size()) throw InputError("pair index out of range");
  const Vec moved_output = action.apply_output(pair.g, data.output(pair.i));
  const double output_distance = norm.distance(moved_output, data.output(pair.j));
  double variation = 0.0;
  if (pair.transformed_point.empty()) {
    const Vec moved = action.apply_input(pair.g, data.input(pair.i));
    variation = bound(moved, data.input(pair.j), metric);
  } else {
    variation = bound(pair.transformed_point, data.input(pair.j), metric);
  }
  return {output_distance, variation};
}

std::vector<double> resolve_thresholds(const AvtConfig& config) {
  std::vector<double> ts = config.grid_k > 0 ? auto_threshold_grid(config.noise, config.grid_k)
                                             : config.thresholds;
  if (ts.empty()) throw ConfigError("the test needs at least one threshold");
  std::sort(ts.begin(), ts.end());
  if (std::adjacent_find(ts.begin(), ts.end()) != ts.end()) throw ConfigError("duplicate thresholds");
  for (double t : ts) {
    if (!std::isfinite(t) || t < 0.0) throw ConfigError("thresholds must be finite and nonnegative");
    if (t == 0.0 && config.noise.kind() != NoiseKind::noiseless)
      throw ConfigError("a zero threshold is only meaningful without noise");
  }
  return ts;
}

}  // namespace

double asym_statistic(const SampledPair& pair, const Dataset& data, const GroupAction& action,
                      const VariationBound& bound, const Metric& metric, const OutputNorm& norm) {
  const PairTerms terms = pair_terms(pair, data, action, bound, metric, norm);
  return terms.output_distance - terms.variation;
}

AvtReport run_avt(const Dataset& data, const GroupAction& action, const AvtConfig& config) {
  if (config.m == 0) throw ConfigError("sample count m must be at least 1");
  if (config.bound.mode() != BoundMode::known)
    throw ConfigError("an order-only variation bound needs the permutation variant (pvt)");

  AvtReport report;
  report.config = config;
  AvtConfig& resolved = report.config;
  if (!resolved.generator_dist) resolved.generator_dist = default_distribution(action);
  if (!resolved.norm) resolved.norm = OutputNorm::for_dimension(data.output_dim());
  const std::vector<double> thresholds = resolve_thresholds(resolved);
  resolved.thresholds = thresholds;

  SeededRng rng(resolved.seed, resolved.stream);
  const std::vector<SampledPair> pairs = sample_pairs_nn(data, action, *resolved.generator_dist, resolved.m,
                                                         resolved.metric, rng, {.jobs = resolved.jobs});
  std::vector<double> stats;
  stats.reserve(pairs.size());
  for (const SampledPair& pair : pairs) {
    const PairTerms terms = pair_terms(pair, data, action, resolved.bound, resolved.metric, *resolved.norm);
    const double d = terms.output_distance - terms.variation;
    stats.push_back(d);
    if (resolved.keep_samples) report.samples.push_back({pair, terms.output_distance, terms.variation, d});
  }

  report.p_value = 1.0;
  for (double t : thresholds) {
    ThresholdRow row;
    row.t = t;
    if (t == 0.0) {
      row.tail_bound = 0.0;
      row.exceedances = static_cast<std::size_t>(std::count_if(stats.begin(), stats.end(), [](double d) { return d > 0.0; }));
    } else {
      row.tail_bound = resolved.noise.tail(t);
      row.exceedances = static_cast<std::size_t>(std::count_if(stats.begin(), stats.end(), [t](double d) { return d >= t; }));
    }
    row.p_value = binomial_tail(resolved.m, row.exceedances, row.tail_bound);
    report.p_value = std::min(report.p_value, row.p_value);
    report.per_threshold.push_back(row);
  }
  return report;
}

}  // namespace eqt
