#include "eqtest/pvt/pvt.hpp"

#include <algorithm>

#include "eqtest/core/errors.hpp"
#include "eqtest/pvt/quantile.hpp"
#include "eqtest/util/parallel.hpp"

namespace eqt {

std::string_view to_string(Pairing pairing) {
  return pairing == Pairing::nearest_neighbour ? "nn" : "uniform";
}

Pairing pairing_from_string(std::string_view text) {
  if (text == "nn" || text == "nearest_neighbour") return Pairing::nearest_neighbour;
  if (text == "uniform") return Pairing::uniform;
  throw ConfigError("pairing must be 'nn' or 'uniform'");
}

double ratio_statistic(const SampledPair& pair, const Dataset& data, const GroupAction& action,
                       const VariationBound& bound, const Metric& metric, const OutputNorm& norm) {
  if (pair.i >= data.size() || pair.j >= data.size()) throw InputError("pair index out of range");
  const Vec moved_output = action.apply_output(pair.g, data.output(pair.i));
  const double numerator = norm.distance(moved_output, data.output(pair.j));
  const Vec moved = pair.transformed_point.empty() ? action.apply_input(pair.g, data.input(pair.i))
                                                   : pair.transformed_point;
  const double denominator = bound(moved, data.input(pair.j), metric);
  if (!(denominator > 0.0)) throw InternalError("ratio statistic with a non-positive variation order");
  return numerator / denominator;
}

namespace {

std::vector<double> ratios(const std::vector<SampledPair>& pairs, const Dataset& data, const GroupAction& action,
                           const PvtConfig& config) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const SampledPair& pair : pairs)
    out.push_back(ratio_statistic(pair, data, action, config.bound, config.metric, *config.norm));
  return out;
}

}  // namespace

PvtReport run_pvt(const Dataset& data, const GroupAction& action, const PvtConfig& config) {
  return run_pvt_grid(data, action, config, {config.q}).front();
}

std::vector<PvtReport> run_pvt_grid(const Dataset& data, const GroupAction& action, const PvtConfig& config,
                                    const std::vector<double>& qs) {
  if (config.m == 0) throw ConfigError("sample count m must be at least 1");
  if (config.batches == 0) throw ConfigError("batch count B must be at least 1");
  if (qs.empty()) throw ConfigError("at least one quantile level is required");
  for (double q : qs)
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("quantile q must lie in (0, 1]");

  PvtConfig resolved = config;
  if (!resolved.generator_dist) resolved.generator_dist = default_distribution(action);
  if (!resolved.norm) resolved.norm = OutputNorm::for_dimension(data.output_dim());

  // quantiles[k][r]: level qs[r] of batch k.
  std::vector<std::vector<double>> quantiles(resolved.batches);
  parallel_for(resolved.batches, resolved.jobs, [&](std::size_t k) {
    SeededRng rng(resolved.seed, derive_seed(resolved.stream, {k + 1}));
    const auto pairs =
        resolved.batch_pairing == Pairing::nearest_neighbour
            ? sample_pairs_nn(data, action, *resolved.generator_dist, resolved.m, resolved.metric, rng,
                              {.positive_only = true, .jobs = 1})
            : sample_pairs_uniform(data, action, *resolved.generator_dist, resolved.m, resolved.metric, rng);
    std::vector<double> s = ratios(pairs, data, action, resolved);
    std::sort(s.begin(), s.end());
    for (double q : qs) quantiles[k].push_back(quantile_type7_sorted(s, q));
  });

  SeededRng rng(resolved.seed, derive_seed(resolved.stream, {0}));
  const auto identity = GeneratorDistribution::point_mass(action.identity());
  const auto baseline_pairs =
      resolved.baseline == Pairing::nearest_neighbour
          ? sample_pairs_nn(data, action, identity, resolved.m, resolved.metric, rng,
                            {.positive_only = true, .jobs = resolved.jobs})
          : sample_pairs_uniform(data, action, identity, resolved.m, resolved.metric, rng);
  std::vector<double> s0 = ratios(baseline_pairs, data, action, resolved);
  std::vector<double> sorted0 = s0;
  std::sort(sorted0.begin(), sorted0.end());

  std::vector<PvtReport> reports;
  const double b = static_cast<double>(resolved.batches);
  for (std::size_t r = 0; r < qs.size(); ++r) {
    PvtReport report;
    report.config = resolved;
    report.config.q = qs[r];
    if (resolved.keep_samples) report.baseline_ratios = s0;
    report.baseline_quantile = quantile_type7_sorted(sorted0, qs[r]);
    for (std::size_t k = 0; k < resolved.batches; ++k) {
      report.batch_quantiles.push_back(quantiles[k][r]);
      if (quantiles[k][r] <= report.baseline_quantile) ++report.count_at_or_below;
    }
    report.p_value = static_cast<double>(report.count_at_or_below) / b;
    report.p_value_plus_one = (1.0 + static_cast<double>(report.count_at_or_below)) / (1.0 + b);
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace eqt
