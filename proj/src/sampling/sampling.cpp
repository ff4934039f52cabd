#include "eqtest/sampling/sampling.hpp"

#include <limits>

#include "eqtest/core/errors.hpp"
#include "eqtest/util/parallel.hpp"

namespace eqt {

Neighbour nearest_neighbour(std::span<const double> query, const Dataset& data, const Metric& metric,
                            std::optional<std::size_t> exclude, bool positive_only) {
  if (query.size() != data.input_dim()) throw InputError("query dimension does not match the dataset");
  bool found = false;
  Neighbour best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (exclude && *exclude == k) continue;
    const double d = metric.distance(query, data.input(k));
    if (positive_only && d == 0.0) continue;
    if (!found || d < best.distance) {
      best = {k, d};
      found = true;
    }
  }
  if (!found) throw InputError("nearest-neighbour search has no candidates");
  return best;
}

ElementId sample_generator(const GeneratorDistribution& dist, SeededRng& rng) { return dist.sample(rng); }

std::vector<SampledPair> sample_pairs_nn(const Dataset& data, const GroupAction& action,
                                         const GeneratorDistribution& dist, std::size_t m,
                                         const Metric& metric, SeededRng& rng, NnPairOptions options) {
  if (m == 0) throw InputError("sample count m must be at least 1");
  std::vector<SampledPair> pairs(m);
  // Random draws happen sequentially so the result is independent of `jobs`.
  for (auto& pair : pairs) {
    pair.g = dist.sample(rng);
    pair.i = rng.uniform_index(data.size());
  }
  parallel_for(m, options.jobs, [&](std::size_t idx) {
    SampledPair& pair = pairs[idx];
    pair.transformed_point = action.apply_input(pair.g, data.input(pair.i));
    const bool lands_on_self = metric.distance(pair.transformed_point, data.input(pair.i)) == 0.0;
    const Neighbour nn =
        nearest_neighbour(pair.transformed_point, data, metric,
                          lands_on_self ? std::optional<std::size_t>(pair.i) : std::nullopt,
                          options.positive_only);
    pair.j = nn.index;
    pair.pair_distance = nn.distance;
  });
  return pairs;
}

std::vector<SampledPair> sample_pairs_uniform(const Dataset& data, const GroupAction& action,
                                              const GeneratorDistribution& dist, std::size_t m,
                                              const Metric& metric, SeededRng& rng) {
  if (m == 0) throw InputError("sample count m must be at least 1");
  constexpr int kMaxRedraws = 10000;
  std::vector<SampledPair> pairs;
  pairs.reserve(m);
  Vec moved(data.input_dim());
  for (std::size_t idx = 0; idx < m; ++idx) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) throw InputError("could not draw a pair at positive distance");
      SampledPair pair;
      pair.g = dist.sample(rng);
      pair.i = rng.uniform_index(data.size());
      pair.j = rng.uniform_index(data.size());
      action.apply_input(pair.g, data.input(pair.i), moved);
      pair.pair_distance = metric.distance(moved, data.input(pair.j));
      if (pair.pair_distance == 0.0) continue;
      pair.transformed_point = moved;
      pairs.push_back(std::move(pair));
      break;
    }
  }
  return pairs;
}

}  // namespace eqt
