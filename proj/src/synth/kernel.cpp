#include "eqtest/synth/kernel.hpp"

#include <cmath>

#include "eqtest/core/errors.hpp"

namespace eqt {

KernelEstimator::KernelEstimator(double bandwidth, const GroupAction* symmetrise, Metric metric)
    : bandwidth_(bandwidth), group_(symmetrise), metric_(std::move(metric)) {
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw InputError("bandwidth must be positive");
}

double KernelEstimator::weight(std::span<const double> x, std::span<const double> xi) const {
  if (!group_) return metric_(x, xi) < bandwidth_ ? 1.0 : 0.0;
  Vec moved(x.size());
  std::size_t hits = 0;
  for (std::uint32_t g = 0; g < group_->size(); ++g) {
    group_->apply_input(ElementId{g}, x, moved);
    if (metric_(moved, xi) < bandwidth_) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(group_->size());
}

std::optional<double> KernelEstimator::predict(const Dataset& data, std::span<const double> x) const {
  if (data.output_dim() != 1) throw InputError("kernel estimator needs scalar responses");
  if (x.size() != data.input_dim()) throw InputError("query dimension does not match the dataset");
  std::vector<Vec> queries;
  if (group_) {
    for (std::uint32_t g = 0; g < group_->size(); ++g) queries.push_back(group_->apply_input(ElementId{g}, x));
  } else {
    queries.emplace_back(x.begin(), x.end());
  }
  // Counting hits per training point keeps the arithmetic identical to
  // weight(): the common 1/|G| factor cancels in the ratio.
  double weight_sum = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t hits = 0;
    for (const Vec& q : queries)
      if (metric_.distance(q, data.input(i)) < bandwidth_) ++hits;
    if (hits == 0) continue;
    weight_sum += static_cast<double>(hits);
    weighted += static_cast<double>(hits) * data.output(i)[0];
  }
  if (weight_sum == 0.0) return std::nullopt;
  return weighted / weight_sum;
}

}  // namespace eqt
