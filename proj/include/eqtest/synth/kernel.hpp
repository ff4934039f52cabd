#pragma once

#include <optional>
#include <span>

#include "eqtest/core/dataset.hpp"
#include "eqtest/core/group_action.hpp"
#include "eqtest/core/metric.hpp"

namespace eqt {

/// Local constant (Nadaraya-Watson) estimator with the rectangular kernel
/// K_h(x, X_i) = 1{d(x, X_i) < h}. When a group action is supplied the
/// kernel is symmetrised over every element of the group:
/// K_G(x, X_i) = (1/|G|) sum_g K_h(g·x, X_i).
class KernelEstimator {
 public:
  explicit KernelEstimator(double bandwidth, const GroupAction* symmetrise = nullptr,
                           Metric metric = Metric::euclidean());

  double bandwidth() const noexcept { return bandwidth_; }
  bool symmetrised() const noexcept { return group_ != nullptr; }

  /// K_h or K_G.
  double weight(std::span<const double> x, std::span<const double> xi) const;

  /// Weighted mean of the scalar responses; std::nullopt when every weight
  /// is zero (empty window).
  std::optional<double> predict(const Dataset& data, std::span<const double> x) const;

 private:
  double bandwidth_;
  const GroupAction* group_;
  Metric metric_;
};

/// Free-function form of KernelEstimator::predict.
inline std::optional<double> nadaraya_watson_predict(const KernelEstimator& estimator, const Dataset& data,
                                                     std::span<const double> x) {
  return estimator.predict(data, x);
}

}  // namespace eqt
