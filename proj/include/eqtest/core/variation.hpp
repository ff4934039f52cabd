#pragma once

#include <functional>
#include <span>

#include "eqtest/core/metric.hpp"

namespace eqt {

enum class BoundMode {
  known,       ///< V(x,y) = L d(x,y)^alpha, L known
  order_only,  ///< only the order d(x,y)^alpha is known (L treated as 1)
};

/// Bound on |f(x) - f(y)| over the assumed function class.
class VariationBound {
 public:
  using Fn = std::function<double(std::span<const double>, std::span<const double>)>;

  static VariationBound holder(double lipschitz, double alpha = 1.0);
  static VariationBound order(double alpha = 1.0);
  /// Overrides the Hölder form. `mode` decides which test accepts it.
  static VariationBound custom(BoundMode mode, Fn fn);

  /// Throws InputError on dimension mismatch.
  double operator()(std::span<const double> x, std::span<const double> y, const Metric& metric) const;
  /// Hölder form at a precomputed distance. Not valid for custom bounds.
  double at_distance(double distance) const;

  BoundMode mode() const noexcept { return mode_; }
  double lipschitz() const noexcept { return lipschitz_; }
  double alpha() const noexcept { return alpha_; }
  bool is_custom() const noexcept { return static_cast<bool>(fn_); }

  /// Same bound with L replaced (known mode only).
  VariationBound with_lipschitz(double lipschitz) const;

 private:
  VariationBound(BoundMode mode, double lipschitz, double alpha, Fn fn)
      : mode_(mode), lipschitz_(lipschitz), alpha_(alpha), fn_(std::move(fn)) {}

  BoundMode mode_;
  double lipschitz_;
  double alpha_;
  Fn fn_;
};

}  // namespace eqt
