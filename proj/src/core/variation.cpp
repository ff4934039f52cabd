#include "eqtest/core/variation.hpp"

#include <cmath>

#include "eqtest/core/errors.hpp"

namespace eqt {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("Hölder exponent must lie in (0, 1]");
}

}  // namespace

VariationBound VariationBound::holder(double lipschitz, double alpha) {
  check_alpha(alpha);
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
    throw InputError("Lipschitz constant must be finite and nonnegative");
  return VariationBound(BoundMode::known, lipschitz, alpha, {});
}

VariationBound VariationBound::order(double alpha) {
  check_alpha(alpha);
  return VariationBound(BoundMode::order_only, 1.0, alpha, {});
}

VariationBound VariationBound::custom(BoundMode mode, Fn fn) {
  if (!fn) throw InputError("custom bound needs an evaluator");
  return VariationBound(mode, 1.0, 1.0, std::move(fn));
}

double VariationBound::operator()(std::span<const double> x, std::span<const double> y,
                                  const Metric& metric) const {
  if (x.size() != y.size()) throw InputError("variation bound arguments have different dimensions");
  if (fn_) return fn_(x, y);
  return at_distance(metric.distance(x, y));
}

double VariationBound::at_distance(double distance) const {
  if (fn_) throw InternalError("custom bounds cannot be evaluated from a distance");
  if (distance == 0.0) return 0.0;
  const double scaled = alpha_ == 1.0 ? distance : std::pow(distance, alpha_);
  return mode_ == BoundMode::known ? lipschitz_ * scaled : scaled;
}

VariationBound VariationBound::with_lipschitz(double lipschitz) const {
  if (mode_ != BoundMode::known || fn_) throw ConfigError("only Hölder bounds have a Lipschitz constant");
  return holder(lipschitz, alpha_);
}

}  // namespace eqt
