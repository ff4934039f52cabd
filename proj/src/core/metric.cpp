#include "eqtest/core/metric.hpp"

#include <algorithm>
#include <cmath>

#include "eqtest/core/errors.hpp"

namespace eqt {

Metric Metric::euclidean() { return Metric(MetricKind::euclidean, 2.0, "euclidean", {}); }

Metric Metric::minkowski(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("minkowski metric needs finite p >= 1");
  return Metric(MetricKind::minkowski, p, "minkowski", {});
}

Metric Metric::custom(std::string name, Fn fn) {
  if (!fn) throw InputError("custom metric needs an evaluator");
  return Metric(MetricKind::custom, 0.0, std::move(name), std::move(fn));
}

double Metric::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw InputError("metric arguments have different dimensions");
  return distance(x, y);
}

double Metric::distance(std::span<const double> x, std::span<const double> y) const {
  switch (kind_) {
    case MetricKind::euclidean: {
      double sum = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        sum += diff * diff;
      }
      return std::sqrt(sum);
    }
    case MetricKind::minkowski: {
      double sum = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) sum += std::pow(std::abs(x[k] - y[k]), p_);
      return std::pow(sum, 1.0 / p_);
    }
    case MetricKind::custom:
      return fn_(x, y);
  }
  return 0.0;
}

OutputNorm OutputNorm::for_dimension(std::size_t output_dim) {
  return output_dim <= 1 ? absolute() : max();
}

double OutputNorm::operator()(std::span<const double> y) const {
  switch (kind_) {
    case NormKind::euclidean: {
      double sum = 0.0;
      for (double v : y) sum += v * v;
      return std::sqrt(sum);
    }
    case NormKind::max: {
      double best = 0.0;
      for (double v : y) best = std::max(best, std::abs(v));
      return best;
    }
    case NormKind::absolute:
      if (y.size() != 1) throw InputError("absolute-value norm needs scalar outputs");
      return std::abs(y[0]);
  }
  return 0.0;
}

double OutputNorm::distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != b.size()) throw InputError("output vectors have different dimensions");
  switch (kind_) {
    case NormKind::euclidean: {
      double sum = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
      return std::sqrt(sum);
    }
    case NormKind::max: {
      double best = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::abs(a[k] - b[k]));
      return best;
    }
    case NormKind::absolute:
      if (a.size() != 1) throw InputError("absolute-value norm needs scalar outputs");
      return std::abs(a[0] - b[0]);
  }
  return 0.0;
}

std::string OutputNorm::name() const {
  switch (kind_) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::max: return "max";
    case NormKind::absolute: return "absolute";
  }
  return "unknown";
}

}  // namespace eqt
