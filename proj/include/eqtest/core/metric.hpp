#pragma once

#include <functional>
#include <span>
#include <string>

namespace eqt {

enum class MetricKind { euclidean, minkowski, custom };

/// Metric on the input space. Immutable; safe to share across threads.
class Metric {
 public:
  using Fn = std::function<double(std::span<const double>, std::span<const double>)>;

  static Metric euclidean();
  static Metric minkowski(double p);
  static Metric custom(std::string name, Fn fn);

  /// Throws InputError when the dimensions differ.
  double operator()(std::span<const double> x, std::span<const double> y) const;
  /// Callers guarantee equal dimensions.
  double distance(std::span<const double> x, std::span<const double> y) const;

  MetricKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Metric(MetricKind kind, double p, std::string name, Fn fn)
      : kind_(kind), p_(p), name_(std::move(name)), fn_(std::move(fn)) {}

  MetricKind kind_;
  double p_;
  std::string name_;
  Fn fn_;
};

enum class NormKind { euclidean, max, absolute };

/// Norm on the output space.
class OutputNorm {
 public:
  static OutputNorm euclidean() { return OutputNorm(NormKind::euclidean); }
  static OutputNorm max() { return OutputNorm(NormKind::max); }
  static OutputNorm absolute() { return OutputNorm(NormKind::absolute); }
  /// |.| for scalar outputs, max-norm otherwise.
  static OutputNorm for_dimension(std::size_t output_dim);

  double operator()(std::span<const double> y) const;
  /// |a - b| without materialising the difference.
  double distance(std::span<const double> a, std::span<const double> b) const;

  NormKind kind() const noexcept { return kind_; }
  std::string name() const;

 private:
  explicit OutputNorm(NormKind kind) : kind_(kind) {}
  NormKind kind_;
};

}  // namespace eqt
