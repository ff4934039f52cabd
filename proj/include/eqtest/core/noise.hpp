#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace eqt {

enum class NoiseKind { noiseless, gaussian, table };

/// Concentration bound t -> p_t on P(|eps_i - eps_j| > t).
///
/// For outputs with more than one coordinate the per-coordinate bound is
/// combined by a union bound over coordinates, min(1, d_Y p_t), which pairs
/// with the max-norm on outputs.
class NoiseModel {
 public:
  static NoiseModel noiseless();
  static NoiseModel gaussian(double sigma, std::size_t output_dim = 1);
  /// Pairs (t, p_t); between knots the bound steps down at each knot, and
  /// below the first knot it is 1. Throws InputError unless p is nonincreasing.
  static NoiseModel table(std::vector<std::pair<double, double>> knots, std::size_t output_dim = 1);

  /// Throws InputError when t <= 0.
  double tail(double t) const;

  NoiseKind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

 private:
  NoiseModel(NoiseKind kind, double sigma, std::size_t output_dim,
             std::vector<std::pair<double, double>> knots)
      : kind_(kind), sigma_(sigma), output_dim_(output_dim), knots_(std::move(knots)) {}

  double single_coordinate_tail(double t) const;

  NoiseKind kind_;
  double sigma_;
  std::size_t output_dim_;
  std::vector<std::pair<double, double>> knots_;
};

/// Free-function form of NoiseModel::tail.
inline double noise_tail(const NoiseModel& model, double t) { return model.tail(t); }

}  // namespace eqt
