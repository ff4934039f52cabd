#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "eqtest/core/dataset.hpp"
#include "eqtest/sampling/rng.hpp"

namespace eqt {

enum class TargetKind {
  exp_abs_first,  ///< f_d(x) = exp(-|x_1|); f_2 is the d = 2 case
  exp_norm,       ///< f_sim(x) = exp(-||x||_2)
  norm,           ///< f_3(x) = ||x||_2
  abs_first,      ///< f_4(x) = |x_1|
};

/// Synthetic regression function E(Y | X = x) = f(x).
class SyntheticTarget {
 public:
  SyntheticTarget(TargetKind kind, std::size_t dim);
  /// Accepts "f2", "fd", "fsim", "f3", "f4" (an underscore after f is allowed).
  static SyntheticTarget from_name(std::string_view name, std::size_t dim);

  double operator()(std::span<const double> x) const;

  TargetKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::string name() const;

 private:
  TargetKind kind_;
  std::size_t dim_;
};

/// Mean-zero additive noise.
class NoiseSpec {
 public:
  enum class Kind { none, gaussian, uniform };

  static NoiseSpec none() { return NoiseSpec(Kind::none, 0.0); }
  static NoiseSpec gaussian(double sigma);
  /// Uniform on (-half_width, half_width).
  static NoiseSpec uniform(double half_width);

  double draw(SeededRng& rng) const;
  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }

 private:
  NoiseSpec(Kind kind, double scale) : kind_(kind), scale_(scale) {}
  Kind kind_;
  double scale_;
};

/// Law of X.
class InputLaw {
 public:
  enum class Kind { gaussian, ball };

  /// N(0, sd^2 I_d); the default sd = 2 gives N(0, 4 I_d).
  static InputLaw gaussian(double sd = 2.0);
  /// Uniform on the Euclidean ball B(0, radius).
  static InputLaw ball(double radius = 4.0);
  /// "gaussian" or "ball".
  static InputLaw from_name(std::string_view name);

  void draw(SeededRng& rng, std::span<double> out) const;
  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  std::string name() const;

 private:
  InputLaw(Kind kind, double scale) : kind_(kind), scale_(scale) {}
  Kind kind_;
  double scale_;
};

/// Y_i = f(X_i) + eps_i with scalar responses; reproducible given seed.
Dataset generate_dataset(const SyntheticTarget& target, const InputLaw& law, const NoiseSpec& noise,
                         std::size_t n, std::uint64_t seed);

}  // namespace eqt
