#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eqt {

using Vec = std::vector<double>;

/// Paired sample {(X_i, Y_i)} stored row-major.
///
/// Invariants (checked on construction): n >= 2, every input has the same
/// dimension, every response has the same dimension, all coordinates finite.
class Dataset {
 public:
  Dataset(std::size_t input_dim, std::size_t output_dim, std::vector<double> inputs,
          std::vector<double> outputs);

  static Dataset from_rows(const std::vector<Vec>& inputs, const std::vector<Vec>& outputs);

  std::size_t size() const noexcept { return n_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }

  std::span<const double> input(std::size_t i) const {
    return {inputs_.data() + i * input_dim_, input_dim_};
  }
  std::span<const double> output(std::size_t i) const {
    return {outputs_.data() + i * output_dim_, output_dim_};
  }

  const std::vector<double>& inputs() const noexcept { return inputs_; }
  const std::vector<double>& outputs() const noexcept { return outputs_; }

  /// Same inputs, responses multiplied by `factor`.
  Dataset scaled_outputs(double factor) const;

 private:
  std::size_t n_ = 0;
  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
  std::vector<double> inputs_;
  std::vector<double> outputs_;
};

}  // namespace eqt
