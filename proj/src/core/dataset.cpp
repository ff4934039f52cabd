#include "eqtest/core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eqtest/core/errors.hpp"

namespace eqt {

namespace {

bool all_finite(const std::vector<double>& values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

Dataset::Dataset(std::size_t input_dim, std::size_t output_dim, std::vector<double> inputs,
                 std::vector<double> outputs)
    : input_dim_(input_dim),
      output_dim_(output_dim),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)) {
  if (input_dim_ == 0 || output_dim_ == 0) throw InputError("dataset dimensions must be positive");
  if (inputs_.size() % input_dim_ != 0) throw InputError("input buffer is not a whole number of rows");
  n_ = inputs_.size() / input_dim_;
  if (outputs_.size() != n_ * output_dim_) {
    throw InputError("dataset has " + std::to_string(n_) + " inputs but " +
                     std::to_string(outputs_.size() / output_dim_) + " responses");
  }
  if (n_ < 2) throw InputError("dataset needs at least 2 samples");
  if (!all_finite(inputs_) || !all_finite(outputs_)) throw InputError("dataset contains NaN or Inf");
}

Dataset Dataset::from_rows(const std::vector<Vec>& inputs, const std::vector<Vec>& outputs) {
  if (inputs.empty() || outputs.empty()) throw InputError("dataset needs at least 2 samples");
  if (inputs.size() != outputs.size()) throw InputError("input and response counts differ");
  const std::size_t dx = inputs.front().size();
  const std::size_t dy = outputs.front().size();
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(inputs.size() * dx);
  ys.reserve(outputs.size() * dy);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != dx) throw InputError("input " + std::to_string(i) + " has wrong dimension");
    if (outputs[i].size() != dy) throw InputError("response " + std::to_string(i) + " has wrong dimension");
    xs.insert(xs.end(), inputs[i].begin(), inputs[i].end());
    ys.insert(ys.end(), outputs[i].begin(), outputs[i].end());
  }
  return Dataset(dx, dy, std::move(xs), std::move(ys));
}

Dataset Dataset::scaled_outputs(double factor) const {
  std::vector<double> ys = outputs_;
  for (double& y : ys) y *= factor;
  return Dataset(input_dim_, output_dim_, inputs_, std::move(ys));
}

}  // namespace eqt
