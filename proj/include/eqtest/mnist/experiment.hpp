#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "eqtest/avt/avt.hpp"
#include "eqtest/mnist/orientation.hpp"

namespace eqt::mnist {

/// Which symmetry is tested: D4 with g ~ U{a, b}, <a> with g = a, <b> with g = b.
enum class GroupChoice { d4, rotations, reflection };

std::string_view to_string(GroupChoice choice);
GroupChoice group_from_string(std::string_view text);

/// Which points enter the cross-class minimum behind L̂.
enum class BoundSource {
  other_digits,  ///< response-1 rows against response-0 rows and every other digit's images
  orientation,   ///< response-1 rows against response-0 rows only
};

std::string_view to_string(BoundSource source);
BoundSource bound_source_from_string(std::string_view text);

struct MnistConfig {
  GroupChoice group = GroupChoice::d4;
  BoundSource bound_source = BoundSource::other_digits;
  std::size_t m = 1000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> subsample;  ///< Lipschitz scan subsample per class
  unsigned jobs = 1;
};

struct MnistReport {
  int digit = 0;
  GroupChoice group = GroupChoice::d4;
  BoundSource bound_source = BoundSource::other_digits;
  std::size_t n = 0;
  std::size_t side = 0;
  /// True when the data has a single class: no bound exists and nothing
  /// can be rejected.
  bool vacuous = false;
  std::optional<EstimatedLipschitz> lipschitz;
  std::size_t n0 = 0;  ///< |{D > 0}|
  double p_value = 1.0;
  std::optional<AvtReport> avt;
};

/// Noiseless asymmetric variation test (threshold 0, p_t = 0) with
/// V(x, y) = L̂ ||x - y||. `other_digits` holds the images of every other
/// digit and is required for BoundSource::other_digits. Single-class data
/// is reported as vacuous without running the test.
MnistReport run_mnist_experiment(const OrientationDataset& dataset, const MnistConfig& config,
                                 const ImageDataset* other_digits = nullptr);

/// L̂ for `dataset` under config.bound_source, config.subsample and
/// config.seed. Throws BoundUnavailable for single-class data without other
/// digits.
EstimatedLipschitz estimate_mnist_bound(const OrientationDataset& dataset, const MnistConfig& config,
                                        const ImageDataset* other_digits = nullptr);

/// Same test with a bound computed beforehand by estimate_mnist_bound, so
/// several groups can share one scan. The report echoes `bound`.
MnistReport run_mnist_experiment(const OrientationDataset& dataset, const MnistConfig& config,
                                 const EstimatedLipschitz& bound);

/// Images whose label differs from `digit`.
ImageDataset images_without_label(const ImageDataset& images, std::uint8_t digit);

}  // namespace eqt::mnist
