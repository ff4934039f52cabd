#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "eqtest/core/dataset.hpp"
#include "eqtest/mnist/idx.hpp"

namespace eqt::mnist {

/// Digits whose horizontal mirror image is a different symbol.
inline constexpr std::array<int, 7> kOrientedDigits{2, 3, 4, 5, 6, 7, 9};

bool is_oriented(int digit, std::span<const int> oriented = kOrientedDigits);

/// Applies a D4 element ("e", "a", "a^2", "a^3", "b", "ba", "ba^2", "ba^3")
/// to a rows×cols image. a is a counter-clockwise quarter turn, b mirrors
/// across the vertical centre line, "ba^k" applies a^k first. Throws
/// InputError for non-square images or unknown names.
Vec apply_d4(std::string_view element, std::span<const double> image, std::size_t rows, std::size_t cols);

/// Labelled dataset for one digit: a random half kept as is with response 1,
/// the other half mirrored once by b with response 1 iff the digit is not
/// oriented.
struct OrientationDataset {
  int digit = 0;
  std::size_t side = 0;
  Dataset data;
  std::vector<std::size_t> source_index;  ///< row -> index in the digit's image list
  std::vector<bool> reflected;            ///< row -> mirrored?
  std::size_t unreflected_count = 0;
};

OrientationDataset build_orientation_dataset(const ImageDataset& images_of_digit, int digit,
                                             std::span<const int> oriented, std::uint64_t seed);

/// Raised when no cross-class pair exists (single-class data), so no
/// Lipschitz estimate is possible and the test is vacuous.
class BoundUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EstimatedLipschitz {
  double value = 0.0;         ///< 1 / min cross-class distance
  double min_distance = 0.0;
  std::size_t class_one_used = 0;
  std::size_t class_zero_used = 0;  ///< response-0 rows of the dataset
  std::size_t negatives_used = 0;   ///< extra response-0 points
  bool exhaustive = true;
};

/// Reciprocal of the smallest Euclidean distance between a response-1 and a
/// response-0 point, over all pairs or over a seeded subsample of up to
/// `subsample` points per class.
EstimatedLipschitz estimate_lipschitz(const Dataset& data, std::optional<std::size_t> subsample = std::nullopt,
                                      std::uint64_t seed = 0, unsigned jobs = 1);

/// Same, with `negatives` (row-major points of the input dimension) joining
/// the response-0 class. Single-class data is fine as long as negatives
/// exist. The subsample cap applies to the negatives as well.
EstimatedLipschitz estimate_lipschitz(const Dataset& data, std::span<const double> negatives,
                                      std::optional<std::size_t> subsample = std::nullopt, std::uint64_t seed = 0,
                                      unsigned jobs = 1);

}  // namespace eqt::mnist
