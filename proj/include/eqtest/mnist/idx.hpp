#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace eqt::mnist {

/// Raw IDX tensor of unsigned bytes (type code 0x08).
struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;
};

/// Reads an IDX file, gzip-compressed or plain. Throws FormatError on a bad
/// magic number, an unsupported element type, or a truncated payload.
IdxArray read_idx(const std::filesystem::path& path);
/// Writes an IDX file; gzip-compressed when `gzip` is set.
void write_idx(const std::filesystem::path& path, const IdxArray& array, bool gzip = false);

/// Greyscale images with intensities scaled to [0, 1], plus optional labels.
struct ImageDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;  ///< row-major, image after image
  std::vector<std::uint8_t> labels;

  std::size_t size() const noexcept { return rows * cols == 0 ? 0 : pixels.size() / (rows * cols); }
  std::size_t pixel_count() const noexcept { return rows * cols; }
  std::span<const double> image(std::size_t i) const {
    return {pixels.data() + i * pixel_count(), pixel_count()};
  }
  /// Images carrying `label`, in file order.
  ImageDataset with_label(std::uint8_t label) const;
};

/// Image file (magic 0x00000803), bytes scaled by 1/255.
ImageDataset read_idx_images(const std::filesystem::path& path);
/// Label file (magic 0x00000801).
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);
/// Both files; throws FormatError when the counts differ.
ImageDataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace eqt::mnist
