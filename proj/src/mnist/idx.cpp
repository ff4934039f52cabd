#include "eqtest/mnist/idx.hpp"

#include <zlib.h>

#include <cmath>
#include <memory>
#include <string>

#include "eqtest/core/errors.hpp"

namespace eqt::mnist {

namespace {

struct GzCloser {
  void operator()(gzFile f) const { gzclose(f); }
};
using GzHandle = std::unique_ptr<gzFile_s, GzCloser>;

// gzread reads plain files transparently.
std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  GzHandle file(gzopen(path.string().c_str(), "rb"));
  if (!file) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes;
  std::uint8_t buffer[1 << 16];
  for (;;) {
    const int got = gzread(file.get(), buffer, sizeof buffer);
    if (got < 0) throw FormatError("read error in " + path.string());
    if (got == 0) break;
    bytes.insert(bytes.end(), buffer, buffer + got);
  }
  return bytes;
}

std::uint32_t big_endian(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

void put_big_endian(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

IdxArray read_idx(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = slurp(path);
  if (bytes.size() < 4) throw FormatError(path.string() + ": truncated IDX header");
  if (bytes[0] != 0 || bytes[1] != 0) throw FormatError(path.string() + ": bad IDX magic number");
  if (bytes[2] != 0x08) throw FormatError(path.string() + ": only unsigned-byte IDX files are supported");
  const std::size_t rank = bytes[3];
  if (rank == 0) throw FormatError(path.string() + ": IDX file declares no dimensions");
  const std::size_t header = 4 + 4 * rank;
  if (bytes.size() < header) throw FormatError(path.string() + ": truncated IDX header");
  IdxArray array;
  std::size_t count = 1;
  for (std::size_t k = 0; k < rank; ++k) {
    array.dims.push_back(big_endian(bytes.data() + 4 + 4 * k));
    count *= array.dims.back();
  }
  if (bytes.size() - header != count)
    throw FormatError(path.string() + ": payload has " + std::to_string(bytes.size() - header) +
                      " bytes, header declares " + std::to_string(count));
  array.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return array;
}

void write_idx(const std::filesystem::path& path, const IdxArray& array, bool gzip) {
  if (array.dims.empty() || array.dims.size() > 255) throw InputError("IDX rank must be in 1..255");
  std::size_t count = 1;
  for (auto d : array.dims) count *= d;
  if (count != array.data.size()) throw InputError("IDX dims do not match the payload size");
  std::vector<std::uint8_t> bytes{0, 0, 0x08, static_cast<std::uint8_t>(array.dims.size())};
  for (auto d : array.dims) put_big_endian(bytes, d);
  bytes.insert(bytes.end(), array.data.begin(), array.data.end());
  GzHandle file(gzopen(path.string().c_str(), gzip ? "wb9" : "wbT"));
  if (!file) throw FormatError("cannot create " + path.string());
  std::size_t written = 0;
  while (written < bytes.size()) {
    const auto chunk = static_cast<unsigned>(std::min<std::size_t>(bytes.size() - written, 1u << 20));
    if (gzwrite(file.get(), bytes.data() + written, chunk) != static_cast<int>(chunk))
      throw FormatError("write error in " + path.string());
    written += chunk;
  }
}

ImageDataset ImageDataset::with_label(std::uint8_t label) const {
  if (labels.size() != size()) throw InputError("dataset has no labels for every image");
  ImageDataset out;
  out.rows = rows;
  out.cols = cols;
  for (std::size_t i = 0; i < size(); ++i) {
    if (labels[i] != label) continue;
    const auto img = image(i);
    out.pixels.insert(out.pixels.end(), img.begin(), img.end());
    out.labels.push_back(label);
  }
  return out;
}

ImageDataset read_idx_images(const std::filesystem::path& path) {
  const IdxArray array = read_idx(path);
  if (array.dims.size() != 3) throw FormatError(path.string() + ": image file must have 3 dimensions (magic 0x00000803)");
  ImageDataset out;
  out.rows = array.dims[1];
  out.cols = array.dims[2];
  out.pixels.reserve(array.data.size());
  for (std::uint8_t b : array.data) out.pixels.push_back(static_cast<double>(b) / 255.0);
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  IdxArray array = read_idx(path);
  if (array.dims.size() != 1) throw FormatError(path.string() + ": label file must have 1 dimension (magic 0x00000801)");
  return std::move(array.data);
}

ImageDataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels) {
  ImageDataset out = read_idx_images(images);
  out.labels = read_idx_labels(labels);
  if (out.labels.size() != out.size())
    throw FormatError("label count " + std::to_string(out.labels.size()) + " does not match image count " +
                      std::to_string(out.size()));
  return out;
}

}  // namespace eqt::mnist
