#include "eqtest/mnist/orientation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "eqtest/core/errors.hpp"
#include "eqtest/core/group_action.hpp"
#include "eqtest/core/metric.hpp"
#include "eqtest/sampling/rng.hpp"
#include "eqtest/util/parallel.hpp"

namespace eqt::mnist {

bool is_oriented(int digit, std::span<const int> oriented) {
  return std::find(oriented.begin(), oriented.end(), digit) != oriented.end();
}

Vec apply_d4(std::string_view element, std::span<const double> image, std::size_t rows, std::size_t cols) {
  if (rows != cols) throw InputError("D4 acts on square images only");
  if (image.size() != rows * cols) throw InputError("image buffer does not match its shape");
  bool reflect = false;
  std::string_view rest = element;
  if (!rest.empty() && rest.front() == 'b') {
    reflect = true;
    rest.remove_prefix(1);
  }
  unsigned turns = 0;
  if (rest == "" || (rest == "e" && !reflect)) turns = 0;
  else if (rest == "a") turns = 1;
  else if (rest == "a^2") turns = 2;
  else if (rest == "a^3") turns = 3;
  else throw InputError("unknown D4 element '" + std::string(element) + "'");
  const SignedPermutation perm = d4_pixel_permutation(rows, turns, reflect);
  Vec out(image.size());
  perm.apply(image, out);
  return out;
}

OrientationDataset build_orientation_dataset(const ImageDataset& images_of_digit, int digit,
                                             std::span<const int> oriented, std::uint64_t seed) {
  const std::size_t count = images_of_digit.size();
  if (count < 2) throw InputError("orientation dataset needs at least 2 images");
  if (images_of_digit.rows != images_of_digit.cols) throw InputError("images must be square");
  const std::size_t side = images_of_digit.rows;

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  std::shuffle(order.begin(), order.end(), rng.engine());
  const std::size_t kept = (count + 1) / 2;
  const double mirrored_label = is_oriented(digit, oriented) ? 0.0 : 1.0;
  const SignedPermutation mirror = d4_pixel_permutation(side, 0, true);

  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(count * side * side);
  OrientationDataset out{digit, side, Dataset(1, 1, {0.0, 0.0}, {0.0, 0.0}), {}, {}, kept};
  Vec buffer(side * side);
  for (std::size_t r = 0; r < count; ++r) {
    const auto img = images_of_digit.image(order[r]);
    const bool reflect = r >= kept;
    if (reflect) {
      mirror.apply(img, buffer);
      xs.insert(xs.end(), buffer.begin(), buffer.end());
    } else {
      xs.insert(xs.end(), img.begin(), img.end());
    }
    ys.push_back(reflect ? mirrored_label : 1.0);
    out.source_index.push_back(order[r]);
    out.reflected.push_back(reflect);
  }
  out.data = Dataset(side * side, 1, std::move(xs), std::move(ys));
  return out;
}

EstimatedLipschitz estimate_lipschitz(const Dataset& data, std::optional<std::size_t> subsample,
                                      std::uint64_t seed, unsigned jobs) {
  return estimate_lipschitz(data, std::span<const double>{}, subsample, seed, jobs);
}

EstimatedLipschitz estimate_lipschitz(const Dataset& data, std::span<const double> negatives,
                                      std::optional<std::size_t> subsample, std::uint64_t seed, unsigned jobs) {
  const std::size_t dim = data.input_dim();
  if (negatives.size() % dim != 0) throw InputError("negative points do not match the input dimension");
  std::vector<std::span<const double>> ones;
  std::vector<std::span<const double>> zeros;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = data.output(i)[0];
    if (y == 1.0) ones.push_back(data.input(i));
    else if (y == 0.0) zeros.push_back(data.input(i));
    else throw InputError("Lipschitz estimate needs 0/1 responses");
  }
  std::vector<std::span<const double>> others;
  for (std::size_t k = 0; k < negatives.size(); k += dim) others.push_back(negatives.subspan(k, dim));
  if (ones.empty() || (zeros.empty() && others.empty()))
    throw BoundUnavailable("all responses are equal: no cross-class pair, the bound is unavailable and the test vacuous");

  EstimatedLipschitz est;
  est.exhaustive = true;
  if (subsample) {
    if (*subsample == 0) throw InputError("subsample size must be positive");
    SeededRng rng(seed);
    // Shuffling index lists keeps the kept points in their original order.
    for (auto* cls : {&ones, &zeros, &others}) {
      if (cls->size() <= *subsample) continue;
      std::vector<std::size_t> idx(cls->size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::shuffle(idx.begin(), idx.end(), rng.engine());
      idx.resize(*subsample);
      std::sort(idx.begin(), idx.end());
      std::vector<std::span<const double>> kept;
      for (std::size_t k : idx) kept.push_back((*cls)[k]);
      *cls = std::move(kept);
      est.exhaustive = false;
    }
  }
  est.class_one_used = ones.size();
  est.class_zero_used = zeros.size();
  est.negatives_used = others.size();
  zeros.insert(zeros.end(), others.begin(), others.end());

  // Pairs are screened on compact copies of the highest-variance
  // coordinates and abandoned once a partial sum clearly exceeds the best
  // complete sum found by any worker. Float sums of nonnegative terms never
  // decrease, and the slack covers reordering error, so an abandoned pair
  // cannot be the minimum. Survivors are summed in Metric::distance's order,
  // which makes the result exact and independent of scheduling.
  std::vector<double> mean(dim, 0.0), var(dim, 0.0);
  for (const auto* cls : {&zeros, &ones})
    for (const auto& v : *cls)
      for (std::size_t k = 0; k < dim; ++k) mean[k] += v[k];
  const double total = static_cast<double>(zeros.size() + ones.size());
  for (double& m : mean) m /= total;
  for (const auto* cls : {&zeros, &ones})
    for (const auto& v : *cls)
      for (std::size_t k = 0; k < dim; ++k) var[k] += (v[k] - mean[k]) * (v[k] - mean[k]);
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < dim; ++k)
    if (var[k] > 0.0) order.push_back(k);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return var[l] > var[r]; });
  const std::size_t screen_dim = std::min<std::size_t>(order.size(), 128);
  auto compact = [&](const std::vector<std::span<const double>>& points) {
    std::vector<double> out(points.size() * screen_dim);
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t k = 0; k < screen_dim; ++k) out[i * screen_dim + k] = points[i][order[k]];
    return out;
  };
  const std::vector<double> screen_ones = compact(ones);
  const std::vector<double> screen_zeros = compact(zeros);

  constexpr double kSlack = 1.0 + 1e-9;
  constexpr std::size_t kBlock = 8;
  constexpr std::size_t kTile = 512;
  std::atomic<double> best_sq{std::numeric_limits<double>::infinity()};
  for (std::size_t tile = 0; tile < zeros.size(); tile += kTile) {
    const std::size_t tile_end = std::min(zeros.size(), tile + kTile);
    parallel_for(ones.size(), jobs, [&](std::size_t a) {
      const double* sx = screen_ones.data() + a * screen_dim;
      for (std::size_t b = tile; b < tile_end; ++b) {
        const double* sy = screen_zeros.data() + b * screen_dim;
        const double cutoff = best_sq.load(std::memory_order_relaxed) * kSlack;
        double partial = 0.0;
        bool abandoned = false;
        for (std::size_t k = 0; k < screen_dim && !abandoned;) {
          const std::size_t end = std::min(screen_dim, k + kBlock);
          for (; k < end; ++k) {
            const double diff = sx[k] - sy[k];
            partial += diff * diff;
          }
          abandoned = partial > cutoff;
        }
        if (abandoned) continue;
        const double* x = ones[a].data();
        const double* y = zeros[b].data();
        double sum = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double diff = x[k] - y[k];
          sum += diff * diff;
        }
        double current = best_sq.load(std::memory_order_relaxed);
        while (sum < current && !best_sq.compare_exchange_weak(current, sum, std::memory_order_relaxed)) {
        }
      }
    });
  }
  est.min_distance = std::sqrt(best_sq.load());
  if (!(est.min_distance > 0.0))
    throw BoundUnavailable("a point appears in both classes: the variation bound would be infinite");
  est.value = 1.0 / est.min_distance;
  return est;
}

}  // namespace eqt::mnist
