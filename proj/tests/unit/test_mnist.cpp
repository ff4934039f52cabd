#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "eqtest/core/errors.hpp"
#include "eqtest/io/json.hpp"
#include "eqtest/mnist/experiment.hpp"
#include "eqtest/mnist/idx.hpp"
#include "eqtest/mnist/orientation.hpp"

using namespace eqt;
using namespace eqt::mnist;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eqtest_test_mnist";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

const fs::path kData = fs::path(EQTEST_DATA_DIR) / "mnist5k";

ImageDataset real_images() {
  return load_mnist(kData / "train-images-idx3-ubyte.gz", kData / "train-labels-idx1-ubyte.gz");
}

}  // namespace

TEST_CASE("IDX round trip") {
  IdxArray a{{3, 2, 2}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 255}};
  for (bool gzip : {false, true}) {
    const fs::path p = scratch(gzip ? "rt.idx.gz" : "rt.idx");
    write_idx(p, a, gzip);
    const IdxArray b = read_idx(p);
    CHECK(b.dims == a.dims);
    CHECK(b.data == a.data);
  }
  write_idx(scratch("plain.idx"), a, false);
  std::ifstream f(scratch("plain.idx"), std::ios::binary);
  std::vector<char> header(8);
  f.read(header.data(), 8);
  CHECK(header == std::vector<char>{0, 0, 8, 3, 0, 0, 0, 3});

  const ImageDataset imgs = read_idx_images(scratch("plain.idx"));
  CHECK(imgs.size() == 3);
  CHECK(imgs.rows == 2);
  CHECK(imgs.image(2)[3] == 1.0);
  CHECK(imgs.image(0)[1] == doctest::Approx(1.0 / 255.0));
}

TEST_CASE("IDX errors") {
  write_bytes(scratch("magic.idx"), {1, 0, 8, 1, 0, 0, 0, 1, 5});
  CHECK_THROWS_AS(read_idx(scratch("magic.idx")), FormatError);
  write_bytes(scratch("type.idx"), {0, 0, 0x0D, 1, 0, 0, 0, 1, 5, 5, 5, 5});
  CHECK_THROWS_AS(read_idx(scratch("type.idx")), FormatError);
  write_bytes(scratch("short.idx"), {0, 0, 8, 1, 0, 0, 0, 4, 5, 5});
  CHECK_THROWS_AS(read_idx(scratch("short.idx")), FormatError);
  write_bytes(scratch("header.idx"), {0, 0, 8, 3, 0, 0});
  CHECK_THROWS_AS(read_idx(scratch("header.idx")), FormatError);
  CHECK_THROWS_AS(read_idx(scratch("missing.idx")), FormatError);

  write_idx(scratch("labels.idx"), IdxArray{{2}, {1, 2}});
  write_idx(scratch("images.idx"), IdxArray{{3, 1, 1}, {0, 0, 0}});
  CHECK_THROWS_AS(load_mnist(scratch("images.idx"), scratch("labels.idx")), FormatError);
  CHECK_THROWS_AS(read_idx_images(scratch("labels.idx")), FormatError);
  CHECK_THROWS_AS(read_idx_labels(scratch("images.idx")), FormatError);
}

TEST_CASE("D4 on images") {
  const Vec img{1, 2, 3, 4};
  CHECK(apply_d4("e", img, 2, 2) == img);
  CHECK(apply_d4("b", img, 2, 2) == Vec{2, 1, 4, 3});
  CHECK(apply_d4("a", img, 2, 2) == Vec{2, 4, 1, 3});
  CHECK_THROWS_AS(apply_d4("c", img, 2, 2), InputError);
  CHECK_THROWS_AS(apply_d4("a", Vec{1, 2, 3, 4, 5, 6}, 2, 3), InputError);

  SeededRng rng(3);
  Vec x(25);
  for (double& v : x) v = rng.uniform01();
  auto a = [](const Vec& v) { return apply_d4("a", v, 5, 5); };
  auto b = [](const Vec& v) { return apply_d4("b", v, 5, 5); };
  CHECK(a(a(a(a(x)))) == x);
  CHECK(b(b(x)) == x);
  CHECK(b(a(b(x))) == apply_d4("a^3", x, 5, 5));
  CHECK(apply_d4("ba", x, 5, 5) == b(a(x)));
  CHECK(apply_d4("ba^2", x, 5, 5) == b(a(a(x))));
  CHECK(apply_d4("a^2", x, 5, 5) == a(a(x)));
  for (const char* g : {"a", "a^2", "a^3", "b", "ba", "ba^2", "ba^3"}) {
    Vec moved = apply_d4(g, x, 5, 5);
    CHECK(moved != x);
    Vec lhs = moved, rhs = x;
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    CHECK(lhs == rhs);
  }
  CHECK(is_oriented(3));
  CHECK_FALSE(is_oriented(8));
}

TEST_CASE("Lipschitz estimate") {
  const Dataset two = Dataset::from_rows({{0, 0}, {2, 0}}, {{1.0}, {0.0}});
  const EstimatedLipschitz e = estimate_lipschitz(two);
  CHECK(e.value == 0.5);
  CHECK(e.min_distance == 2.0);
  CHECK(e.exhaustive);

  CHECK_THROWS_AS(estimate_lipschitz(Dataset::from_rows({{0, 0}, {2, 0}}, {{1.0}, {1.0}})), BoundUnavailable);
  CHECK_THROWS_AS(estimate_lipschitz(Dataset::from_rows({{0, 0}, {0, 0}}, {{1.0}, {0.0}})), BoundUnavailable);
  CHECK_THROWS_AS(estimate_lipschitz(Dataset::from_rows({{0, 0}, {2, 0}}, {{1.0}, {0.5}})), InputError);

  SeededRng rng(4);
  std::vector<Vec> xs, ys;
  for (int i = 0; i < 60; ++i) {
    xs.push_back({rng.normal(), rng.normal(), rng.normal()});
    ys.push_back({rng.uniform01() < 0.4 ? 0.0 : 1.0});
  }
  double best = 1e300;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (ys[i][0] == 1.0 && ys[j][0] == 0.0) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (xs[i][k] - xs[j][k]) * (xs[i][k] - xs[j][k]);
        best = std::min(best, std::sqrt(s));
      }
  const Dataset data = Dataset::from_rows(xs, ys);
  const EstimatedLipschitz full = estimate_lipschitz(data, std::nullopt, 0, 3);
  CHECK(full.min_distance == doctest::Approx(best).epsilon(1e-14));
  CHECK(full.value == doctest::Approx(1.0 / best).epsilon(1e-14));

  std::reverse(xs.begin(), xs.end());
  std::reverse(ys.begin(), ys.end());
  CHECK(estimate_lipschitz(Dataset::from_rows(xs, ys)).min_distance == full.min_distance);

  const EstimatedLipschitz sub = estimate_lipschitz(data, 10, 7);
  CHECK_FALSE(sub.exhaustive);
  CHECK(sub.class_one_used == 10);
  CHECK(sub.value <= full.value);

  SUBCASE("extra negatives join the response-0 class") {
    std::vector<double> negatives;
    for (int k = 0; k < 3 * 40; ++k) negatives.push_back(rng.normal());
    const Dataset fwd = Dataset::from_rows(xs, ys);
    double with_neg = full.min_distance;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (ys[i][0] != 1.0) continue;
      for (std::size_t k = 0; k < 40; ++k) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += (xs[i][c] - negatives[3 * k + c]) * (xs[i][c] - negatives[3 * k + c]);
        with_neg = std::min(with_neg, std::sqrt(s));
      }
    }
    const EstimatedLipschitz e2 = estimate_lipschitz(fwd, negatives);
    CHECK(e2.min_distance == doctest::Approx(with_neg).epsilon(1e-14));
    CHECK(e2.value >= full.value);
    CHECK(e2.negatives_used == 40);
    CHECK(estimate_lipschitz(fwd, std::span<const double>{}).value == full.value);
    CHECK_THROWS_AS(estimate_lipschitz(fwd, std::vector<double>{1.0, 2.0}), InputError);
    CHECK(estimate_lipschitz(fwd, negatives, 5, 1).negatives_used == 5);

    const Dataset single = Dataset::from_rows({{0, 0, 0}, {1, 0, 0}}, {{1.0}, {1.0}});
    CHECK(estimate_lipschitz(single, std::vector<double>{0, 0, 4}).value == 0.25);
  }
}

TEST_CASE("orientation datasets from the bundled subset") {
  if (!fs::exists(kData / "train-images-idx3-ubyte.gz")) {
    MESSAGE("MNIST subset not found, skipping");
    return;
  }
  const ImageDataset all = real_images();
  CHECK(all.size() == 5000);
  CHECK(all.rows == 28);

  const ImageDataset threes = all.with_label(3);
  const OrientationDataset d3 = build_orientation_dataset(threes, 3, kOrientedDigits, 1);
  CHECK(d3.data.size() == threes.size());
  const std::size_t reflected = static_cast<std::size_t>(std::count(d3.reflected.begin(), d3.reflected.end(), true));
  CHECK(std::abs(static_cast<long>(reflected) - static_cast<long>(d3.data.size() - reflected)) <= 1);
  for (std::size_t r = 0; r < d3.data.size(); ++r) {
    CHECK(d3.data.output(r)[0] == (d3.reflected[r] ? 0.0 : 1.0));
    const auto source = threes.image(d3.source_index[r]);
    const Vec expect = d3.reflected[r] ? apply_d4("b", source, 28, 28) : Vec(source.begin(), source.end());
    CHECK(std::equal(expect.begin(), expect.end(), d3.data.input(r).begin()));
  }

  const OrientationDataset d8 = build_orientation_dataset(all.with_label(8), 8, kOrientedDigits, 1);
  for (std::size_t r = 0; r < d8.data.size(); ++r) CHECK(d8.data.output(r)[0] == 1.0);

  SUBCASE("experiments") {
    const ImageDataset not3 = images_without_label(all, 3);
    CHECK(not3.size() == all.size() - threes.size());
    CHECK(std::none_of(not3.labels.begin(), not3.labels.end(), [](std::uint8_t l) { return l == 3; }));

    MnistConfig c;
    c.m = 1000;
    c.seed = 2;
    const MnistReport r8 = run_mnist_experiment(d8, c);
    CHECK(r8.vacuous);
    CHECK(r8.p_value == 1.0);
    CHECK(r8.n0 == 0);

    CHECK_THROWS_AS(run_mnist_experiment(d3, c), ConfigError);
    const MnistReport r3 = run_mnist_experiment(d3, c, &not3);
    CHECK_FALSE(r3.vacuous);
    CHECK(r3.lipschitz->negatives_used == not3.size());
    CHECK(r3.n0 > 0);
    CHECK(r3.p_value == 0.0);

    c.group = GroupChoice::reflection;
    const MnistReport rb = run_mnist_experiment(d3, c, &not3);
    CHECK(rb.n0 > r3.n0);

    c.group = GroupChoice::rotations;
    CHECK(run_mnist_experiment(d3, c, &not3).n0 == 0);

    // The orientation-only bound is never tighter than the other-digits one.
    c.group = GroupChoice::d4;
    c.bound_source = BoundSource::orientation;
    const MnistReport loose = run_mnist_experiment(d3, c);
    CHECK(loose.lipschitz->value <= r3.lipschitz->value);
    CHECK(loose.n0 >= r3.n0);

    // A precomputed bound gives the same report as computing it inline.
    c.bound_source = BoundSource::other_digits;
    const EstimatedLipschitz shared = estimate_mnist_bound(d3, c, &not3);
    CHECK(shared.value == r3.lipschitz->value);
    const MnistReport reused = run_mnist_experiment(d3, c, shared);
    CHECK(reused.n0 == r3.n0);
    CHECK(reused.p_value == r3.p_value);
    CHECK(io::dump(io::to_json(reused)) == io::dump(io::to_json(r3)));
    CHECK_THROWS_AS(run_mnist_experiment(d3, c, EstimatedLipschitz{}), InputError);
    CHECK(run_mnist_experiment(d8, c, EstimatedLipschitz{}).vacuous);

    CHECK(bound_source_from_string("orientation") == BoundSource::orientation);
    CHECK(to_string(BoundSource::other_digits) == "other-digits");
    CHECK_THROWS_AS(bound_source_from_string("nearest"), ConfigError);
  }

  SUBCASE("pairs inside one class never exceed the bound") {
    const EstimatedLipschitz est = estimate_lipschitz(d3.data);
    const GroupAction action = GroupAction::image_d4(28);
    AvtConfig c;
    c.m = 1000;
    c.thresholds = {0.0};
    c.bound = VariationBound::holder(est.value);
    c.generator_dist = GeneratorDistribution::uniform({action.at("a"), action.at("b")});
    c.keep_samples = true;
    const AvtReport r = run_avt(d3.data, action, c);
    std::size_t positive = 0;
    for (const AvtSample& s : r.samples) {
      if (d3.data.output(s.pair.i)[0] == d3.data.output(s.pair.j)[0]) CHECK(s.statistic <= 0.0);
      if (s.statistic > 0.0) ++positive;
    }
    CHECK(positive == r.per_threshold[0].exceedances);
  }
}
