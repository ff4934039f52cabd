#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqtest/core/errors.hpp"
#include "eqtest/sampling/rng.hpp"
#include "eqtest/sampling/sampling.hpp"
#include "eqtest/synth/targets.hpp"

using namespace eqt;

namespace {

Dataset random_dataset(SeededRng& rng, std::size_t n, std::size_t d) {
  std::vector<double> x(n * d), y(n);
  for (double& v : x) v = rng.normal();
  for (double& v : y) v = rng.normal();
  return Dataset(d, 1, std::move(x), std::move(y));
}

// Reference scan written independently of the library.
Neighbour oracle_nn(std::span<const double> q, const Dataset& data, std::optional<std::size_t> exclude) {
  Neighbour best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (exclude && *exclude == i) continue;
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) s += (q[k] - data.input(i)[k]) * (q[k] - data.input(i)[k]);
    const double d = std::sqrt(s);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

bool same_pairs(const std::vector<SampledPair>& a, const std::vector<SampledPair>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].g != b[k].g || a[k].i != b[k].i || a[k].j != b[k].j || a[k].pair_distance != b[k].pair_distance ||
        a[k].transformed_point != b[k].transformed_point)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("seeded streams are reproducible and distinct") {
  SeededRng a(42, 3), b(42, 3), c(42, 4);
  std::vector<double> va, vb, vc;
  for (int k = 0; k < 100; ++k) {
    va.push_back(a.uniform01());
    vb.push_back(b.uniform01());
    vc.push_back(c.uniform01());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
}

TEST_CASE("generator sampling follows the configured weights") {
  const GroupAction rot = GroupAction::axis_rotation();
  const GeneratorDistribution dist = default_distribution(rot);
  SeededRng rng(7);
  std::vector<int> counts(rot.size(), 0);
  const int draws = 30000;
  for (int k = 0; k < draws; ++k) ++counts[sample_generator(dist, rng).value];
  CHECK(counts[0] == 0);
  const double sd = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (std::uint32_t g = 1; g < 4; ++g) CHECK(std::abs(counts[g] - draws / 3.0) < 3 * sd);

  const GroupAction d4 = GroupAction::image_d4(4);
  const auto b = GeneratorDistribution::point_mass(d4.at("b"));
  for (int k = 0; k < 100; ++k) CHECK(sample_generator(b, rng) == d4.at("b"));

  SeededRng r1(9), r2(9);
  for (int k = 0; k < 200; ++k) CHECK(sample_generator(dist, r1) == sample_generator(dist, r2));
}

TEST_CASE("nearest neighbour examples") {
  const Dataset d = Dataset::from_rows({{1, 0}, {3, 0}}, {{0}, {0}});
  const Metric e = Metric::euclidean();
  Neighbour nn = nearest_neighbour(Vec{0, 0}, d, e);
  CHECK(nn.index == 0);
  CHECK(nn.distance == 1.0);

  nn = nearest_neighbour(Vec{3, 0}, d, e);
  CHECK(nn.index == 1);
  CHECK(nn.distance == 0.0);

  nn = nearest_neighbour(Vec{3, 0}, d, e, 1);
  CHECK(nn.index == 0);

  const Dataset tie = Dataset::from_rows({{-1, 0}, {1, 0}, {0, 1}}, {{0}, {0}, {0}});
  CHECK(nearest_neighbour(Vec{0, 0}, tie, e).index == 0);

  const Dataset dup = Dataset::from_rows({{0, 0}, {0, 0}}, {{0}, {0}});
  CHECK(nearest_neighbour(Vec{0, 0}, dup, e, 0).index == 1);
  CHECK_THROWS_AS(nearest_neighbour(Vec{0, 0}, dup, e, 0, true), InputError);
  CHECK_THROWS_AS(nearest_neighbour(Vec{0}, dup, e), InputError);
}

TEST_CASE("nearest neighbour matches an exhaustive oracle") {
  SeededRng rng(2024);
  const Metric e = Metric::euclidean();
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 2 + rng.uniform_index(499);
    const std::size_t d = 1 + rng.uniform_index(20);
    const Dataset data = random_dataset(rng, n, d);
    Vec q(d);
    for (double& v : q) v = rng.normal();
    std::optional<std::size_t> exclude;
    if (inst % 2) exclude = rng.uniform_index(n);
    const Neighbour got = nearest_neighbour(q, data, e, exclude);
    const Neighbour want = oracle_nn(q, data, exclude);
    CHECK(got.index == want.index);
    CHECK(got.distance == doctest::Approx(want.distance).epsilon(1e-12));
    if (exclude) CHECK(got.index != *exclude);
  }
}

TEST_CASE("nearest-neighbour pairs") {
  SeededRng data_rng(1);
  const Dataset data = random_dataset(data_rng, 60, 2);
  const GroupAction rot = GroupAction::axis_rotation();
  const Metric e = Metric::euclidean();

  SUBCASE("valid indices and distances") {
    SeededRng rng(3);
    const auto pairs = sample_pairs_nn(data, rot, default_distribution(rot), 500, e, rng);
    CHECK(pairs.size() == 500);
    for (const SampledPair& p : pairs) {
      CHECK(p.i < data.size());
      CHECK(p.j < data.size());
      CHECK(p.pair_distance >= 0.0);
      CHECK(p.g != rot.identity());
      CHECK(p.transformed_point == rot.apply_input(p.g, data.input(p.i)));
      CHECK(p.j == oracle_nn(p.transformed_point, data, std::nullopt).index);
    }
  }
  SUBCASE("identity never pairs a point with itself") {
    SeededRng small_rng(4);
    const Dataset small = random_dataset(small_rng, 10, 2);
    SeededRng rng(5);
    const auto pairs =
        sample_pairs_nn(small, rot, GeneratorDistribution::point_mass(rot.identity()), 1000, e, rng);
    std::vector<bool> seen(10, false);
    for (const SampledPair& p : pairs) {
      CHECK(p.j != p.i);
      CHECK(p.j == oracle_nn(small.input(p.i), small, p.i).index);
      seen[p.i] = true;
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
  }
  SUBCASE("self-pairs are allowed when the image moves") {
    // R·(1,0) = (0,1) is closer to (1,0) than to (5,5).
    const Dataset d = Dataset::from_rows({{1, 0}, {5, 5}}, {{0}, {1}});
    SeededRng rng(6);
    const auto pairs = sample_pairs_nn(d, rot, GeneratorDistribution::point_mass(rot.at("R")), 50, e, rng);
    for (const SampledPair& p : pairs)
      if (p.i == 0) CHECK(p.j == 0);
    // The origin is fixed by R, so it is excluded from its own candidates.
    const Dataset fixed = Dataset::from_rows({{0, 0}, {2, 2}}, {{0}, {1}});
    for (const SampledPair& p :
         sample_pairs_nn(fixed, rot, GeneratorDistribution::point_mass(rot.at("R")), 50, e, rng))
      CHECK(p.j != p.i);
  }
  SUBCASE("deterministic and independent of the worker count") {
    SeededRng a(11), b(11), c(11);
    const auto pa = sample_pairs_nn(data, rot, default_distribution(rot), 300, e, a, {.jobs = 1});
    const auto pb = sample_pairs_nn(data, rot, default_distribution(rot), 300, e, b, {.jobs = 1});
    const auto pc = sample_pairs_nn(data, rot, default_distribution(rot), 300, e, c, {.jobs = 4});
    CHECK(same_pairs(pa, pb));
    CHECK(same_pairs(pa, pc));
  }
}

TEST_CASE("pair distances shrink as the sample grows") {
  const GroupAction rot = GroupAction::axis_rotation();
  const SyntheticTarget f2 = SyntheticTarget::from_name("f2", 2);
  auto median_distance = [&](std::size_t n) {
    const Dataset d = generate_dataset(f2, InputLaw::ball(), NoiseSpec::none(), n, 100 + n);
    SeededRng rng(n);
    auto pairs = sample_pairs_nn(d, rot, default_distribution(rot), 501, Metric::euclidean(), rng);
    std::vector<double> dist;
    for (const auto& p : pairs) dist.push_back(p.pair_distance);
    std::nth_element(dist.begin(), dist.begin() + 250, dist.end());
    return dist[250];
  };
  CHECK(median_distance(1000) < median_distance(100));
}

TEST_CASE("uniform pairs") {
  SeededRng data_rng(21);
  const Dataset data = random_dataset(data_rng, 20, 2);
  const GroupAction rot = GroupAction::axis_rotation();
  const Metric e = Metric::euclidean();

  SUBCASE("indices are uniform") {
    SeededRng rng(22);
    const std::size_t m = 40000;
    const auto pairs = sample_pairs_uniform(data, rot, default_distribution(rot), m, e, rng);
    std::vector<double> ci(20, 0.0), cj(20, 0.0);
    for (const auto& p : pairs) {
      CHECK(p.pair_distance > 0.0);
      ci[p.i] += 1;
      cj[p.j] += 1;
    }
    auto chi2 = [&](const std::vector<double>& c) {
      double s = 0.0;
      const double expected = static_cast<double>(m) / 20.0;
      for (double v : c) s += (v - expected) * (v - expected) / expected;
      return s;
    };
    // 99.9% point of chi-square with 19 degrees of freedom is 43.8.
    CHECK(chi2(ci) < 43.8);
    CHECK(chi2(cj) < 43.8);
  }
  SUBCASE("zero-distance pairs are redrawn") {
    SeededRng rng(23);
    const auto pairs = sample_pairs_uniform(data, rot, GeneratorDistribution::point_mass(rot.identity()), 2000, e, rng);
    for (const auto& p : pairs) {
      CHECK(p.i != p.j);
      CHECK(p.pair_distance > 0.0);
    }
  }
  SUBCASE("deterministic") {
    SeededRng a(5), b(5);
    CHECK(same_pairs(sample_pairs_uniform(data, rot, default_distribution(rot), 100, e, a),
                     sample_pairs_uniform(data, rot, default_distribution(rot), 100, e, b)));
  }
}
