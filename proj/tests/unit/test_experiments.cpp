#include <doctest.h>

#include <cmath>

#include "eqtest/avt/avt.hpp"
#include "eqtest/core/errors.hpp"
#include "eqtest/experiments/sweep.hpp"
#include "eqtest/synth/targets.hpp"

using namespace eqt;

namespace {

SweepSpec small_avt_spec() {
  SweepSpec s;
  s.test = TestKind::avt;
  s.hypotheses = {{"H0", "f2", "axis_sign_rotation"}, {"H1", "f2", "axis_rotation"}};
  s.n_grid = {60, 120};
  s.m_grid = {40, 80};
  s.lipschitz_grid = {0.5, 1.0, 2.0};
  s.sigma_grid = {0.05, 0.2};
  s.t_sigma_multiples = {2.0};
  s.replicates = 12;
  s.seed = 17;
  s.jobs = 1;
  return s;
}

}  // namespace

TEST_CASE("sweep validation") {
  SweepSpec s = small_avt_spec();
  CHECK_NOTHROW(s.validate());
  SweepSpec bad = s;
  bad.hypotheses.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.n_grid.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.replicates = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.lipschitz_grid.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.test = TestKind::pvt;
  bad.q_grid.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.hypotheses[0].action = "reflection";
  CHECK_THROWS_AS(run_sweep(bad), ConfigError);
}

TEST_CASE("AVT sweep table") {
  const SweepSpec spec = small_avt_spec();
  const RejectionTable table = run_sweep(spec);
  CHECK(table.cells.size() == 2 * 2 * 2 * 2 * 3);

  for (const RejectionCell& c : table.cells) {
    CHECK(c.replicates == 12);
    CHECK(c.proportion == static_cast<double>(c.rejections) / 12.0);
    CHECK(c.se == doctest::Approx(std::sqrt(c.proportion * (1.0 - c.proportion) / 12.0)));
    CHECK(c.t == doctest::Approx(2.0 * c.sigma));
  }

  SUBCASE("a cell recomputed from the documented seeds") {
    const RejectionCell& cell = table.at("H1", 120, 80, 0.05, 1.0, 0.1);
    const GroupAction rot = GroupAction::axis_rotation();
    std::size_t rejections = 0;
    for (std::uint64_t r = 0; r < spec.replicates; ++r) {
      const Dataset data = generate_dataset(SyntheticTarget::from_name("f2", 2), InputLaw::gaussian(),
                                            NoiseSpec::gaussian(0.05), 120, derive_seed(17, {1, 1, 120, 0, r}));
      AvtConfig c;
      c.m = 80;
      c.thresholds = {0.1};
      c.noise = NoiseModel::gaussian(0.05);
      c.bound = VariationBound::holder(1.0);
      c.seed = derive_seed(17, {2, 1, 120, 0, 80, r});
      if (run_avt(data, rot, c).p_value <= 0.05) ++rejections;
    }
    CHECK(cell.rejections == rejections);
  }

  SUBCASE("rejections never grow with L on shared data") {
    for (const auto& h : {"H0", "H1"})
      for (std::size_t n : spec.n_grid)
        for (std::size_t m : spec.m_grid)
          for (double sigma : spec.sigma_grid) {
            const double t = 2.0 * sigma;
            CHECK(table.at(h, n, m, sigma, 0.5, t).rejections >= table.at(h, n, m, sigma, 1.0, t).rejections);
            CHECK(table.at(h, n, m, sigma, 1.0, t).rejections >= table.at(h, n, m, sigma, 2.0, t).rejections);
          }
  }

  SUBCASE("deterministic and independent of the worker count") {
    SweepSpec threaded = spec;
    threaded.jobs = 3;
    const RejectionTable again = run_sweep(threaded);
    REQUIRE(again.cells.size() == table.cells.size());
    for (std::size_t k = 0; k < table.cells.size(); ++k) CHECK(again.cells[k].rejections == table.cells[k].rejections);
  }

  CHECK_THROWS_AS(table.at("H2", 60, 40, 0.05, 1.0, 0.1), InputError);
  CHECK_THROWS_AS(table.at("H0", 61, 40, 0.05, 1.0, 0.1), InputError);
}

TEST_CASE("m defaults to n") {
  SweepSpec s = small_avt_spec();
  s.m_grid.clear();
  s.lipschitz_grid = {1.0};
  s.sigma_grid = {0.05};
  s.replicates = 3;
  const RejectionTable t = run_sweep(s);
  for (const RejectionCell& c : t.cells) CHECK(c.m == c.n);
}

TEST_CASE("PVT sweep with a quantile grid") {
  SweepSpec s;
  s.test = TestKind::pvt;
  s.hypotheses = {{"H1", "f2", "axis_rotation"}};
  s.n_grid = {80};
  s.q_grid = {0.5, 0.95};
  s.batches = 20;
  s.replicates = 5;
  s.seed = 2;
  const RejectionTable t = run_sweep(s);
  REQUIRE(t.cells.size() == 2);
  CHECK(t.cells[0].q == 0.5);
  CHECK(t.cells[1].q == 0.95);

  // Cell for q = 0.95 recomputed directly.
  std::size_t rejections = 0;
  for (std::uint64_t r = 0; r < 5; ++r) {
    const Dataset data = generate_dataset(SyntheticTarget::from_name("f2", 2), InputLaw::gaussian(),
                                          NoiseSpec::gaussian(0.05), 80, derive_seed(2, {1, 0, 80, 0, r}));
    PvtConfig c;
    c.m = 80;
    c.batches = 20;
    c.q = 0.95;
    c.seed = derive_seed(2, {2, 0, 80, 0, 80, r});
    if (run_pvt(data, GroupAction::axis_rotation(), c).p_value <= 0.05) ++rejections;
  }
  CHECK(t.at("H1", 80, 80, 0.05, 0, 0, 0.95).rejections == rejections);

  const RejectionTable qs = run_q_sensitivity(s);
  CHECK(qs.cells.size() == 5);
}

TEST_CASE("sensitivity grid") {
  const auto g = v_sensitivity_grid();
  REQUIRE(g.size() == 7);
  CHECK(g[0] == doctest::Approx(std::exp(-1.0)));
  CHECK(g[1] == 0.5);
  CHECK(g[2] == 1.0);
  CHECK(g[3] == 2.0);
  CHECK(g[4] == doctest::Approx(std::exp(-1.2)));
  CHECK(g[5] == doctest::Approx(std::exp(-2.0)));
  CHECK(g[6] == doctest::Approx(std::exp(-3.0)));
}
