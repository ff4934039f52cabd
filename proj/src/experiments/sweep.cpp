#include "eqtest/experiments/sweep.hpp"

#include <cmath>

#include "eqtest/avt/avt.hpp"
#include "eqtest/core/errors.hpp"
#include "eqtest/synth/targets.hpp"
#include "eqtest/util/parallel.hpp"

namespace eqt {

namespace {

GroupAction action_by_name(const std::string& name) {
  if (name == "axis_rotation" || name == "rotation") return GroupAction::axis_rotation();
  if (name == "axis_sign_rotation" || name == "sign_rotation") return GroupAction::axis_sign_rotation();
  if (name == "trivial") return GroupAction::trivial();
  throw ConfigError("sweeps support the axis_rotation, axis_sign_rotation and trivial actions, not '" + name + "'");
}

// Inner settings evaluated on one dataset.
struct Inner {
  std::size_t m;
  double lipschitz;
  double t_multiple;
  double q;
};

std::vector<Inner> inner_settings(const SweepSpec& spec, std::size_t n) {
  std::vector<std::size_t> ms = spec.m_grid.empty() ? std::vector<std::size_t>{n} : spec.m_grid;
  std::vector<Inner> out;
  for (std::size_t m : ms) {
    if (spec.test == TestKind::avt) {
      for (double l : spec.lipschitz_grid)
        for (double tm : spec.t_sigma_multiples) out.push_back({m, l, tm, 0.0});
    } else {
      for (double q : spec.q_grid) out.push_back({m, 0.0, 0.0, q});
    }
  }
  return out;
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

void SweepSpec::validate() const {
  if (hypotheses.empty()) throw ConfigError("sweep needs at least one hypothesis");
  if (n_grid.empty()) throw ConfigError("sweep n grid is empty");
  if (sigma_grid.empty()) throw ConfigError("sweep sigma grid is empty");
  if (test == TestKind::avt && (lipschitz_grid.empty() || t_sigma_multiples.empty()))
    throw ConfigError("AVT sweeps need nonempty L and t grids");
  if (test == TestKind::pvt && q_grid.empty()) throw ConfigError("PVT sweeps need a nonempty q grid");
  if (replicates == 0) throw ConfigError("replicates must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  for (const auto& h : hypotheses) {
    action_by_name(h.action);
    SyntheticTarget::from_name(h.target, dimension);
  }
  InputLaw::from_name(input_law);
}

const RejectionCell& RejectionTable::at(const std::string& hypothesis, std::size_t n, std::size_t m, double sigma,
                                        double lipschitz, double t, double q) const {
  for (const RejectionCell& c : cells) {
    if (c.hypothesis != hypothesis || c.n != n || c.m != m || !same(c.sigma, sigma)) continue;
    if (spec.test == TestKind::avt && (!same(c.lipschitz, lipschitz) || !same(c.t, t))) continue;
    if (spec.test == TestKind::pvt && !same(c.q, q)) continue;
    return c;
  }
  throw InputError("no such cell in the rejection table");
}

RejectionTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Task {
    std::size_t hyp;
    std::size_t n_index;
    std::size_t sigma_index;
    std::size_t replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t h = 0; h < spec.hypotheses.size(); ++h)
    for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni)
      for (std::size_t si = 0; si < spec.sigma_grid.size(); ++si)
        for (std::size_t r = 0; r < spec.replicates; ++r) tasks.push_back({h, ni, si, r});

  const InputLaw law = InputLaw::from_name(spec.input_law);
  std::vector<std::vector<char>> rejected(tasks.size());
  parallel_for(tasks.size(), resolve_jobs(spec.jobs), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const Hypothesis& hyp = spec.hypotheses[task.hyp];
    const std::size_t n = spec.n_grid[task.n_index];
    const double sigma = spec.sigma_grid[task.sigma_index];
    const SyntheticTarget target = SyntheticTarget::from_name(hyp.target, spec.dimension);
    const GroupAction action = action_by_name(hyp.action);
    const std::uint64_t data_seed = derive_seed(spec.seed, {1, task.hyp, n, task.sigma_index, task.replicate});
    const Dataset data = generate_dataset(target, law, NoiseSpec::gaussian(sigma), n, data_seed);
    std::vector<char>& out = rejected[idx];
    const std::vector<Inner> inner = inner_settings(spec, n);
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const std::uint64_t test_seed =
          derive_seed(spec.seed, {2, task.hyp, n, task.sigma_index, inner[k].m, task.replicate});
      if (spec.test == TestKind::avt) {
        AvtConfig config;
        config.m = inner[k].m;
        config.thresholds = {inner[k].t_multiple * sigma};
        config.noise = NoiseModel::gaussian(sigma);
        config.bound = VariationBound::holder(inner[k].lipschitz, spec.holder_alpha);
        config.seed = test_seed;
        out.push_back(run_avt(data, action, config).p_value <= spec.alpha ? 1 : 0);
      } else {
        // The q levels of one m share their samples; run them together.
        PvtConfig config;
        config.m = inner[k].m;
        config.batches = spec.batches;
        config.bound = VariationBound::order(spec.holder_alpha);
        config.baseline = spec.baseline;
        config.batch_pairing = spec.batch_pairing;
        config.seed = test_seed;
        for (const PvtReport& r : run_pvt_grid(data, action, config, spec.q_grid))
          out.push_back(r.p_value <= spec.alpha ? 1 : 0);
        k += spec.q_grid.size() - 1;
      }
    }
  });

  RejectionTable table;
  table.spec = spec;
  std::size_t idx = 0;
  for (std::size_t h = 0; h < spec.hypotheses.size(); ++h) {
    for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
      for (std::size_t si = 0; si < spec.sigma_grid.size(); ++si) {
        const std::size_t n = spec.n_grid[ni];
        const std::vector<Inner> inner = inner_settings(spec, n);
        for (std::size_t k = 0; k < inner.size(); ++k) {
          RejectionCell cell;
          cell.hypothesis = spec.hypotheses[h].label;
          cell.n = n;
          cell.m = inner[k].m;
          cell.sigma = spec.sigma_grid[si];
          if (spec.test == TestKind::avt) {
            cell.lipschitz = inner[k].lipschitz;
            cell.t = inner[k].t_multiple * cell.sigma;
          } else {
            cell.q = inner[k].q;
          }
          cell.replicates = spec.replicates;
          for (std::size_t r = 0; r < spec.replicates; ++r) cell.rejections += rejected[idx + r][k];
          cell.proportion = static_cast<double>(cell.rejections) / static_cast<double>(cell.replicates);
          cell.se = std::sqrt(cell.proportion * (1.0 - cell.proportion) / static_cast<double>(cell.replicates));
          table.cells.push_back(cell);
        }
        idx += spec.replicates;
      }
    }
  }
  return table;
}

std::vector<double> v_sensitivity_grid() {
  return {std::exp(-1.0), 0.5, 1.0, 2.0, std::exp(-1.2), std::exp(-2.0), std::exp(-3.0)};
}

RejectionTable run_v_sensitivity(SweepSpec base) {
  base.test = TestKind::avt;
  base.lipschitz_grid = v_sensitivity_grid();
  return run_sweep(base);
}

RejectionTable run_q_sensitivity(SweepSpec base) {
  base.test = TestKind::pvt;
  base.q_grid = {0.5, 0.75, 0.9, 0.95, 1.0};
  return run_sweep(base);
}

}  // namespace eqt
