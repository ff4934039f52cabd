#include "eqtest/synth/fig2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqtest/core/errors.hpp"
#include "eqtest/core/group_action.hpp"
#include "eqtest/synth/kernel.hpp"
#include "eqtest/synth/targets.hpp"
#include "eqtest/util/parallel.hpp"

namespace eqt {

namespace {

constexpr std::size_t kDim = 2;
const char* const kTargets[] = {"fsim", "f2"};

double bandwidth(double c, std::size_t n) {
  return c * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(kDim) + 4.0));
}

struct ReplicateMse {
  double plain = 0.0;
  double symmetrised = 0.0;
  std::size_t excluded = 0;
};

// Test points where either estimator sees an empty window are dropped from
// both, so the two errors are always averaged over the same points.
ReplicateMse replicate_mse(const std::string& target_name, std::size_t n, double c, const Fig2Config& config,
                           std::uint64_t seed, const GroupAction& rotations) {
  const SyntheticTarget target = SyntheticTarget::from_name(target_name, kDim);
  const InputLaw law = InputLaw::ball(config.radius);
  const NoiseSpec noise = NoiseSpec::uniform(config.noise_half_width);
  const Dataset train = generate_dataset(target, law, noise, n, derive_seed(seed, {0}));
  const Dataset test = generate_dataset(target, law, noise, n, derive_seed(seed, {1}));
  const double h = bandwidth(c, n);
  const KernelEstimator plain(h);
  const KernelEstimator sym(h, &rotations);
  ReplicateMse out;
  std::size_t used = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto a = plain.predict(train, test.input(i));
    const auto b = sym.predict(train, test.input(i));
    if (!a || !b) {
      ++out.excluded;
      continue;
    }
    const double y = test.output(i)[0];
    out.plain += (*a - y) * (*a - y);
    out.symmetrised += (*b - y) * (*b - y);
    ++used;
  }
  if (used == 0) {
    out.plain = out.symmetrised = std::numeric_limits<double>::infinity();
    return out;
  }
  out.plain /= static_cast<double>(used);
  out.symmetrised /= static_cast<double>(used);
  return out;
}

std::pair<double, double> mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var = v.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

Fig2Result run_fig2_experiment(const Fig2Config& config) {
  if (config.n_grid.empty()) throw ConfigError("n grid is empty");
  if (config.replicates == 0) throw ConfigError("replicates must be at least 1");
  const GroupAction rotations = GroupAction::axis_rotation();

  Fig2Result result;
  result.config = config;
  result.bandwidth_constant = config.bandwidth_constant;

  std::vector<std::size_t> sorted_n = config.n_grid;
  std::sort(sorted_n.begin(), sorted_n.end());
  const std::size_t calibration_n = sorted_n[sorted_n.size() / 2];
  for (const char* target : kTargets) {
    if (result.bandwidth_constant.count(target)) continue;
    if (config.calibration_grid.empty()) throw ConfigError("bandwidth calibration grid is empty");
    const std::size_t tasks = config.calibration_grid.size() * config.calibration_replicates;
    std::vector<double> errors(tasks);
    parallel_for(tasks, config.jobs, [&](std::size_t idx) {
      const std::size_t ci = idx / config.calibration_replicates;
      const std::size_t r = idx % config.calibration_replicates;
      // Held-out stream: never reused by the reported replicates.
      const std::uint64_t seed = derive_seed(config.seed, {0xCA1, r});
      errors[idx] = replicate_mse(target, calibration_n, config.calibration_grid[ci], config, seed, rotations).plain;
    });
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t ci = 0; ci < config.calibration_grid.size(); ++ci) {
      double total = 0.0;
      for (std::size_t r = 0; r < config.calibration_replicates; ++r)
        total += errors[ci * config.calibration_replicates + r];
      if (total < best_err) {
        best_err = total;
        best = ci;
      }
    }
    result.bandwidth_constant[target] = config.calibration_grid[best];
  }

  const std::size_t per_target = config.n_grid.size() * config.replicates;
  std::vector<Fig2Row> rows(2 * per_target);
  parallel_for(rows.size(), config.jobs, [&](std::size_t idx) {
    const std::size_t ti = idx / per_target;
    const std::size_t ni = (idx % per_target) / config.replicates;
    const std::size_t r = idx % config.replicates;
    const std::string target = kTargets[ti];
    const std::size_t n = config.n_grid[ni];
    const std::uint64_t seed = derive_seed(config.seed, {ti, n, r});
    const ReplicateMse mse = replicate_mse(target, n, result.bandwidth_constant.at(target), config, seed, rotations);
    rows[idx] = {target, n, r, mse.plain, mse.symmetrised, mse.excluded};
  });
  result.rows = rows;

  for (std::size_t ti = 0; ti < 2; ++ti) {
    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
      std::vector<double> plain, sym, diff;
      std::size_t excluded = 0;
      for (std::size_t r = 0; r < config.replicates; ++r) {
        const Fig2Row& row = rows[ti * per_target + ni * config.replicates + r];
        if (!std::isfinite(row.mse_plain)) continue;
        plain.push_back(row.mse_plain);
        sym.push_back(row.mse_symmetrised);
        diff.push_back(row.mse_symmetrised - row.mse_plain);
        excluded += row.excluded_points;
      }
      if (plain.empty()) throw ConfigError("every test point fell in an empty window; widen the bandwidth");
      Fig2Summary s;
      s.target = kTargets[ti];
      s.n = config.n_grid[ni];
      std::tie(s.mean_plain, s.se_plain) = mean_se(plain);
      std::tie(s.mean_symmetrised, s.se_symmetrised) = mean_se(sym);
      std::tie(s.mean_difference, s.se_difference) = mean_se(diff);
      s.excluded_points = excluded;
      result.summary.push_back(s);
    }
  }
  return result;
}

}  // namespace eqt
