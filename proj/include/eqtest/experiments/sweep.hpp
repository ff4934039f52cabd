#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqtest/pvt/pvt.hpp"

namespace eqt {

enum class TestKind { avt, pvt };

/// One data-generating setting: target function plus the action under test.
struct Hypothesis {
  std::string label;   ///< e.g. "H0", "H1"
  std::string target;  ///< f2, fd, fsim, f3, f4
  std::string action;  ///< axis_rotation, axis_sign_rotation, trivial
};

/// Grid of Monte Carlo cells. Every cell runs `replicates` fresh datasets.
///
/// Seeds: the dataset of replicate r depends on (seed, hypothesis, n, sigma, r)
/// and the test's pair sampling on those plus m. L, t and q do not enter, so
/// cells that differ only in them see identical data and pairs.
struct SweepSpec {
  TestKind test = TestKind::avt;
  std::vector<Hypothesis> hypotheses;
  std::string input_law = "gaussian";  ///< gaussian: N(0, 4I); ball: U(B(0, 4))
  std::size_t dimension = 2;
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> m_grid;  ///< empty: m = n
  std::vector<double> lipschitz_grid{1.0};
  std::vector<double> sigma_grid{0.05};
  std::vector<double> t_sigma_multiples{2.0};  ///< t = multiple * sigma
  std::vector<double> q_grid{0.95};
  std::size_t batches = 100;
  Pairing baseline = Pairing::nearest_neighbour;
  Pairing batch_pairing = Pairing::uniform;
  double holder_alpha = 1.0;
  std::size_t replicates = 100;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned jobs = 0;  ///< 0: hardware concurrency

  void validate() const;
};

struct RejectionCell {
  std::string hypothesis;
  std::size_t n = 0;
  std::size_t m = 0;
  double sigma = 0.0;
  double lipschitz = 0.0;  ///< avt only
  double t = 0.0;          ///< avt only
  double q = 0.0;          ///< pvt only
  std::size_t rejections = 0;
  std::size_t replicates = 0;
  double proportion = 0.0;
  double se = 0.0;  ///< sqrt(p(1-p)/R)
};

struct RejectionTable {
  SweepSpec spec;
  std::vector<RejectionCell> cells;

  /// Matching cell; parameters that do not apply to the test are ignored.
  /// Throws InputError when absent.
  const RejectionCell& at(const std::string& hypothesis, std::size_t n, std::size_t m, double sigma,
                          double lipschitz = 0.0, double t = 0.0, double q = 0.0) const;
};

RejectionTable run_sweep(const SweepSpec& spec);

/// Lipschitz constants covering tight, loose and invalid bounds for f2.
std::vector<double> v_sensitivity_grid();
/// `base` swept over v_sensitivity_grid() (AVT).
RejectionTable run_v_sensitivity(SweepSpec base);
/// `base` swept over q in {0.5, 0.75, 0.9, 0.95, 1} (PVT).
RejectionTable run_q_sensitivity(SweepSpec base);

}  // namespace eqt
